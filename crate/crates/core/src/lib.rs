//! Decoherence and relaxation rates of nuclear-spin qubits hosted in an
//! easy-axis antiferromagnet.
//!
//! The crate covers four computations sharing one spectral kernel:
//!
//! - one-qubit nonadiabatic decoherence/relaxation rates (quadrature and
//!   closed form), their long-time limit, and the frequency shift;
//! - entangled-pair damping: the Bessel-weighted correlation rate, the total
//!   concurrence damping rate with its τ → ∞ asymptote, and Wootters
//!   concurrence;
//! - adiabatic dephasing by randomly placed impurity nuclear spins and the
//!   impurity concentration a target coherence time allows;
//! - four-spin cluster spectra and the two logical states spanning the
//!   collective-noise-free J = 0 subspace.
//!
//! All rate computations are deterministic: identical inputs produce
//! bit-identical outputs, which the CLI relies on for reproducible figure
//! data.

pub mod adiabatic;
pub mod dfs;
pub mod kernel;
pub mod model;
pub mod quad;
pub mod single_qubit;
pub mod specfun;
pub mod two_qubit;

pub use adiabatic::{
    allowable_concentration, mean_square_modulation, polarization_argument,
    polarization_variance, AdiabaticError, AllowableConcentration, ImpurityParams,
    PREFACTOR_NOTE,
};
pub use dfs::{
    analytic_levels, build_xx0, build_xxx, collective_spin, dfs_report, logical_states,
    total_spin_squared, AnalyticLevel, Axis, ClusterOperator, ClusterState, DfsError, DfsReport,
    LevelGroup,
};
pub use kernel::{kernel_y, weight, KernelArgs, KernelError};
pub use model::{
    magnon_dispersion, xi_max, ModelError, ModelParams, PairConfig, QubitSite, MAX_SEPARATION,
};
pub use quad::{QuadError, QuadResult};
pub use single_qubit::{
    curve, frequency_shift, inverse_decoherence_time, longitudinal_rate, rate_closed_form,
    rate_quadrature, transverse_rate, DecoherenceTime, RateCurve, RateError,
};
pub use specfun::{bessel_j0, ci, si, SpecFunError, SpecFunResult};
pub use two_qubit::{
    asymptotic_correlation_rate, asymptotic_total_rate, bell_initial_state, concurrence_curve,
    concurrence_damping_rate, concurrence_from_correlators, concurrence_from_decrements,
    correlation_rate, shifted_single_rate, total_concurrence_rate, wootters_concurrence,
    AsymptoticRate, ConcurrenceCurve, PairRateBreakdown, TwoQubitDensityMatrix, TwoQubitError,
};
