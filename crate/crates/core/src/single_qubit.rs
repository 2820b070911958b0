//! One-qubit nonadiabatic decoherence and longitudinal relaxation rates.
//!
//! The dimensionless rate is
//!
//! ```text
//! R(Δb, τ) = ∫_0^{ξmax} (√(1+b_C²) + b_C + ξ) · Y(ξ + Δb, τ) dξ
//! ```
//!
//! evaluated by adaptive quadrature, with a closed form available for
//! Δb ≫ s, its τ → ∞ limit (the inverse decoherence time), and the static
//! frequency shift. For the one-magnon mechanism the longitudinal relaxation
//! rate equals the decoherence rate, so both public names share one
//! implementation.

use crate::kernel::{weight_base, y_raw};
use crate::model::{xi_max_raw, ModelParams, QubitSite};
use crate::quad::{self, QuadError, QuadResult};
use crate::specfun::{ci_unchecked, si_unchecked};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Above sτ = 40 the oscillatory kernel terms are below 4e-18 of the
/// Lorentzian part and the mesh no longer needs to resolve them.
const ASYMPTOTIC_STAU: f64 = 40.0;
/// Two kernel oscillation periods per seed panel.
const OSC_PANEL: f64 = 4.0 * std::f64::consts::PI;
const MAX_SEED_POINTS: usize = 2_000_000;
const MAX_PANELS: usize = 4_000_000;
/// Requested absolute quadrature tolerance; the contract allows
/// 1e-10·max(1, |R|), so this leaves an order of magnitude in hand.
const QUAD_TOL: f64 = 1e-11;
/// Secondary tolerance leg: 1e-13 of the integrand's L1 mass.
const REL_L1_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RateError {
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error("tau must be finite and nonnegative, got {0:e}")]
    InvalidTau(f64),
    #[error("closed form requires delta_b > 10 s, got delta_b={delta_b:e}, s={s:e}")]
    ClosedFormDomain { delta_b: f64, s: f64 },
    #[error("operation requires delta_b > 0, got {0:e}")]
    DetuningNonPositive(f64),
    #[error("tau grid must be strictly ascending and finite at index {0}")]
    GridNotAscending(usize),
    #[error("curve point {index} (tau={tau:e}): {source}")]
    AtGridPoint {
        index: usize,
        tau: f64,
        source: QuadError,
    },
}

/// A rate sampled over a τ grid, together with the inputs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateCurve {
    tau: Vec<f64>,
    values: Vec<f64>,
    params: ModelParams,
    site: QubitSite,
}

impl RateCurve {
    pub fn tau(&self) -> &[f64] {
        &self.tau
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn params(&self) -> &ModelParams {
        &self.params
    }
    pub fn site(&self) -> &QubitSite {
        &self.site
    }
}

/// Inverse decoherence time in physical units plus its dimensionless parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecoherenceTime {
    /// 1/T_D in 1/s.
    pub per_second: f64,
    /// The braced factor multiplying omega_E·s·3a²/2π.
    pub braced_factor: f64,
    /// Dimensionless τ → ∞ rate, s · braced_factor.
    pub r_infinity: f64,
}

fn validate_tau(tau: f64) -> Result<(), RateError> {
    if tau.is_finite() && tau >= 0.0 {
        Ok(())
    } else {
        Err(RateError::InvalidTau(tau))
    }
}

/// Accepts a finished integration, or one whose achieved error still meets
/// the 1e-10·max(1,|R|) contract.
fn settle(res: Result<QuadResult, QuadError>) -> Result<QuadResult, QuadError> {
    match res {
        Ok(r) => Ok(r),
        Err(QuadError::NonConvergence {
            achieved, value, ..
        }) if achieved <= 1e-10 * value.abs().max(1.0) => Ok(QuadResult {
            value,
            est_abs_error: achieved,
            evaluations: 0,
        }),
        Err(e) => Err(e),
    }
}

/// Shared seeded integral ∫ w(ξ)·Y(ξ+shift, τ) dξ; `shift` may be negative
/// (site past the turning point), which puts the Lorentzian peak inside the
/// integration range.
pub(crate) fn rate_integral(
    b_c: f64,
    s: f64,
    shift: f64,
    tau: f64,
) -> Result<QuadResult, QuadError> {
    let xm = xi_max_raw(b_c);
    let wb = weight_base(b_c);
    if tau == 0.0 {
        return Ok(QuadResult {
            value: 0.0,
            est_abs_error: 0.0,
            evaluations: 0,
        });
    }
    let mut pts = Vec::new();
    quad::push_lorentzian_ladder(-shift, s, 0.0, xm, &mut pts);
    if s * tau < ASYMPTOTIC_STAU {
        quad::push_uniform(OSC_PANEL / tau, 0.0, xm, MAX_SEED_POINTS, &mut pts);
    }
    let mesh = quad::finish_mesh(0.0, xm, pts);
    settle(quad::integrate(
        |xi| (wb + xi) * y_raw(xi + shift, s, tau),
        &mesh,
        QUAD_TOL,
        REL_L1_TOL,
        MAX_PANELS,
    ))
}

/// Decoherence rate R(Δb_k, τ) by adaptive quadrature.
pub fn rate_quadrature(params: &ModelParams, site: &QubitSite, tau: f64) -> Result<f64, RateError> {
    validate_tau(tau)?;
    Ok(rate_integral(params.b_c(), params.s(), site.delta_b(), tau)?.value)
}

/// Transverse (decoherence) rate; alias of [`rate_quadrature`].
pub fn transverse_rate(params: &ModelParams, site: &QubitSite, tau: f64) -> Result<f64, RateError> {
    rate_quadrature(params, site, tau)
}

/// Longitudinal relaxation rate. For the one-magnon mechanism it equals the
/// transverse rate, so this is the same implementation, not a twin.
pub fn longitudinal_rate(
    params: &ModelParams,
    site: &QubitSite,
    tau: f64,
) -> Result<f64, RateError> {
    rate_quadrature(params, site, tau)
}

/// Closed-form R(Δb_k, τ), valid for Δb_k > 10 s (the s² omitted from the
/// denominators contributes O(s²/Δb²) there).
///
/// The first oscillatory block carries si(Bτ) - si(Δbτ); the opposite order
/// is inconsistent with the integral form by direct evaluation.
pub fn rate_closed_form(
    params: &ModelParams,
    site: &QubitSite,
    tau: f64,
) -> Result<f64, RateError> {
    let s = params.s();
    let db = site.delta_b();
    if db <= 0.0 {
        return Err(RateError::DetuningNonPositive(db));
    }
    if db <= 10.0 * s {
        return Err(RateError::ClosedFormDomain { delta_b: db, s });
    }
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(RateError::InvalidTau(tau));
    }

    let xm = xi_max_raw(params.b_c());
    let a = db;
    let b = xm + db;
    let w0 = weight_base(params.b_c()) - db;
    let steady = s * (w0 * xm / (a * b) + (b / a).ln());

    let st = s * tau;
    if st >= ASYMPTOTIC_STAU {
        // e^{-sτ} < 4e-18: every oscillatory block is dead
        return Ok(steady);
    }
    let e = (-st).exp();
    let si_a = si_unchecked(a * tau).value;
    let si_b = si_unchecked(b * tau).value;
    let ci_a = ci_unchecked(a * tau).value;
    let ci_b = ci_unchecked(b * tau).value;
    let cos_a = (a * tau).cos();
    let cos_b = (b * tau).cos();

    let osc = (w0 * (si_b - si_a) + (cos_a - cos_b) / tau) * e;
    let s_block = s * w0 * (-(cos_a / a - cos_b / b + tau * (si_a - si_b)) * e);
    let log_block = s * (ci_a - ci_b) * e;
    Ok(steady + osc + s_block + log_block)
}

/// Inverse decoherence time 1/T_D = omega_E·s·(3a²/2π)·{braced}. Requires
/// Δb_k > 0.
pub fn inverse_decoherence_time(
    params: &ModelParams,
    site: &QubitSite,
) -> Result<DecoherenceTime, RateError> {
    let db = site.delta_b();
    if db <= 0.0 {
        return Err(RateError::DetuningNonPositive(db));
    }
    let xm = xi_max_raw(params.b_c());
    let w0 = weight_base(params.b_c()) - db;
    let braced = w0 * xm / (db * (xm + db)) + ((xm + db) / db).ln();
    let r_infinity = params.s() * braced;
    Ok(DecoherenceTime {
        per_second: params.physical_rate(r_infinity),
        braced_factor: braced,
        r_infinity,
    })
}

/// Static frequency shift (dimensionless, negative); independent of s.
pub fn frequency_shift(params: &ModelParams, site: &QubitSite) -> Result<f64, RateError> {
    let db = site.delta_b();
    if db <= 0.0 {
        return Err(RateError::DetuningNonPositive(db));
    }
    let xm = xi_max_raw(params.b_c());
    let w0 = weight_base(params.b_c()) - db;
    let a2 = params.a() * params.a();
    Ok(-(3.0 * a2 / (2.0 * std::f64::consts::PI)) * (w0 * ((xm + db) / db).ln() + xm))
}

fn validate_grid(tau_grid: &[f64]) -> Result<(), RateError> {
    for (i, &t) in tau_grid.iter().enumerate() {
        if !(t.is_finite() && t >= 0.0) {
            return Err(RateError::GridNotAscending(i));
        }
        if i > 0 && t <= tau_grid[i - 1] {
            return Err(RateError::GridNotAscending(i));
        }
    }
    Ok(())
}

/// Samples [`rate_quadrature`] over a strictly ascending τ grid. Grid points
/// are evaluated in parallel; the result is independent of schedule.
pub fn curve(
    params: &ModelParams,
    site: &QubitSite,
    tau_grid: &[f64],
) -> Result<RateCurve, RateError> {
    validate_grid(tau_grid)?;
    let results: Vec<Result<f64, QuadError>> = tau_grid
        .par_iter()
        .map(|&tau| rate_integral(params.b_c(), params.s(), site.delta_b(), tau).map(|r| r.value))
        .collect();
    let mut values = Vec::with_capacity(results.len());
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => values.push(v),
            Err(source) => {
                return Err(RateError::AtGridPoint {
                    index,
                    tau: tau_grid[index],
                    source,
                })
            }
        }
    }
    Ok(RateCurve {
        tau: tau_grid.to_vec(),
        values,
        params: *params,
        site: *site,
    })
}
