//! Adiabatic decoherence from the dipole fields of randomly distributed
//! impurity nuclear spins: mean-square frequency modulation and the
//! impurity concentration a target decoherence time allows.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

const MU0_OVER_4PI: f64 = 1e-7; // T·m/A
const HBAR: f64 = 1.054_571_817e-34; // J·s
const K_B: f64 = 1.380_649e-23; // J/K

/// Angular prefactor of the z-z dipole coupling averaged over impurity
/// positions outside radius a: ∫ D_zz² d³r = (μ0/4π·γγħ)²·(16π/15)/a³.
/// Combined with the spin-1/2 variance (1 - tanh²)/4 this equals a 4π/15
/// prefactor applied to (1 - tanh²) directly; the two printed forms of the
/// threshold are the same condition.
pub const PREFACTOR_NOTE: &str = "mean-square prefactor 16*pi/15 includes the spin-1/2 variance \
     factor (1 - tanh^2)/4; it is equivalent to 4*pi/15 applied to (1 - tanh^2) directly";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdiabaticError {
    #[error("{field} must be strictly positive, got {value:e}")]
    NonPositive { field: &'static str, value: f64 },
    #[error(
        "rigid-lattice condition violated: T_parallel_imp = {t_parallel:e} s must exceed \
         10× the target decoherence time {target:e} s"
    )]
    RigidLatticeViolated { t_parallel: f64, target: f64 },
}

/// Impurity-bath parameters (SI units).
///
/// JSON field names: `gamma_I`, `gamma_imp` (rad/s/T), `B` (T), `T_I` (K),
/// `a_min` (m), `C_imp` (1/m³), optional `site_density` (1/m³, defaults to
/// 1/a_min³) and `t_parallel_imp` (s, only checked against the
/// rigid-lattice condition).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ImpurityParamsRaw", into = "ImpurityParamsRaw")]
pub struct ImpurityParams {
    gamma_i: f64,
    gamma_imp: f64,
    b_field: f64,
    t_i: f64,
    a_min: f64,
    c_imp: f64,
    site_density: Option<f64>,
    t_parallel_imp: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct ImpurityParamsRaw {
    #[serde(rename = "gamma_I")]
    gamma_i: f64,
    gamma_imp: f64,
    #[serde(rename = "B")]
    b_field: f64,
    #[serde(rename = "T_I")]
    t_i: f64,
    a_min: f64,
    #[serde(rename = "C_imp")]
    c_imp: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    site_density: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t_parallel_imp: Option<f64>,
}

impl TryFrom<ImpurityParamsRaw> for ImpurityParams {
    type Error = AdiabaticError;
    fn try_from(r: ImpurityParamsRaw) -> Result<Self, AdiabaticError> {
        ImpurityParams::new(r.gamma_i, r.gamma_imp, r.b_field, r.t_i, r.a_min, r.c_imp)
            .and_then(|p| match r.site_density {
                Some(n) => p.with_site_density(n),
                None => Ok(p),
            })
            .and_then(|p| match r.t_parallel_imp {
                Some(t) => p.with_t_parallel(t),
                None => Ok(p),
            })
    }
}

impl From<ImpurityParams> for ImpurityParamsRaw {
    fn from(p: ImpurityParams) -> Self {
        ImpurityParamsRaw {
            gamma_i: p.gamma_i,
            gamma_imp: p.gamma_imp,
            b_field: p.b_field,
            t_i: p.t_i,
            a_min: p.a_min,
            c_imp: p.c_imp,
            site_density: p.site_density,
            t_parallel_imp: p.t_parallel_imp,
        }
    }
}

fn positive(field: &'static str, value: f64) -> Result<f64, AdiabaticError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(AdiabaticError::NonPositive { field, value })
    }
}

impl ImpurityParams {
    pub fn new(
        gamma_i: f64,
        gamma_imp: f64,
        b_field: f64,
        t_i: f64,
        a_min: f64,
        c_imp: f64,
    ) -> Result<Self, AdiabaticError> {
        Ok(ImpurityParams {
            gamma_i: positive("gamma_I", gamma_i)?,
            gamma_imp: positive("gamma_imp", gamma_imp)?,
            b_field: positive("B", b_field)?,
            t_i: positive("T_I", t_i)?,
            a_min: positive("a_min", a_min)?,
            c_imp: positive("C_imp", c_imp)?,
            site_density: None,
            t_parallel_imp: None,
        })
    }

    /// Overrides the lattice site density used for percent conversion.
    pub fn with_site_density(mut self, n: f64) -> Result<Self, AdiabaticError> {
        self.site_density = Some(positive("site_density", n)?);
        Ok(self)
    }

    pub fn with_t_parallel(mut self, t: f64) -> Result<Self, AdiabaticError> {
        self.t_parallel_imp = Some(positive("t_parallel_imp", t)?);
        Ok(self)
    }

    pub fn with_c_imp(mut self, c: f64) -> Result<Self, AdiabaticError> {
        self.c_imp = positive("C_imp", c)?;
        Ok(self)
    }

    pub fn gamma_i(&self) -> f64 {
        self.gamma_i
    }
    pub fn gamma_imp(&self) -> f64 {
        self.gamma_imp
    }
    pub fn b_field(&self) -> f64 {
        self.b_field
    }
    pub fn t_i(&self) -> f64 {
        self.t_i
    }
    pub fn a_min(&self) -> f64 {
        self.a_min
    }
    pub fn c_imp(&self) -> f64 {
        self.c_imp
    }

    /// Site density for percent conversion, 1/a_min³ unless overridden.
    pub fn site_density(&self) -> f64 {
        self.site_density
            .unwrap_or_else(|| 1.0 / (self.a_min * self.a_min * self.a_min))
    }
}

/// Boltzmann argument γ_imp·B·ħ/(2 k_B T_I) of the impurity polarization.
pub fn polarization_argument(p: &ImpurityParams) -> f64 {
    p.gamma_imp() * p.b_field() * HBAR / (2.0 * K_B * p.t_i())
}

/// ⟨I_z²⟩ - ⟨I_z⟩² = (1 - tanh²(γ_imp B ħ / 2 k T_I))/4, in (0, 1/4].
pub fn polarization_variance(p: &ImpurityParams) -> f64 {
    let t = polarization_argument(p).tanh();
    (1.0 - t * t) / 4.0
}

fn mean_square_per_concentration(p: &ImpurityParams) -> f64 {
    let d = MU0_OVER_4PI * p.gamma_i() * p.gamma_imp() * HBAR;
    d * d * (16.0 * PI / 15.0) / (p.a_min().powi(3)) * polarization_variance(p)
}

/// ⟨Δω²⟩ in rad²/s²; linear in the impurity concentration.
pub fn mean_square_modulation(p: &ImpurityParams) -> f64 {
    p.c_imp() * mean_square_per_concentration(p)
}

/// Allowable concentration for a target decoherence time, in several units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AllowableConcentration {
    pub per_m3: f64,
    pub per_cm3: f64,
    /// Atomic percent against the (possibly overridden) site density.
    pub percent: f64,
    pub site_density_per_m3: f64,
}

/// Inverts ⟨Δω²⟩ = 1/T_D² for the concentration; exact since ⟨Δω²⟩ is
/// linear in C. The stored `C_imp` of `p` is ignored.
pub fn allowable_concentration(
    p: &ImpurityParams,
    target_t_d: f64,
) -> Result<AllowableConcentration, AdiabaticError> {
    let target = positive("target_T_D", target_t_d)?;
    if let Some(t_par) = p.t_parallel_imp {
        if t_par < 10.0 * target {
            return Err(AdiabaticError::RigidLatticeViolated {
                t_parallel: t_par,
                target,
            });
        }
    }
    let per_m3 = (1.0 / (target * target)) / mean_square_per_concentration(p);
    let n0 = p.site_density();
    Ok(AllowableConcentration {
        per_m3,
        per_cm3: per_m3 * 1e-6,
        percent: 100.0 * per_m3 / n0,
        site_density_per_m3: n0,
    })
}
