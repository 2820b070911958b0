//! Validated parameter sets shared by every rate computation, plus the
//! dispersion/measure helpers derived from them.
//!
//! Everything is dimensionless except where noted: fields are measured in
//! units of the exchange field, energies in units of the exchange frequency
//! `omega_E`, and time as τ = t·omega_E.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Upper damping bound enforcing the weak-damping regime.
pub const MAX_DAMPING: f64 = 1e-2;

/// Largest qubit separation accepted for a pair; keeps the Bessel kernel
/// argument π·(l-k) inside the supported J0 domain.
pub const MAX_SEPARATION: u32 = 300_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("critical field b_C must be positive, got {0:e}")]
    CriticalFieldNonPositive(f64),
    #[error("magnon damping s must satisfy 0 < s < b_C, got s={s:e}, b_C={b_c:e}")]
    DampingOutOfRange { s: f64, b_c: f64 },
    #[error("magnon damping s must stay below {MAX_DAMPING:e}, got {0:e}")]
    DampingTooLarge(f64),
    #[error("hyperfine constant a must be nonzero and finite, got {0:e}")]
    HyperfineInvalid(f64),
    #[error("field gradient g must be finite and nonnegative, got {0:e}")]
    GradientNegative(f64),
    #[error("exchange frequency omega_E must be positive, got {0:e}")]
    ExchangeNonPositive(f64),
    #[error("gyromagnetic ratio gamma_I/gamma_S must be positive, got {0:e}")]
    GammaRatioNonPositive(f64),
    #[error("detuning delta_b must satisfy |delta_b| < b_C, got delta_b={delta_b:e}, b_C={b_c:e}")]
    DetuningOutOfRange { delta_b: f64, b_c: f64 },
    #[error("pair separation must be at least 1")]
    SeparationZero,
    #[error("pair separation {0} exceeds the supported maximum {MAX_SEPARATION}")]
    SeparationTooLarge(u32),
    #[error("argument {value:e} outside domain [{min:e}, {max:e}]")]
    Domain { value: f64, min: f64, max: f64 },
}

impl ModelError {
    /// Stable machine-readable code for CLI and config tooling.
    pub fn code(&self) -> &'static str {
        match self {
            ModelError::CriticalFieldNonPositive(_) => "b_c_nonpositive",
            ModelError::DampingOutOfRange { .. } => "s_out_of_range",
            ModelError::DampingTooLarge(_) => "s_exceeds_regime",
            ModelError::HyperfineInvalid(_) => "a_invalid",
            ModelError::GradientNegative(_) => "g_negative",
            ModelError::ExchangeNonPositive(_) => "omega_e_nonpositive",
            ModelError::GammaRatioNonPositive(_) => "gamma_ratio_nonpositive",
            ModelError::DetuningOutOfRange { .. } => "delta_b_out_of_range",
            ModelError::SeparationZero => "separation_zero",
            ModelError::SeparationTooLarge(_) => "separation_too_large",
            ModelError::Domain { .. } => "domain",
        }
    }
}

/// Dimensionless antiferromagnet/register parameters.
///
/// JSON field names follow the config schema: `b_C`, `s`, `a`, `g`,
/// `omega_E` (rad/s), `gamma_ratio`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelParamsRaw", into = "ModelParamsRaw")]
pub struct ModelParams {
    b_c: f64,
    s: f64,
    a: f64,
    g: f64,
    omega_e: f64,
    gamma_ratio: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct ModelParamsRaw {
    #[serde(rename = "b_C")]
    b_c: f64,
    s: f64,
    a: f64,
    g: f64,
    #[serde(rename = "omega_E")]
    omega_e: f64,
    gamma_ratio: f64,
}

impl TryFrom<ModelParamsRaw> for ModelParams {
    type Error = ModelError;
    fn try_from(raw: ModelParamsRaw) -> Result<Self, ModelError> {
        ModelParams::new(raw.b_c, raw.s, raw.a, raw.g, raw.omega_e, raw.gamma_ratio)
    }
}

impl From<ModelParams> for ModelParamsRaw {
    fn from(p: ModelParams) -> Self {
        ModelParamsRaw {
            b_c: p.b_c,
            s: p.s,
            a: p.a,
            g: p.g,
            omega_e: p.omega_e,
            gamma_ratio: p.gamma_ratio,
        }
    }
}

impl ModelParams {
    pub fn new(
        b_c: f64,
        s: f64,
        a: f64,
        g: f64,
        omega_e: f64,
        gamma_ratio: f64,
    ) -> Result<Self, ModelError> {
        if !(b_c > 0.0 && b_c.is_finite()) {
            return Err(ModelError::CriticalFieldNonPositive(b_c));
        }
        if !(s > 0.0 && s < b_c) {
            return Err(ModelError::DampingOutOfRange { s, b_c });
        }
        if s >= MAX_DAMPING {
            return Err(ModelError::DampingTooLarge(s));
        }
        if !(a != 0.0 && a.is_finite()) {
            return Err(ModelError::HyperfineInvalid(a));
        }
        if !(g >= 0.0 && g.is_finite()) {
            return Err(ModelError::GradientNegative(g));
        }
        if !(omega_e > 0.0 && omega_e.is_finite()) {
            return Err(ModelError::ExchangeNonPositive(omega_e));
        }
        if !(gamma_ratio > 0.0 && gamma_ratio.is_finite()) {
            return Err(ModelError::GammaRatioNonPositive(gamma_ratio));
        }
        Ok(ModelParams {
            b_c,
            s,
            a,
            g,
            omega_e,
            gamma_ratio,
        })
    }

    pub fn b_c(&self) -> f64 {
        self.b_c
    }
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn g(&self) -> f64 {
        self.g
    }
    pub fn omega_e(&self) -> f64 {
        self.omega_e
    }
    pub fn gamma_ratio(&self) -> f64 {
        self.gamma_ratio
    }

    /// Site at a given detuning from the turning point.
    pub fn site(&self, delta_b: f64, site_index: u32) -> Result<QubitSite, ModelError> {
        if !(delta_b.is_finite() && delta_b.abs() < self.b_c) {
            return Err(ModelError::DetuningOutOfRange {
                delta_b,
                b_c: self.b_c,
            });
        }
        Ok(QubitSite {
            delta_b,
            site_index,
        })
    }

    /// Site from a local field value: delta_b = b_C - b - g·k.
    pub fn site_from_field(&self, b: f64, site_index: u32) -> Result<QubitSite, ModelError> {
        let delta_b = self.b_c - b - self.g * site_index as f64;
        self.site(delta_b, site_index)
    }

    /// Converts a dimensionless rate to 1/s: omega_E · (3a²/2π) · rate.
    pub fn physical_rate(&self, dimensionless_rate: f64) -> f64 {
        self.omega_e * (3.0 * self.a * self.a) / (2.0 * PI) * dimensionless_rate
    }
}

/// One register spin, identified by its detuning from the turning point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitSite {
    delta_b: f64,
    site_index: u32,
}

impl QubitSite {
    pub fn delta_b(&self) -> f64 {
        self.delta_b
    }
    pub fn site_index(&self) -> u32 {
        self.site_index
    }
}

/// A pair of register spins on the same sublattice, separation = l - k >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairConfig {
    site: QubitSite,
    separation: u32,
}

impl PairConfig {
    pub fn new(site: QubitSite, separation: u32) -> Result<Self, ModelError> {
        if separation == 0 {
            return Err(ModelError::SeparationZero);
        }
        if separation > MAX_SEPARATION {
            return Err(ModelError::SeparationTooLarge(separation));
        }
        Ok(PairConfig { site, separation })
    }

    /// Zero-separation pair. The Bessel kernel then degenerates to 1 and the
    /// correlation rate collapses onto the one-qubit rate; useful only as a
    /// cross-check.
    pub fn degenerate(site: QubitSite) -> Self {
        PairConfig {
            site,
            separation: 0,
        }
    }

    pub fn site(&self) -> QubitSite {
        self.site
    }
    pub fn separation(&self) -> u32 {
        self.separation
    }
}

/// Upper limit of the spectral integrals: √(b_C² + π²/12) - b_C, written in
/// the cancellation-free form (π²/12) / (√(b_C² + π²/12) + b_C).
pub fn xi_max(b_c: f64) -> Result<f64, ModelError> {
    if !(b_c > 0.0 && b_c.is_finite()) {
        return Err(ModelError::CriticalFieldNonPositive(b_c));
    }
    Ok(xi_max_raw(b_c))
}

pub(crate) fn xi_max_raw(b_c: f64) -> f64 {
    let c = PI * PI / 12.0;
    c / ((b_c * b_c + c).sqrt() + b_c)
}

/// Magnon dispersion E(q⊥) ≈ √(b_C² + q⊥²/12) on 0 <= q⊥ <= π.
pub fn magnon_dispersion(q_perp: f64, b_c: f64) -> Result<f64, ModelError> {
    if !(b_c > 0.0 && b_c.is_finite()) {
        return Err(ModelError::CriticalFieldNonPositive(b_c));
    }
    if !(0.0..=PI).contains(&q_perp) {
        return Err(ModelError::Domain {
            value: q_perp,
            min: 0.0,
            max: PI,
        });
    }
    Ok((b_c * b_c + q_perp * q_perp / 12.0).sqrt())
}
