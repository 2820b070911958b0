//! The shared spectral kernel Y and the spectral weight entering every rate
//! integral.

use crate::model::{xi_max_raw, ModelError};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("damping s must be positive and finite, got {0:e}")]
    InvalidDamping(f64),
    #[error("tau must be finite and nonnegative, got {0:e}")]
    InvalidTau(f64),
    #[error("delta must be finite, got {0:e}")]
    InvalidDelta(f64),
}

/// Arguments of the kernel: shifted detuning, damping, dimensionless time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelArgs {
    delta: f64,
    s: f64,
    tau: f64,
}

impl KernelArgs {
    pub fn new(delta: f64, s: f64, tau: f64) -> Result<Self, KernelError> {
        if !delta.is_finite() {
            return Err(KernelError::InvalidDelta(delta));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(KernelError::InvalidDamping(s));
        }
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(KernelError::InvalidTau(tau));
        }
        Ok(KernelArgs { delta, s, tau })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }
}

/// Y(δ, τ) = [δ sin(δτ) e^{-sτ} + s (1 - cos(δτ) e^{-sτ})] / (δ² + s²).
///
/// The 1 - cos(δτ)e^{-sτ} factor is evaluated as
/// -expm1(-sτ) + e^{-sτ}·2 sin²(δτ/2), which is exact and free of
/// cancellation for small δτ and sτ.
pub fn kernel_y(args: &KernelArgs) -> f64 {
    y_raw(args.delta, args.s, args.tau)
}

#[inline]
pub(crate) fn y_raw(delta: f64, s: f64, tau: f64) -> f64 {
    let st = s * tau;
    let den = delta * delta + s * s;
    if st >= 745.0 {
        // e^{-sτ} underflows; only the Lorentzian limit survives
        return s / den;
    }
    let e = (-st).exp();
    let phase = delta * tau;
    let half = (0.5 * phase).sin();
    let one_minus_cos_exp = -(-st).exp_m1() + e * 2.0 * half * half;
    (delta * phase.sin() * e + s * one_minus_cos_exp) / den
}

/// ∫_0^τ Y(δ, τ') dτ' in closed form: with z = -s + iδ this is
/// Re[(e^{zτ} - 1 - zτ)/z²] = τ² Re φ₂(zτ), φ₂(w) = (e^w - 1 - w)/w².
///
/// Nonnegative for all τ (at s → 0 it reduces to (1 - cos δτ)/δ²), which is
/// what makes accumulated decrements monotone.
#[inline]
pub(crate) fn y_time_integrated(delta: f64, s: f64, tau: f64) -> f64 {
    let w = Complex64::new(-s * tau, delta * tau);
    (tau * tau) * phi2(w).re
}

/// (e^w - 1 - w)/w², series below |w| = 1 to dodge the cancellation.
fn phi2(w: Complex64) -> Complex64 {
    if w.norm_sqr() <= 1.0 {
        let mut term = Complex64::new(0.5, 0.0); // w^0 / 2!
        let mut sum = term;
        for n in 1..=24u32 {
            term *= w / (n + 2) as f64;
            sum += term;
            if term.norm_sqr() < 1e-64 {
                break;
            }
        }
        sum
    } else {
        let ew = if w.re < -745.0 {
            Complex64::new(0.0, 0.0)
        } else {
            w.exp()
        };
        (ew - 1.0 - w) / (w * w)
    }
}

/// Spectral weight √(1 + b_C²) + b_C + ξ on 0 <= ξ <= xi_max(b_C).
pub fn weight(xi: f64, b_c: f64) -> Result<f64, ModelError> {
    if !(b_c > 0.0 && b_c.is_finite()) {
        return Err(ModelError::CriticalFieldNonPositive(b_c));
    }
    let xm = xi_max_raw(b_c);
    // one-ulp slack: quadrature nodes can land on the mapped endpoint
    if !(xi >= 0.0 && xi <= xm * (1.0 + 4.0 * f64::EPSILON)) {
        return Err(ModelError::Domain {
            value: xi,
            min: 0.0,
            max: xm,
        });
    }
    Ok(weight_base(b_c) + xi)
}

/// √(1 + b_C²) + b_C, the ξ-independent part of the weight.
#[inline]
pub(crate) fn weight_base(b_c: f64) -> f64 {
    (1.0 + b_c * b_c).sqrt() + b_c
}
