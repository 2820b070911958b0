//! Adaptive Gauss–Kronrod quadrature over a pre-seeded panel mesh.
//!
//! The rate integrands mix three disparate scales: a Lorentzian of half-width
//! s, kernel oscillations of period 2π/τ, and Bessel oscillations of period
//! 2π/(l-k). Callers seed the initial mesh with breakpoints resolving each
//! scale; this module then bisects the worst panel until the summed error
//! estimate meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error(
        "quadrature did not converge: estimated error {achieved:e} exceeds tolerance \
         {required:e} after {panels} panels (value {value:e})"
    )]
    NonConvergence {
        achieved: f64,
        required: f64,
        panels: usize,
        value: f64,
    },
    #[error("integrand produced a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub est_abs_error: f64,
    pub evaluations: usize,
}

// 15-point Kronrod nodes (positive half) with the 7-point Gauss subset at
// odd indices; standard QUADPACK constants.
#[rustfmt::skip]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

#[rustfmt::skip]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

#[rustfmt::skip]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7/K15 evaluation on [a, b]; returns (value, error estimate, ∫|f|).
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut result_gauss = WG[3] * f_center;
    let mut result_kronrod = WGK[7] * f_center;
    let mut result_abs = result_kronrod.abs();

    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        let sum = f1 + f2;
        result_kronrod += WGK[j] * sum;
        result_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * sum;
        }
    }

    let mean = 0.5 * result_kronrod;
    let mut result_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = result_kronrod * half;
    let result_abs = result_abs * half.abs();
    let result_asc = result_asc * half.abs();

    let mut err = ((result_kronrod - result_gauss) * half).abs();
    if result_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / result_asc).powf(1.5);
        err = if scale < 1.0 {
            result_asc * scale
        } else {
            result_asc
        };
    }
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * result_abs);
    }
    (value, err, result_abs)
}

#[derive(Debug)]
struct Panel {
    err: f64,
    a: f64,
    b: f64,
    value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.a == other.a
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on error, ties broken by the left endpoint so the
        // refinement order is deterministic
        self.err
            .total_cmp(&other.err)
            .then(other.a.total_cmp(&self.a))
    }
}

/// Integrates `f` over the mesh given by consecutive `breakpoints`
/// (sorted ascending), refining until the summed error estimate drops below
/// the tolerance or the panel budget is exhausted.
///
/// The effective tolerance is max(`abs_tol`, `rel_l1_tol`·∫|f|), with ∫|f|
/// taken from the seed pass; the relative leg keeps heavily cancelling
/// integrands (where the result is orders below the integrand scale) from
/// demanding error targets under the roundoff floor.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_l1_tol: f64,
    max_panels: usize,
) -> Result<QuadResult, QuadError> {
    let mut heap = BinaryHeap::with_capacity(breakpoints.len().max(16));
    let mut total = 0.0f64;
    let mut total_err = 0.0f64;
    let mut total_l1 = 0.0f64;
    let mut evals = 0usize;

    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let (v, e, l1) = kronrod15(&f, a, b);
        evals += 15;
        total += v;
        total_err += e;
        total_l1 += l1;
        heap.push(Panel { err: e, a, b, value: v });
    }
    if !total.is_finite() {
        return Err(QuadError::NonFinite);
    }
    let abs_tol = abs_tol.max(rel_l1_tol * total_l1);

    while total_err > abs_tol && heap.len() < max_panels {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel no longer bisectable; put it back and stop
            heap.push(worst);
            break;
        }
        let (v1, e1, _) = kronrod15(&f, worst.a, mid);
        let (v2, e2, _) = kronrod15(&f, mid, worst.b);
        evals += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel { err: e1, a: worst.a, b: mid, value: v1 });
        heap.push(Panel { err: e2, a: mid, b: worst.b, value: v2 });
        if !total.is_finite() {
            return Err(QuadError::NonFinite);
        }
    }

    // recompute the error sum to shed accumulated cancellation noise
    if total_err <= abs_tol * 1.0001 {
        total_err = heap.iter().map(|p| p.err).sum();
    }

    if total_err > abs_tol {
        return Err(QuadError::NonConvergence {
            achieved: total_err,
            required: abs_tol,
            panels: heap.len(),
            value: total,
        });
    }
    Ok(QuadResult {
        value: total,
        est_abs_error: total_err,
        evaluations: evals,
    })
}

/// Pushes a geometric ladder of points around a Lorentzian peak of width
/// `scale` at `pole`, clipped to (lo, hi). Panels shrink toward the peak so
/// roughly ten K15 panels cover each width `scale`.
pub(crate) fn push_lorentzian_ladder(
    pole: f64,
    scale: f64,
    lo: f64,
    hi: f64,
    out: &mut Vec<f64>,
) {
    let span = hi - lo;
    if span <= 0.0 {
        return;
    }
    // ignore poles too far outside to matter
    if pole < lo - 2.0 * span || pole > hi + 2.0 * span {
        return;
    }
    if pole > lo && pole < hi {
        out.push(pole);
    }
    let mut w = 0.25 * scale;
    for _ in 0..80 {
        for p in [pole - w, pole + w] {
            if p > lo && p < hi {
                out.push(p);
            }
        }
        let covered = w >= (pole - lo).abs().max((pole - hi).abs());
        w *= 2.0;
        if covered {
            break;
        }
    }
}

/// Pushes uniformly spaced points with the given step over (lo, hi).
pub(crate) fn push_uniform(step: f64, lo: f64, hi: f64, cap: usize, out: &mut Vec<f64>) {
    if !(step > 0.0) || hi <= lo {
        return;
    }
    let n = ((hi - lo) / step).ceil() as usize;
    let n = n.min(cap);
    if n < 2 {
        return;
    }
    let h = (hi - lo) / n as f64;
    for i in 1..n {
        out.push(lo + h * i as f64);
    }
}

/// Sorts, deduplicates, and brackets a breakpoint set with [lo, hi].
pub(crate) fn finish_mesh(lo: f64, hi: f64, mut pts: Vec<f64>) -> Vec<f64> {
    pts.push(lo);
    pts.push(hi);
    pts.retain(|p| p.is_finite() && *p >= lo && *p <= hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
