//! Brute-force oracles shared by the integration tests. Everything here
//! reimplements the target quantities from their defining formulas, without
//! touching the library's quadrature or special-function code paths.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Plain kernel formula, written directly from its definition.
pub fn y_kernel_direct(delta: f64, s: f64, tau: f64) -> f64 {
    let e = (-s * tau).exp();
    (delta * (delta * tau).sin() * e + s * (1.0 - (delta * tau).cos() * e))
        / (delta * delta + s * s)
}

pub fn xi_max_direct(b_c: f64) -> f64 {
    (b_c * b_c + PI * PI / 12.0).sqrt() - b_c
}

pub fn weight_direct(xi: f64, b_c: f64) -> f64 {
    (1.0 + b_c * b_c).sqrt() + b_c + xi
}

/// Composite-Simpson rate oracle on the ξ interval. `n_panels` is rounded up
/// to an even count; the caller picks it large enough for the τ it probes.
pub fn simpson_rate(b_c: f64, s: f64, shift: f64, tau: f64, n_panels: usize) -> f64 {
    let xm = xi_max_direct(b_c);
    let n = n_panels + n_panels % 2;
    let h = xm / n as f64;
    let f = |xi: f64| weight_direct(xi, b_c) * y_kernel_direct(xi + shift, s, tau);
    let mut sum = f(0.0) + f(xm);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(h * i as f64);
    }
    sum * h / 3.0
}

/// Panel count giving the Simpson oracle ~1e-8 relative accuracy: resolves
/// the kernel oscillation (6.4e-3 rad of phase per panel) and the Lorentzian
/// (50 panels per width s), with the spec's 1e6 floor.
pub fn simpson_panels(b_c: f64, s: f64, tau: f64) -> usize {
    let xm = xi_max_direct(b_c);
    let tau_eff = if s * tau >= 40.0 { 0.0 } else { tau };
    let n_osc = (xm * tau_eff / 6.4e-3).ceil() as usize;
    let n_lor = (50.0 * xm / s).ceil() as usize;
    n_osc.max(n_lor).max(1_000_000)
}

/// Simpson oracle for the Bessel-weighted correlation integrand in the
/// substituted variable u (Bessel argument linear), using the direct kernel
/// and a trigonometric-integral J0.
pub fn simpson_correlation(
    b_c: f64,
    s: f64,
    shift_mid: f64,
    m: u32,
    tau: f64,
    n_panels: usize,
) -> f64 {
    let n = n_panels + n_panels % 2;
    let h = PI / n as f64;
    let f = |u: f64| {
        let e = (b_c * b_c + u * u / 12.0).sqrt();
        let xi = e - b_c;
        weight_direct(xi, b_c)
            * y_kernel_direct(xi + shift_mid, s, tau)
            * j0_oracle(u * m as f64)
            * u
            / (12.0 * e)
    };
    let mut sum = f(0.0) + f(PI);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(h * i as f64);
    }
    sum * h / 3.0
}

/// J0 by the angular integral (1/π)∫_0^π cos(x sin θ) dθ with the midpoint
/// rule; spectrally accurate for periodic integrands once n exceeds x.
pub fn j0_oracle(x: f64) -> f64 {
    let n = (x.abs() as usize) + 100;
    let mut sum = 0.0;
    for i in 0..n {
        let theta = PI * (i as f64 + 0.5) / n as f64;
        sum += (x * theta.sin()).cos();
    }
    sum / n as f64
}

// 7-point Gauss-Legendre nodes/weights on [-1, 1].
const GL7_X: [f64; 7] = [
    -0.949107912342758524526189684047851,
    -0.741531185599394439863864773280788,
    -0.405845151377397166906606412076961,
    0.0,
    0.405845151377397166906606412076961,
    0.741531185599394439863864773280788,
    0.949107912342758524526189684047851,
];
const GL7_W: [f64; 7] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
];

fn gauss7<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = 0.0;
    for i in 0..7 {
        sum += GL7_W[i] * f(c + h * GL7_X[i]);
    }
    sum * h
}

fn composite_gauss7<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, segments: usize) -> f64 {
    let h = (b - a) / segments as f64;
    (0..segments)
        .map(|i| gauss7(f, a + h * i as f64, a + h * (i + 1) as f64))
        .sum()
}

/// ∫_T^∞ sin t/t dt and ∫_T^∞ cos t/t dt from the three-term asymptotic
/// amplitude functions; truncation below 1e-20 for T >= 6000.
fn trig_tails(t_far: f64) -> (f64, f64) {
    let inv = 1.0 / t_far;
    let inv2 = inv * inv;
    let fa = inv * (1.0 - 2.0 * inv2 + 24.0 * inv2 * inv2);
    let ga = inv2 * (1.0 - 6.0 * inv2 + 120.0 * inv2 * inv2);
    let (sin_t, cos_t) = t_far.sin_cos();
    // ∫_T^∞ sin t/t = f cos T + g sin T ; ∫_T^∞ cos t/t = g cos T - f sin T
    (fa * cos_t + ga * sin_t, ga * cos_t - fa * sin_t)
}

/// si(x) = -∫_x^∞ sin t/t dt by segment quadrature plus asymptotic tail.
pub fn si_oracle(x: f64) -> f64 {
    let t_far = 8000.0f64.max(x + 20.0 * PI);
    // [x, π]: smooth head (skipped when x is already past π)
    let head = if x < PI {
        composite_gauss7(&|t: f64| t.sin() / t, x, PI, 8)
    } else {
        0.0
    };
    let start = x.max(PI);
    let segments = ((t_far - start) / PI).ceil() as usize;
    let body = composite_gauss7(&|t: f64| t.sin() / t, start, t_far, segments.max(1));
    let (sin_tail, _) = trig_tails(t_far);
    -(head + body + sin_tail)
}

/// ci(x) = -∫_x^∞ cos t/t dt; the [x, π] head integrates cos(e^v) on a log
/// grid to tame the 1/t steepness near small x.
pub fn ci_oracle(x: f64) -> f64 {
    let t_far = 8000.0f64.max(x + 20.0 * PI);
    let first = PI.min(t_far);
    let head = if x < first {
        let (a, b) = (x.ln(), first.ln());
        let segs = ((b - a) / 0.25).ceil() as usize;
        composite_gauss7(&|v: f64| (v.exp()).cos(), a, b, segs.max(1))
    } else {
        0.0
    };
    let segments = ((t_far - first.max(x)) / PI).ceil() as usize;
    let body = composite_gauss7(&|t: f64| t.cos() / t, first.max(x), t_far, segments.max(1));
    let (_, cos_tail) = trig_tails(t_far);
    -(head + body + cos_tail)
}

/// Series Si(x) - π/2, the small-argument oracle (reliable for x <~ 12).
pub fn si_series_oracle(x: f64, terms: usize) -> f64 {
    let mut sum = 0.0f64;
    let mut pow = x;
    let mut fact = 1.0f64;
    for k in 0..terms {
        let n = (2 * k + 1) as f64;
        if k > 0 {
            pow *= x * x;
            fact *= (n - 1.0) * n;
        }
        sum += if k % 2 == 0 { 1.0 } else { -1.0 } * pow / (n * fact);
    }
    sum - PI / 2.0
}
