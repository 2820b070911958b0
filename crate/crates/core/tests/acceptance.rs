//! Acceptance suite: every release criterion runs here at its stated
//! tolerance and prints one pass/fail line. Criterion 13 (figure-pipeline
//! determinism) lives in the CLI crate's acceptance tests, next to the
//! binary it exercises.

mod common;

use afmq_core::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn criterion<F: FnOnce() -> Result<(), String>>(id: u32, name: &str, body: F) {
    match body() {
        Ok(()) => println!("criterion {id:02} ({name}): PASS"),
        Err(msg) => {
            println!("criterion {id:02} ({name}): FAIL - {msg}");
            panic!("criterion {id:02} ({name}) failed: {msg}");
        }
    }
}

fn fig_params() -> ModelParams {
    ModelParams::new(0.5, 1e-5, 1e-3, 1e-5, 2.0 * PI * 1e11, 1e-3).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

#[test]
fn acceptance_01_one_qubit_oracle_equivalence() {
    criterion(1, "one-qubit rate vs Simpson oracle, 1e-6", || {
        let p = fig_params();
        for &delta_b in &[-3e-3, 1e-3, 3e-3] {
            let site = p.site(delta_b, 0).unwrap();
            for &tau in &[1e3, 1e5, 1e8] {
                let q = rate_quadrature(&p, &site, tau).map_err(|e| e.to_string())?;
                let n = common::simpson_panels(p.b_c(), p.s(), tau);
                let o = common::simpson_rate(p.b_c(), p.s(), delta_b, tau, n);
                let r = rel(q, o);
                if r > 1e-6 {
                    return Err(format!(
                        "delta_b={delta_b:e} tau={tau:e}: quad {q:e} vs oracle {o:e} rel {r:e}"
                    ));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_02_closed_form_vs_quadrature() {
    criterion(2, "closed form vs quadrature grid, 1e-3", || {
        let p = fig_params();
        for i in 0..5 {
            let delta_b = 1e-3 * 10f64.powf(i as f64 / 4.0);
            let site = p.site(delta_b, 0).unwrap();
            for j in 0..7 {
                let tau = 1e3 * 10f64.powf(j as f64 / 2.0);
                let q = rate_quadrature(&p, &site, tau).map_err(|e| e.to_string())?;
                let c = rate_closed_form(&p, &site, tau).map_err(|e| e.to_string())?;
                let r = rel(q, c);
                if r > 1e-3 {
                    return Err(format!(
                        "delta_b={delta_b:e} tau={tau:e}: quad {q:e} vs closed {c:e} rel {r:e}"
                    ));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_03_asymptote_consistency() {
    criterion(3, "long-time limits match asymptotes, 1e-4", || {
        let p = fig_params();
        let tau = 30.0 / p.s();
        // one-qubit curves against the braced factor (defined for Δb > 0)
        for &delta_b in &[1e-3, 3e-3] {
            let site = p.site(delta_b, 0).unwrap();
            let q = rate_quadrature(&p, &site, tau).map_err(|e| e.to_string())?;
            let td = inverse_decoherence_time(&p, &site).map_err(|e| e.to_string())?;
            let r = rel(q, td.r_infinity);
            if r > 1e-4 {
                return Err(format!("delta_b={delta_b:e}: rel {r:e}"));
            }
        }
        // pair asymptote against the τ = 30/s total at the figure separations
        let site = p.site(3e-3, 0).unwrap();
        for &m in &[200u32, 299, 300, 301] {
            let pair = PairConfig::new(site, m).unwrap();
            let asym = asymptotic_total_rate(&p, &pair).map_err(|e| e.to_string())?;
            let total = total_concurrence_rate(&p, &pair, tau)
                .map_err(|e| e.to_string())?
                .total;
            let r = rel(asym.value, total);
            if r > 1e-4 {
                return Err(format!(
                    "separation {m}: asymptote {:e} vs total {total:e} rel {r:e}",
                    asym.value
                ));
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_04_decoherence_time_scale() {
    criterion(4, "1/T_D within a decade of omega_E s a^2/delta_b", || {
        for &a in &[1e-3, 1e-4] {
            let p = ModelParams::new(0.5, 1e-5, a, 1e-5, 2.0 * PI * 1e11, 1e-3).unwrap();
            for &delta_b in &[1e-3, 3e-3] {
                let site = p.site(delta_b, 0).unwrap();
                let td = inverse_decoherence_time(&p, &site).map_err(|e| e.to_string())?;
                let order = p.omega_e() * p.s() * a * a / delta_b;
                let ratio = td.per_second / order;
                if !(0.1..=10.0).contains(&ratio) {
                    return Err(format!("a={a:e} delta_b={delta_b:e}: ratio {ratio}"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_05_settling() {
    criterion(5, "oscillations settle by tau = 1e6", || {
        let p = fig_params();
        let site = p.site(3e-3, 0).unwrap();
        let r1 = rate_quadrature(&p, &site, 5e5).map_err(|e| e.to_string())?;
        let r2 = rate_quadrature(&p, &site, 1e6).map_err(|e| e.to_string())?;
        if (r2 - r1).abs() >= 1e-2 * r1.abs() {
            return Err(format!("R(5e5)={r1:e}, R(1e6)={r2:e}"));
        }
        Ok(())
    });
}

#[test]
fn acceptance_06_longitudinal_equals_transverse() {
    criterion(6, "longitudinal = transverse bitwise on 100 random inputs", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xAF31);
        for i in 0..100 {
            let b_c = rng.gen_range(0.3..0.8);
            let s = 10f64.powf(rng.gen_range(-6.0..-3.0));
            let a = 10f64.powf(rng.gen_range(-4.0..-3.0));
            let g = rng.gen_range(0.0..1e-4);
            let p = ModelParams::new(b_c, s, a, g, 2.0 * PI * 1e11, 1e-3)
                .map_err(|e| e.to_string())?;
            let delta_b = rng.gen_range(-0.5..0.5) * b_c;
            let site = p.site(delta_b, 0).unwrap();
            let tau = if i % 10 == 0 {
                0.0
            } else {
                10f64.powf(rng.gen_range(0.0..8.0))
            };
            let t = transverse_rate(&p, &site, tau).map_err(|e| e.to_string())?;
            let l = longitudinal_rate(&p, &site, tau).map_err(|e| e.to_string())?;
            if t.to_bits() != l.to_bits() {
                return Err(format!("case {i}: {t:e} != {l:e}"));
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_07_correlation_sign_structure() {
    criterion(7, "asymptotic correlation changes sign across separations", || {
        let site_db = 3e-3;
        // literal figure parameters: g = 1e-5
        let p1 = fig_params();
        let signs1: Vec<bool> = [299u32, 300, 301]
            .iter()
            .map(|&m| {
                let pair = PairConfig::new(p1.site(site_db, 0).unwrap(), m).unwrap();
                asymptotic_correlation_rate(&p1, &pair).map(|r| r.value > 0.0)
            })
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if !signs1.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("no sign change at g=1e-5: {signs1:?}"));
        }
        // premise-satisfying gradient: Δb - g(l-k)/2 < 0 at these separations
        let p2 = ModelParams::new(0.5, 1e-5, 1e-3, 2.05e-5, 2.0 * PI * 1e11, 1e-3).unwrap();
        let mut signs2 = Vec::new();
        for &m in &[299u32, 300, 301] {
            if !(site_db - p2.g() * m as f64 / 2.0 < 0.0) {
                return Err(format!("premise fails at m={m}"));
            }
            let pair = PairConfig::new(p2.site(site_db, 0).unwrap(), m).unwrap();
            let r = asymptotic_correlation_rate(&p2, &pair).map_err(|e| e.to_string())?;
            signs2.push(r.value > 0.0);
        }
        if !signs2.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("no sign change at g=2.05e-5: {signs2:?}"));
        }
        Ok(())
    });
}

#[test]
fn acceptance_08_asymptote_positivity() {
    criterion(8, "asymptotic total rate positive on 100 random sets", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xAF32);
        for i in 0..100 {
            let b_c = rng.gen_range(0.35..0.75);
            let s = 10f64.powf(rng.gen_range(-6.0..-4.0));
            let a = 10f64.powf(rng.gen_range(-4.0..-3.0));
            let g = rng.gen_range(0.0..1e-4);
            let p = ModelParams::new(b_c, s, a, g, 2.0 * PI * 1e11, 1e-3)
                .map_err(|e| e.to_string())?;
            let delta_b = rng.gen_range(-0.45..0.45) * b_c;
            let m = rng.gen_range(1u32..=500);
            let pair = PairConfig::new(p.site(delta_b, 0).unwrap(), m).unwrap();
            let asym = asymptotic_total_rate(&p, &pair).map_err(|e| e.to_string())?;
            if !(asym.value > 0.0) {
                return Err(format!(
                    "case {i} (b_c={b_c:.3}, s={s:e}, g={g:e}, delta_b={delta_b:e}, m={m}): \
                     value {:e}",
                    asym.value
                ));
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_09_concurrence() {
    criterion(9, "concurrence: bell state, formula pair, monotone decay", || {
        let bell = bell_initial_state();
        let c_bell = wootters_concurrence(&bell).map_err(|e| e.to_string())?;
        if (c_bell - 1.0).abs() > 1e-12 {
            return Err(format!("bell concurrence {c_bell}"));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(0xAF33);
        for i in 0..1000 {
            let g_zz = -rng.gen::<f64>();
            let mag = rng.gen::<f64>() * (1.0 - g_zz);
            let g_pm = Complex64::from_polar(mag, rng.gen::<f64>() * 2.0 * PI);
            let rho =
                TwoQubitDensityMatrix::from_correlators(g_zz, g_pm).map_err(|e| e.to_string())?;
            let full = wootters_concurrence(&rho).map_err(|e| e.to_string())?;
            let special = concurrence_from_correlators(rho.g_plus_minus().norm(), rho.g_zz());
            if (full - special).abs() > 1e-10 {
                return Err(format!(
                    "state {i}: full {full:e} vs special-case {special:e}"
                ));
            }
        }

        // figure-parameter curves: C non-increasing wherever the rate sum is
        // nonnegative at both ends of a grid step, and unconditionally in the
        // settled regime
        let p = fig_params();
        let grid: Vec<f64> = std::iter::once(0.0)
            .chain((0..25).map(|i| 1e2 * 1e4f64.powf(i as f64 / 24.0)))
            .collect();
        for &m in &[200u32, 299, 300, 301] {
            let pair = PairConfig::new(p.site(3e-3, 0).unwrap(), m).unwrap();
            let curve = concurrence_curve(&p, &pair, &grid).map_err(|e| e.to_string())?;
            let sums: Vec<f64> = grid
                .iter()
                .map(|&t| total_concurrence_rate(&p, &pair, t).map(|b| b.total))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let c = curve.concurrence();
            if (c[0] - 1.0).abs() > 1e-15 {
                return Err(format!("separation {m}: C(0) = {}", c[0]));
            }
            for i in 1..grid.len() {
                let guarded = sums[i - 1] >= 0.0 && sums[i] >= 0.0;
                if (guarded || grid[i - 1] >= 1e5) && c[i] > c[i - 1] + 1e-12 {
                    return Err(format!(
                        "separation {m}: C rises {} -> {} across tau {}..{}",
                        c[i - 1],
                        c[i],
                        grid[i - 1],
                        grid[i]
                    ));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_10_dfs_spectrum() {
    criterion(10, "cluster spectra, table column, gap, annihilation", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xAF34);
        for _ in 0..100 {
            let omega: f64 = rng.gen_range(0.5..200.0) * if rng.gen() { 1.0 } else { -1.0 };
            let u = rng.gen_range(-3.0..3.0);
            let h = build_xx0(omega, u);
            let mut expected: Vec<f64> = Vec::new();
            for lvl in analytic_levels(omega, u) {
                expected.extend(std::iter::repeat(lvl.energy).take(lvl.degeneracy));
            }
            expected.sort_by(f64::total_cmp);
            let got = h.eigenvalues();
            for (a, b) in got.iter().zip(&expected) {
                if (a - b).abs() > 1e-10 {
                    return Err(format!("omega={omega} u={u}: {a} vs {b}"));
                }
            }
        }

        // m_J = 0 column {0 (x2), 2U (x3), 6U (x1)}
        let levels = analytic_levels(123.0, 1.0);
        let m0: Vec<(u32, f64, usize)> = levels
            .iter()
            .filter(|l| l.m_j == 0)
            .map(|l| (l.j, l.energy, l.degeneracy))
            .collect();
        if m0 != vec![(0, 0.0, 2), (1, 2.0, 3), (2, 6.0, 1)] {
            return Err(format!("m_J = 0 column {m0:?}"));
        }

        let report = dfs_report(100.0, 1.0).map_err(|e| e.to_string())?;
        if (report.gap - 198.0).abs() > 1e-10 || !report.gap_matches_formula {
            return Err(format!("gap {} (flag {})", report.gap, report.gap_matches_formula));
        }

        let (zero, one) = logical_states();
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let op = collective_spin(axis);
            for (name, state) in [("0_L", &zero), ("1_L", &one)] {
                let n = op.apply(state).norm();
                if n > 1e-12 {
                    return Err(format!("{name} not annihilated along {axis:?}: {n:e}"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_11_impurity_thresholds() {
    criterion(11, "impurity concentration thresholds within a decade", || {
        let gamma = 2.675_221_874_4e8; // proton-scale gyromagnetic ratio
        let a_min = 0.78e-9;
        // unpolarized: B/T_I = 30 T/K
        let unpol =
            ImpurityParams::new(gamma, gamma, 3.0, 0.1, a_min, 1.0).map_err(|e| e.to_string())?;
        let c = allowable_concentration(&unpol, 1.0).map_err(|e| e.to_string())?;
        if !(c.per_cm3 > 1e14 && c.per_cm3 < 1e16) {
            return Err(format!("unpolarized {:e} per cm^3", c.per_cm3));
        }
        // polarized: T_I < 1 mK, strong-polarization argument > 1
        let pol = ImpurityParams::new(gamma, gamma, 3.6, 0.9e-3, a_min, 1.0)
            .map_err(|e| e.to_string())?;
        if 2.0 * polarization_argument(&pol) <= 1.0 {
            return Err("polarization argument not > 1".into());
        }
        let c = allowable_concentration(&pol, 1.0).map_err(|e| e.to_string())?;
        if !(c.percent > 4.5e-3 && c.percent < 4.5e-1) {
            return Err(format!("polarized {:e} percent", c.percent));
        }
        Ok(())
    });
}

#[test]
fn acceptance_12_special_functions() {
    criterion(12, "si/ci/J0 vs quadrature oracles, 1e-10", || {
        for i in 0..100 {
            let x = 1e-3 * 1e6f64.powf(i as f64 / 99.0);
            let si_v = si(x).map_err(|e| e.to_string())?.value;
            let ci_v = ci(x).map_err(|e| e.to_string())?.value;
            let j0_v = bessel_j0(x).map_err(|e| e.to_string())?.value;
            let (si_o, ci_o, j0_o) = (
                common::si_oracle(x),
                common::ci_oracle(x),
                common::j0_oracle(x),
            );
            if (si_v - si_o).abs() > 1e-10 {
                return Err(format!("si({x:e}): {si_v} vs oracle {si_o}"));
            }
            if (ci_v - ci_o).abs() > 1e-10 {
                return Err(format!("ci({x:e}): {ci_v} vs oracle {ci_o}"));
            }
            if (j0_v - j0_o).abs() > 1e-10 {
                return Err(format!("J0({x:e}): {j0_v} vs oracle {j0_o}"));
            }
        }
        // the small-argument logarithmic difference limit
        let tau = 1e-8;
        let diff = ci(2.0 * tau).map_err(|e| e.to_string())?.value
            - ci(tau).map_err(|e| e.to_string())?.value;
        if (diff - 2f64.ln()).abs() > 1e-6 {
            return Err(format!("ci log limit: {diff} vs {}", 2f64.ln()));
        }
        // series oracle cross-check in its own convergence range
        let series = common::si_series_oracle(1.0, 20);
        if (si(1.0).unwrap().value - series).abs() > 1e-12 {
            return Err("si(1) vs series oracle".into());
        }
        Ok(())
    });
}
