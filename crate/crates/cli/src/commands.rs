//! Command implementations. Each command assembles its full output in
//! memory and hands one string back, so failed runs never leave partial
//! files behind.

use crate::config::{
    DfsConfig, Fig2Config, ImpurityConfig, OutputFormat, PairFigConfig, RateConfig, RateOp,
};
use crate::CliError;
use afmq_core::*;
use serde_json::json;

/// Full-precision scientific notation (17 significant digits): lossless
/// f64 round-trips, so regression goldens are byte-stable.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn to_pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json serialization");
    s.push('\n');
    s
}

pub fn fig2(cfg: &Fig2Config, format: OutputFormat) -> Result<String, CliError> {
    let grid = cfg.tau_grid.build()?;
    let mut curves = Vec::new();
    for &delta_b in &cfg.delta_b_list {
        let site = cfg
            .model
            .site(delta_b, cfg.site_index)
            .map_err(CliError::from_validation)?;
        let curve = curve(&cfg.model, &site, &grid).map_err(CliError::from_rate)?;
        curves.push((delta_b, curve));
    }
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("tau,delta_b,R_perp\n");
            for (delta_b, curve) in &curves {
                for (tau, value) in curve.tau().iter().zip(curve.values()) {
                    out.push_str(&format!("{},{},{}\n", fmt(*tau), fmt(*delta_b), fmt(*value)));
                }
            }
            Ok(out)
        }
        OutputFormat::Json => Ok(to_pretty(&json!({
            "model": cfg.model,
            "curves": curves
                .iter()
                .map(|(delta_b, c)| json!({
                    "delta_b": delta_b,
                    "tau": c.tau(),
                    "r_perp": c.values(),
                }))
                .collect::<Vec<_>>(),
        }))),
    }
}

fn pair_for(
    cfg: &PairFigConfig,
    separation: u32,
) -> Result<(QubitSite, PairConfig), CliError> {
    let site = cfg
        .model
        .site(cfg.delta_b, cfg.site_index)
        .map_err(CliError::from_validation)?;
    let pair = if separation == 0 {
        if !cfg.allow_degenerate {
            return Err(CliError::config(
                "separation 0 requires allow_degenerate = true".into(),
            ));
        }
        PairConfig::degenerate(site)
    } else {
        PairConfig::new(site, separation).map_err(CliError::from_validation)?
    };
    Ok((site, pair))
}

pub fn fig3(cfg: &PairFigConfig, format: OutputFormat) -> Result<String, CliError> {
    let grid = cfg.tau_grid.build()?;
    let mut blocks = Vec::new();
    for &m in &cfg.separations {
        let (_, pair) = pair_for(cfg, m)?;
        let values = grid
            .iter()
            .map(|&tau| correlation_rate(&cfg.model, &pair, tau))
            .collect::<Result<Vec<_>, _>>()
            .map_err(CliError::from_two_qubit)?;
        blocks.push((m, values));
    }
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("tau,separation,R_corr\n");
            for (m, values) in &blocks {
                for (tau, value) in grid.iter().zip(values) {
                    out.push_str(&format!("{},{m},{}\n", fmt(*tau), fmt(*value)));
                }
            }
            Ok(out)
        }
        OutputFormat::Json => Ok(to_pretty(&json!({
            "model": cfg.model,
            "delta_b": cfg.delta_b,
            "tau": grid,
            "curves": blocks
                .iter()
                .map(|(m, v)| json!({"separation": m, "r_corr": v}))
                .collect::<Vec<_>>(),
        }))),
    }
}

pub fn fig4(cfg: &PairFigConfig, format: OutputFormat) -> Result<String, CliError> {
    let grid = cfg.tau_grid.build()?;
    let mut blocks = Vec::new();
    for &m in &cfg.separations {
        let (_, pair) = pair_for(cfg, m)?;
        let rows = grid
            .iter()
            .map(|&tau| total_concurrence_rate(&cfg.model, &pair, tau))
            .collect::<Result<Vec<_>, _>>()
            .map_err(CliError::from_two_qubit)?;
        blocks.push((m, rows));
    }
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("tau,separation,R_sigma,single_l,single_k,corr\n");
            for (m, rows) in &blocks {
                for (tau, b) in grid.iter().zip(rows) {
                    out.push_str(&format!(
                        "{},{m},{},{},{},{}\n",
                        fmt(*tau),
                        fmt(b.total),
                        fmt(b.single_l),
                        fmt(b.single_k),
                        fmt(b.correlation)
                    ));
                }
            }
            Ok(out)
        }
        OutputFormat::Json => Ok(to_pretty(&json!({
            "model": cfg.model,
            "delta_b": cfg.delta_b,
            "tau": grid,
            "curves": blocks
                .iter()
                .map(|(m, rows)| json!({"separation": m, "breakdown": rows}))
                .collect::<Vec<_>>(),
        }))),
    }
}

pub fn dfs_table(cfg: &DfsConfig) -> Result<String, CliError> {
    let report = dfs_report(cfg.omega_eff, cfg.u).map_err(CliError::from_dfs)?;
    let levels = analytic_levels(cfg.omega_eff, cfg.u);
    Ok(to_pretty(&json!({
        "omega_eff": cfg.omega_eff,
        "u": cfg.u,
        "analytic_levels": levels,
        "report": report,
    })))
}

pub fn impurity(cfg: &ImpurityConfig) -> Result<String, CliError> {
    let allowable = allowable_concentration(&cfg.impurity, cfg.target_t_d)
        .map_err(CliError::from_validation_adiabatic)?;
    Ok(to_pretty(&json!({
        "params": cfg.impurity,
        "target_T_D": cfg.target_t_d,
        "polarization_argument": polarization_argument(&cfg.impurity),
        "polarization_variance": polarization_variance(&cfg.impurity),
        "mean_square_modulation": mean_square_modulation(&cfg.impurity),
        "allowable": allowable,
        "prefactor_note": PREFACTOR_NOTE,
    })))
}

pub fn rate(cfg: &RateConfig) -> Result<String, CliError> {
    let site = cfg
        .model
        .site(cfg.delta_b, cfg.site_index)
        .map_err(CliError::from_validation)?;
    let need_tau = || {
        cfg.tau
            .ok_or_else(|| CliError::config("this op requires 'tau'".into()))
    };
    let need_pair = || -> Result<PairConfig, CliError> {
        let m = cfg
            .separation
            .ok_or_else(|| CliError::config("this op requires 'separation'".into()))?;
        PairConfig::new(site, m).map_err(CliError::from_validation)
    };
    let result = match cfg.op {
        RateOp::Quadrature => {
            json!(rate_quadrature(&cfg.model, &site, need_tau()?).map_err(CliError::from_rate)?)
        }
        RateOp::ClosedForm => {
            json!(rate_closed_form(&cfg.model, &site, need_tau()?).map_err(CliError::from_rate)?)
        }
        RateOp::InverseDecoherenceTime => {
            json!(inverse_decoherence_time(&cfg.model, &site).map_err(CliError::from_rate)?)
        }
        RateOp::FrequencyShift => {
            json!(frequency_shift(&cfg.model, &site).map_err(CliError::from_rate)?)
        }
        RateOp::Correlation => json!(correlation_rate(&cfg.model, &need_pair()?, need_tau()?)
            .map_err(CliError::from_two_qubit)?),
        RateOp::ShiftedSingle => json!(shifted_single_rate(&cfg.model, &need_pair()?, need_tau()?)
            .map_err(CliError::from_two_qubit)?),
        RateOp::Total => json!(total_concurrence_rate(&cfg.model, &need_pair()?, need_tau()?)
            .map_err(CliError::from_two_qubit)?),
        RateOp::AsymptoticTotal => json!(asymptotic_total_rate(&cfg.model, &need_pair()?)
            .map_err(CliError::from_two_qubit)?),
    };
    Ok(to_pretty(&json!({
        "op": format!("{:?}", cfg.op),
        "model": cfg.model,
        "delta_b": cfg.delta_b,
        "site_index": cfg.site_index,
        "tau": cfg.tau,
        "separation": cfg.separation,
        "result": result,
    })))
}
