//! Run configuration: one JSON document per run, with dotted-path overrides
//! from the command line applied before validation.

use afmq_core::{ImpurityParams, ModelParams};
use serde::Deserialize;
use serde_json::Value;
use std::path::{Path, PathBuf};

use crate::CliError;

pub const MAX_GRID_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TauGridSpec {
    Points { points: Vec<f64> },
    Range { scale: GridScale, start: f64, stop: f64, count: usize },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridScale {
    Log,
    Linear,
}

impl TauGridSpec {
    pub fn build(&self) -> Result<Vec<f64>, CliError> {
        let grid = match self {
            TauGridSpec::Points { points } => {
                if points.is_empty() || points.len() > MAX_GRID_POINTS {
                    return Err(CliError::config(format!(
                        "tau_grid.points length {} outside [1, {MAX_GRID_POINTS}]",
                        points.len()
                    )));
                }
                points.clone()
            }
            TauGridSpec::Range {
                scale,
                start,
                stop,
                count,
            } => {
                if !(2..=MAX_GRID_POINTS).contains(count) {
                    return Err(CliError::config(format!(
                        "tau_grid.count {count} outside [2, {MAX_GRID_POINTS}]"
                    )));
                }
                if !(start.is_finite() && stop.is_finite() && start < stop) {
                    return Err(CliError::config(format!(
                        "tau_grid range [{start:e}, {stop:e}] is not ascending"
                    )));
                }
                let n = *count;
                match scale {
                    GridScale::Linear => (0..n)
                        .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
                        .collect(),
                    GridScale::Log => {
                        if *start <= 0.0 {
                            return Err(CliError::config(
                                "log tau_grid requires start > 0".into(),
                            ));
                        }
                        let (a, b) = (start.ln(), stop.ln());
                        (0..n)
                            .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                            .collect()
                    }
                }
            }
        };
        for (i, &t) in grid.iter().enumerate() {
            if !(t.is_finite() && t >= 0.0) || (i > 0 && t <= grid[i - 1]) {
                return Err(CliError::config(format!(
                    "tau grid not strictly ascending/nonnegative at index {i}"
                )));
            }
        }
        Ok(grid)
    }
}

#[derive(Debug, Deserialize)]
pub struct Fig2Config {
    pub model: ModelParams,
    pub delta_b_list: Vec<f64>,
    #[serde(default)]
    pub site_index: u32,
    pub tau_grid: TauGridSpec,
}

#[derive(Debug, Deserialize)]
pub struct PairFigConfig {
    pub model: ModelParams,
    pub delta_b: f64,
    #[serde(default)]
    pub site_index: u32,
    pub separations: Vec<u32>,
    pub tau_grid: TauGridSpec,
    /// Admits separation 0 (the single-qubit reduction) for cross-checks.
    #[serde(default)]
    pub allow_degenerate: bool,
}

#[derive(Debug, Deserialize)]
pub struct DfsConfig {
    pub omega_eff: f64,
    pub u: f64,
}

#[derive(Debug, Deserialize)]
pub struct ImpurityConfig {
    pub impurity: ImpurityParams,
    #[serde(rename = "target_T_D")]
    pub target_t_d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateOp {
    Quadrature,
    ClosedForm,
    InverseDecoherenceTime,
    FrequencyShift,
    Correlation,
    ShiftedSingle,
    Total,
    AsymptoticTotal,
}

#[derive(Debug, Deserialize)]
pub struct RateConfig {
    pub model: ModelParams,
    pub op: RateOp,
    pub delta_b: f64,
    #[serde(default)]
    pub site_index: u32,
    pub tau: Option<f64>,
    pub separation: Option<u32>,
}

/// Raw config document plus the output destination extracted from it.
pub struct LoadedConfig {
    pub value: Value,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

pub fn load(
    path: Option<&Path>,
    defaults: Value,
    overrides: &[String],
) -> Result<LoadedConfig, CliError> {
    let mut value = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::config(format!("invalid JSON in {}: {e}", p.display())))?
        }
        None => defaults,
    };
    for item in overrides {
        apply_override(&mut value, item)?;
    }
    let out = match value.get("out") {
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(Value::Null) | None => None,
        Some(other) => {
            return Err(CliError::config(format!(
                "config key 'out' must be a string, got {other}"
            )))
        }
    };
    let format = match value.get("format") {
        Some(Value::String(s)) => match s.as_str() {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            other => {
                return Err(CliError::config(format!(
                    "config key 'format' must be csv or json, got {other}"
                )))
            }
        },
        Some(Value::Null) | None => None,
        Some(other) => {
            return Err(CliError::config(format!(
                "config key 'format' must be a string, got {other}"
            )))
        }
    };
    Ok(LoadedConfig { value, out, format })
}

pub fn parse_section<T: serde::de::DeserializeOwned>(value: &Value) -> Result<T, CliError> {
    serde_json::from_value(value.clone()).map_err(|e| CliError::config(e.to_string()))
}

/// Applies one `dotted.path=value` override. Path segments index objects by
/// key (created on demand) and arrays by number; the value is parsed as JSON
/// with a bare-string fallback.
fn apply_override(root: &mut Value, item: &str) -> Result<(), CliError> {
    let (path, raw) = item
        .split_once('=')
        .ok_or_else(|| CliError::config(format!("override '{item}' is not KEY=VALUE")))?;
    let new_value: Value =
        serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut cursor = root;
    let segments: Vec<&str> = path.split('.').collect();
    if segments.is_empty() {
        return Err(CliError::config(format!("override '{item}' has empty path")));
    }
    for (i, seg) in segments.iter().enumerate() {
        let last = i + 1 == segments.len();
        if let Ok(index) = seg.parse::<usize>() {
            let arr = cursor.as_array_mut().ok_or_else(|| {
                CliError::config(format!("path segment '{seg}' indexes a non-array in '{path}'"))
            })?;
            if index >= arr.len() {
                return Err(CliError::config(format!(
                    "index {index} out of bounds in '{path}'"
                )));
            }
            if last {
                arr[index] = new_value;
                return Ok(());
            }
            cursor = &mut arr[index];
        } else {
            let obj = cursor.as_object_mut().ok_or_else(|| {
                CliError::config(format!("path segment '{seg}' indexes a non-object in '{path}'"))
            })?;
            if last {
                obj.insert(seg.to_string(), new_value);
                return Ok(());
            }
            cursor = obj
                .entry(seg.to_string())
                .or_insert_with(|| Value::Object(Default::default()));
        }
    }
    Ok(())
}

pub fn default_model() -> Value {
    serde_json::json!({
        "b_C": 0.5,
        "s": 1e-5,
        "a": 1e-3,
        "g": 1e-5,
        "omega_E": 2.0 * std::f64::consts::PI * 1e11,
        "gamma_ratio": 1e-3,
    })
}

pub fn default_fig2() -> Value {
    serde_json::json!({
        "model": default_model(),
        "delta_b_list": [-3e-3, 1e-3, 3e-3],
        "site_index": 0,
        "tau_grid": {"scale": "log", "start": 1e2, "stop": 1e6, "count": 121},
    })
}

pub fn default_pair_fig() -> Value {
    serde_json::json!({
        "model": default_model(),
        "delta_b": 3e-3,
        "site_index": 0,
        "separations": [200, 299, 300, 301],
        "tau_grid": {"scale": "log", "start": 1e2, "stop": 1e6, "count": 61},
        "allow_degenerate": false,
    })
}

pub fn default_dfs() -> Value {
    serde_json::json!({"omega_eff": 100.0, "u": 1.0})
}

pub fn default_impurity() -> Value {
    serde_json::json!({
        "impurity": {
            "gamma_I": 2.675_221_874_4e8,
            "gamma_imp": 2.675_221_874_4e8,
            "B": 3.0,
            "T_I": 0.1,
            "a_min": 0.78e-9,
            "C_imp": 1.0,
        },
        "target_T_D": 1.0,
    })
}

pub fn default_rate() -> Value {
    serde_json::json!({
        "model": default_model(),
        "op": "quadrature",
        "delta_b": 3e-3,
        "site_index": 0,
        "tau": 1e5,
    })
}
