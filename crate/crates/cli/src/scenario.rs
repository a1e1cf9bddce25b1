//! Scenario documents.

use std::path::{Path, PathBuf};

use qevo_core::hamiltonian::QuditCoefficients;
use qevo_core::{HamiltonianSpec, QuditHamiltonianSpec, TimeFn};
use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    dimension: usize,
    hamiltonian: Value,
    t0: f64,
    t1: f64,
    step: f64,
    #[serde(default)]
    output: Option<PathBuf>,
    #[serde(default)]
    validate: bool,
    #[serde(default)]
    oracle_steps: Option<usize>,
    /// integration steps between output rows
    #[serde(default)]
    output_stride: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantQudit {
    #[allow(dead_code)]
    family: String,
    #[serde(default)]
    b0: f64,
    b: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum Model {
    Qubit(HamiltonianSpec),
    Qudit(QuditHamiltonianSpec),
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub dimension: usize,
    pub model: Model,
    pub t0: f64,
    pub t1: f64,
    pub step: f64,
    pub output: Option<PathBuf>,
    pub validate: bool,
    pub oracle_steps: usize,
    pub output_stride: Option<usize>,
}

pub const DEFAULT_ORACLE_STEPS: usize = 200_000;

#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub t0: Option<f64>,
    pub t1: Option<f64>,
    pub step: Option<f64>,
    pub oracle_steps: Option<usize>,
}

fn config_err(path: &Path, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{}: {msg}", path.display()))
}

fn parse_model(dimension: usize, h: Value) -> Result<Model, String> {
    let family = h.get("family").and_then(Value::as_str).ok_or("hamiltonian needs a string \"family\" tag")?.to_owned();
    let qubit_only = matches!(family.as_str(), "rotating_field" | "phi_driven" | "fixed_axis");
    if qubit_only && dimension != 2 {
        return Err(format!("family {family} requires dimension 2, got {dimension}"));
    }
    if dimension == 2 && family != "coefficients" {
        let spec: HamiltonianSpec = serde_json::from_value(h).map_err(|e| e.to_string())?;
        spec.validate().map_err(|e| e.to_string())?;
        return Ok(Model::Qubit(spec));
    }
    let coefficients = match family.as_str() {
        "constant" => {
            let c: ConstantQudit = serde_json::from_value(h).map_err(|e| e.to_string())?;
            QuditCoefficients::Coefficients {
                b0: TimeFn::constant(c.b0),
                b: c.b.into_iter().map(TimeFn::constant).collect(),
            }
        }
        "coefficients" | "sampled" => serde_json::from_value(h).map_err(|e| e.to_string())?,
        other => return Err(format!("unknown family {other:?}")),
    };
    QuditHamiltonianSpec::new(dimension, coefficients).map(Model::Qudit).map_err(|e| e.to_string())
}

impl Scenario {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(path, e))?;
        Self::parse(&text, overrides).map_err(|e| config_err(path, e))
    }

    pub fn parse(text: &str, overrides: &Overrides) -> Result<Self, String> {
        let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if doc.dimension < 2 {
            return Err(format!("dimension must be >= 2, got {}", doc.dimension));
        }
        let model = parse_model(doc.dimension, doc.hamiltonian)?;
        let s = Scenario {
            dimension: doc.dimension,
            model,
            t0: overrides.t0.unwrap_or(doc.t0),
            t1: overrides.t1.unwrap_or(doc.t1),
            step: overrides.step.unwrap_or(doc.step),
            output: doc.output,
            validate: doc.validate,
            oracle_steps: overrides.oracle_steps.or(doc.oracle_steps).unwrap_or(DEFAULT_ORACLE_STEPS),
            output_stride: doc.output_stride,
        };
        if !(s.t1 > s.t0) || !s.t0.is_finite() || !s.t1.is_finite() {
            return Err(format!("need t1 > t0, got t0 = {}, t1 = {}", s.t0, s.t1));
        }
        if !(s.step > 0.0) || !s.step.is_finite() {
            return Err(format!("need step > 0, got {}", s.step));
        }
        if s.oracle_steps < 2 {
            return Err(format!("oracle_steps must be >= 2, got {}", s.oracle_steps));
        }
        if s.output_stride == Some(0) {
            return Err("output_stride must be >= 1".into());
        }
        Ok(s)
    }
}
