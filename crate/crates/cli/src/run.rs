//! Scenario runs: evolve, validate, check-class.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use log::{info, warn};
use qevo_core::gellmann::structure_constants;
use qevo_core::linalg::max_abs_diff;
use qevo_core::oracle::{stepwise_checkpoints, stepwise_propagator};
use qevo_core::qubit::{
    assemble_propagator, class_certificate_theorem3, commuting_check, integrate_quaternion_with, THEOREM3_SAMPLES,
};
use qevo_core::qudit::{assemble_qudit_propagator, commuting_check_general, integrate_gellmann_ode};
use qevo_core::trajectory::{step_count, RecordOptions};
use qevo_core::{BlochHamiltonian, CMatrix, GellMannBasis, QevoError};
use serde::Serialize;
use serde_json::json;

use crate::error::{io_error, CliError};
use crate::scenario::{Model, Scenario};

pub const DEFAULT_ROWS: usize = 1000;

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub rows: usize,
    pub steps: usize,
    pub step: f64,
    pub max_norm_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_oracle_err: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub richardson_error_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_vector_residual: Option<f64>,
}

struct Table {
    header: Vec<String>,
    times: Vec<f64>,
    /// state columns per row, ending with phase and norm_defect
    rows: Vec<Vec<f64>>,
    propagators: Vec<CMatrix>,
}

fn options(s: &Scenario) -> RecordOptions {
    let steps = step_count(s.t0, s.t1, s.step);
    match s.output_stride {
        Some(stride) => RecordOptions::stride(stride),
        None => RecordOptions::for_rows(steps, DEFAULT_ROWS),
    }
}

fn integrate(s: &Scenario, basis: &GellMannBasis, summary: &mut RunSummary) -> Result<Table, CliError> {
    let opts = options(s);
    match &s.model {
        Model::Qubit(h) => {
            let traj = integrate_quaternion_with(h, s.t0, s.t1, s.step, opts)?;
            summary.steps = traj.steps;
            summary.step = traj.step;
            summary.max_norm_defect = traj.max_norm_defect();
            let mut rows = Vec::with_capacity(traj.len());
            let mut propagators = Vec::with_capacity(traj.len());
            for i in 0..traj.len() {
                let q = &traj.states[i];
                rows.push(vec![q.u0, q.u[0], q.u[1], q.u[2], traj.phases[i], traj.norm_defects[i]]);
                propagators.push(assemble_propagator(q, traj.phases[i])?);
            }
            let header = ["t", "u0", "u1", "u2", "u3", "phase", "norm_defect"].map(String::from).to_vec();
            Ok(Table { header, times: traj.times, rows, propagators })
        }
        Model::Qudit(h) => {
            let constants = structure_constants(basis);
            let run = integrate_gellmann_ode(h, basis, &constants, s.t0, s.t1, s.step, opts)?;
            let traj = run.trajectory;
            summary.steps = traj.steps;
            summary.step = traj.step;
            summary.max_norm_defect = traj.max_norm_defect();
            summary.max_vector_residual = Some(run.max_vector_residual);
            let mut header = vec!["t".to_string(), "u0_re".into(), "u0_im".into()];
            for j in 1..=basis.len() {
                header.push(format!("u{j}_re"));
                header.push(format!("u{j}_im"));
            }
            header.push("phase".into());
            header.push("norm_defect".into());
            let mut rows = Vec::with_capacity(traj.len());
            let mut propagators = Vec::with_capacity(traj.len());
            for i in 0..traj.len() {
                let c = &traj.states[i];
                let mut row = vec![c.u0.re, c.u0.im];
                for z in &c.u {
                    row.push(z.re);
                    row.push(z.im);
                }
                row.push(traj.phases[i]);
                row.push(traj.norm_defects[i]);
                rows.push(row);
                propagators.push(assemble_qudit_propagator(c, basis)?);
            }
            Ok(Table { header, times: traj.times, rows, propagators })
        }
    }
}

fn oracle_errors<H: BlochHamiltonian + ?Sized>(
    h: &H,
    basis: &GellMannBasis,
    table: &Table,
    oracle_steps: usize,
    summary: &mut RunSummary,
) -> Result<Vec<f64>, CliError> {
    let segments = table.times.len() - 1;
    let per_segment = oracle_steps.div_ceil(segments).max(1);
    info!("oracle: {per_segment} steps per output interval, {segments} intervals");
    let reference = stepwise_checkpoints(h, basis, &table.times, per_segment)?;
    let errs: Vec<f64> = table.propagators.iter().zip(&reference).map(|(u, v)| max_abs_diff(u, v)).collect();
    let (t0, t1) = (table.times[0], table.times[segments]);
    let estimate = stepwise_propagator(h, basis, t0, t1, per_segment * segments)?.richardson_error_estimate;
    summary.max_oracle_err = Some(errs.iter().copied().fold(0.0, f64::max));
    summary.oracle_steps = Some(per_segment * segments);
    summary.richardson_error_estimate = Some(estimate);
    Ok(errs)
}

fn render(table: &Table, oracle: Option<&[f64]>) -> String {
    let mut out = table.header.join(",");
    if oracle.is_some() {
        out.push_str(",oracle_err");
    }
    out.push('\n');
    for (i, row) in table.rows.iter().enumerate() {
        let _ = write!(out, "{:e}", table.times[i]);
        for v in row {
            let _ = write!(out, ",{v:e}");
        }
        if let Some(errs) = oracle {
            let _ = write!(out, ",{:e}", errs[i]);
        }
        out.push('\n');
    }
    out
}

/// Integrates the scenario and renders the trajectory file; with `validate`
/// every row is compared with the stepwise oracle.
pub fn evolve(s: &Scenario, validate: bool) -> Result<(String, RunSummary), CliError> {
    let basis = GellMannBasis::new(s.dimension)?;
    let mut summary = RunSummary {
        rows: 0,
        steps: 0,
        step: s.step,
        max_norm_defect: 0.0,
        max_oracle_err: None,
        oracle_steps: None,
        richardson_error_estimate: None,
        max_vector_residual: None,
    };
    let table = integrate(s, &basis, &mut summary)?;
    summary.rows = table.rows.len();
    info!("integrated {} steps, {} rows", summary.steps, summary.rows);
    let oracle = if validate {
        Some(match &s.model {
            Model::Qubit(h) => oracle_errors(h, &basis, &table, s.oracle_steps, &mut summary)?,
            Model::Qudit(h) => oracle_errors(h, &basis, &table, s.oracle_steps, &mut summary)?,
        })
    } else {
        None
    };
    Ok((render(&table, oracle.as_deref()), summary))
}

pub fn check_class(s: &Scenario) -> Result<serde_json::Value, CliError> {
    match &s.model {
        Model::Qubit(h) => {
            let commuting = commuting_check(h, s.t0, s.t1, THEOREM3_SAMPLES)?;
            if commuting.kind == qevo_core::ClassKind::Commuting {
                return Ok(to_json(&commuting));
            }
            match class_certificate_theorem3(h, s.t0, s.t1, THEOREM3_SAMPLES) {
                Ok(cert) => Ok(to_json(&cert)),
                Err(e @ (QevoError::DegenerateClass { .. } | QevoError::IllDefinedAzimuth { .. })) => {
                    warn!("constant-J check not applicable: {e}");
                    Ok(to_json(&commuting))
                }
                Err(e) => Err(e.into()),
            }
        }
        Model::Qudit(h) => {
            let constants = structure_constants(&GellMannBasis::new(s.dimension)?);
            let r = commuting_check_general(h, &constants, s.t0, s.t1, THEOREM3_SAMPLES)?;
            Ok(json!({
                "kind": if r.commuting { "commuting" } else { "none" },
                "dimension": s.dimension,
                "max_residual": r.max_residual,
                "tolerance": r.tolerance,
            }))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("certificate serializes")
}

/// Where a scenario's trajectory goes: `--out` (a directory in batch mode),
/// then the scenario's own `output`, else stdout.
pub fn output_path(cli_out: Option<&Path>, batch: bool, config: &Path, s: &Scenario, ext: &str) -> Option<PathBuf> {
    match cli_out {
        Some(dir) if batch => {
            let stem = config.file_stem().map(|x| x.to_os_string()).unwrap_or_else(|| "scenario".into());
            Some(dir.join(stem).with_extension(ext))
        }
        Some(p) => Some(p.to_path_buf()),
        None => s.output.clone(),
    }
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_error(p, e)),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| io_error(Path::new("<stdout>"), e))
        }
    }
}
