//! Experiment driver for DG-USBP discretizations.
//!
//! [`config`] resolves an [`ExperimentConfig`], [`run`] executes it and
//! [`output`] writes the results.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod output;

use std::fmt;

use serde_json::json;
use usbp_core::operators::OperatorBundle;
use usbp_core::Result;

pub use config::{load_config, ConfigFile, Experiment, ExperimentConfig};
pub use output::{Body, RunOutput, Table};

use config::square_side;
use output::real;

/// Invalid user input, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError {
    pub field: String,
    pub message: String,
}

impl UsageError {
    pub fn new(field: &str, message: String) -> Self {
        Self {
            field: field.to_string(),
            message,
        }
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid {}: {}", self.field, self.message)
    }
}

impl std::error::Error for UsageError {}

fn side(j: usize) -> usize {
    square_side(j).expect("validated square element count")
}

/// Execute the experiment described by `cfg`.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let (n, lambda, kind) = (cfg.n, cfg.lambda, cfg.splitting);
    let mut diagnostics = Vec::new();
    let (body, summary) = match cfg.experiment {
        Experiment::ConvergenceAdvection | Experiment::ConvergenceEuler => {
            let study = if cfg.experiment == Experiment::ConvergenceAdvection {
                experiments::convergence_advection(
                    n,
                    lambda,
                    &cfg.j,
                    cfg.cfl,
                    cfg.t_end,
                    cfg.parallel,
                )?
            } else {
                experiments::convergence_euler(
                    n,
                    lambda,
                    kind,
                    &cfg.j,
                    cfg.cfl,
                    cfg.t_end,
                    cfg.parallel,
                )?
            };
            let mut t = Table::new(&["J", "l2_error", "eoc"]);
            for r in &study.rows {
                t.push(vec![
                    r.j.to_string(),
                    real(r.l2_error),
                    r.eoc.map_or(String::new(), |e| format!("{e:.4}")),
                ]);
            }
            let summary = json!({
                "temporal_error": study.temporal_error,
                "time_resolved": study.time_resolved(),
            });
            (Body::Csv(t), summary)
        }
        Experiment::Spectrum => {
            let s = experiments::spectrum(n, lambda, cfg.j[0])?;
            let mut t = Table::new(&["re", "im"]);
            for z in &s.report.eigenvalues {
                t.push(vec![real(z.re), real(z.im)]);
            }
            let summary = json!({
                "max_real_part": s.report.max_real_part,
                "spectral_radius": s.report.spectral_radius,
                "norm": s.norm,
            });
            (Body::Csv(t), summary)
        }
        Experiment::LocalStability => {
            let rows = experiments::local_stability(
                n,
                lambda,
                &cfg.j,
                cfg.seed,
                cfg.samples,
                cfg.parallel,
            )?;
            let mut t = Table::new(&["N", "lambda", "J", "seed", "max_real_part", "norm", "ratio"]);
            for r in &rows {
                t.push(vec![
                    r.n.to_string(),
                    real(r.lambda),
                    r.j.to_string(),
                    r.seed.to_string(),
                    real(r.max_real_part),
                    real(r.norm),
                    real(r.ratio()),
                ]);
            }
            let worst = rows
                .iter()
                .map(|r| r.ratio())
                .fold(f64::NEG_INFINITY, f64::max);
            (Body::Csv(t), json!({ "max_ratio": worst }))
        }
        Experiment::FreeStream => {
            let s = side(cfg.j[0]);
            let residuals = experiments::sweep(&cfg.n_geo, cfg.parallel, |&g| {
                experiments::free_stream(n, lambda, kind, g, s, cfg.amplitude)
            });
            let mut t = Table::new(&["N", "N_geo", "splitting", "residual"]);
            for (g, r) in cfg.n_geo.iter().zip(residuals) {
                t.push(vec![
                    n.to_string(),
                    g.to_string(),
                    kind.to_string(),
                    real(r?),
                ]);
            }
            (Body::Csv(t), json!({}))
        }
        Experiment::IsentropicVortex => {
            let runs = experiments::isentropic_vortex(
                n,
                lambda,
                kind,
                side(cfg.j[0]),
                cfg.cfl,
                cfg.t_end,
                cfg.parallel,
            )?;
            let mut t = Table::new(&[
                "scheme",
                "status",
                "final_time",
                "steps",
                "density_error",
                "temporal_error",
            ]);
            for r in runs {
                t.push(vec![
                    r.scheme.clone(),
                    r.summary.status().into(),
                    real(r.summary.final_time),
                    r.summary.steps.to_string(),
                    r.density_error.map_or(String::new(), real),
                    r.temporal_error.map_or(String::new(), real),
                ]);
                diagnostics.push((r.scheme, r.summary.diagnostics));
            }
            (Body::Csv(t), json!({}))
        }
        Experiment::KelvinHelmholtz => {
            let runs = experiments::sweep(&cfg.j, cfg.parallel, |&j| {
                experiments::kelvin_helmholtz(n, lambda, kind, side(j), cfg.cfl, cfg.t_end)
            });
            let mut t = Table::new(&[
                "N",
                "J",
                "lambda",
                "splitting",
                "status",
                "final_time",
                "steps",
            ]);
            for (&j, r) in cfg.j.iter().zip(runs) {
                let r = r?;
                t.push(vec![
                    n.to_string(),
                    j.to_string(),
                    real(lambda),
                    kind.to_string(),
                    r.status().into(),
                    real(r.final_time),
                    r.steps.to_string(),
                ]);
                diagnostics.push((format!("J{j}"), r.diagnostics));
            }
            (Body::Csv(t), json!({}))
        }
        Experiment::OperatorDump => {
            let bundle = OperatorBundle::from_pair(&experiments::experiment_pair(n, lambda)?);
            (Body::Json(serde_json::to_value(bundle)?), json!({}))
        }
    };
    Ok(RunOutput {
        body,
        summary,
        diagnostics,
    })
}
