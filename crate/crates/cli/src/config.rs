//! Experiment configuration: documented defaults, an optional JSON file and
//! command-line overrides, in that order of precedence.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use usbp_core::physics::SplittingKind;

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    ConvergenceAdvection,
    ConvergenceEuler,
    Spectrum,
    LocalStability,
    FreeStream,
    IsentropicVortex,
    KelvinHelmholtz,
    OperatorDump,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::ConvergenceAdvection,
        Experiment::ConvergenceEuler,
        Experiment::Spectrum,
        Experiment::LocalStability,
        Experiment::FreeStream,
        Experiment::IsentropicVortex,
        Experiment::KelvinHelmholtz,
        Experiment::OperatorDump,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::ConvergenceAdvection => "convergence-advection",
            Experiment::ConvergenceEuler => "convergence-euler",
            Experiment::Spectrum => "spectrum",
            Experiment::LocalStability => "local-stability",
            Experiment::FreeStream => "free-stream",
            Experiment::IsentropicVortex => "isentropic-vortex",
            Experiment::KelvinHelmholtz => "kelvin-helmholtz",
            Experiment::OperatorDump => "operator-dump",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| UsageError::new("experiment", format!("unknown experiment '{s}'")))
    }
}

/// A fully resolved experiment configuration.
///
/// `lambda` is the dissipation parameter λ_N of the experiment tables; the
/// top eigenvalue of the dissipation matrix is `2 λ_N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(rename = "N")]
    pub n: usize,
    pub lambda: f64,
    pub splitting: SplittingKind,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub cfl: f64,
    pub t_end: f64,
    pub seed: u64,
    /// Random states per element count (local stability).
    pub samples: usize,
    /// Geometry degrees (free stream).
    pub n_geo: Vec<usize>,
    /// Warping amplitude (free stream).
    pub amplitude: f64,
    /// Run independent combinations on separate threads.
    pub parallel: bool,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Documented defaults of each experiment.
    pub fn defaults(experiment: Experiment) -> Self {
        let doubling = (1..=7).map(|k| 1usize << k).collect::<Vec<_>>();
        let base = Self {
            experiment,
            n: 3,
            lambda: -1.0,
            splitting: SplittingKind::LaxFriedrichs,
            j: doubling.clone(),
            cfl: 0.1,
            t_end: 5.0,
            seed: 0,
            samples: 10,
            n_geo: vec![1, 2, 3, 4],
            amplitude: 0.08,
            parallel: false,
            out: None,
        };
        match experiment {
            Experiment::ConvergenceAdvection => base,
            Experiment::ConvergenceEuler => Self {
                splitting: SplittingKind::VanLeerHaenel,
                t_end: 2.0,
                ..base
            },
            Experiment::Spectrum => Self {
                n: 4,
                j: vec![16],
                ..base
            },
            Experiment::LocalStability => Self {
                splitting: SplittingKind::FullUpwind,
                j: vec![2, 4, 8, 16],
                ..base
            },
            Experiment::FreeStream => Self {
                splitting: SplittingKind::VanLeerHaenel,
                j: vec![16],
                ..base
            },
            Experiment::IsentropicVortex => Self {
                n: 4,
                lambda: -1e-3,
                splitting: SplittingKind::StegerWarming,
                j: vec![256],
                cfl: 0.5,
                t_end: 10.0,
                ..base
            },
            Experiment::KelvinHelmholtz => Self {
                lambda: -1e-3,
                splitting: SplittingKind::VanLeerHaenel,
                j: vec![16, 64],
                t_end: 15.0,
                ..base
            },
            Experiment::OperatorDump => Self {
                n: 4,
                j: vec![1],
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        let fail = |field: &str, msg: String| Err(UsageError::new(field, msg));
        if !(2..=16).contains(&self.n) {
            return fail("N", format!("N must lie in 2..=16, got {}", self.n));
        }
        if !self.lambda.is_finite() || self.lambda > 0.0 {
            return fail(
                "lambda",
                format!("lambda must be finite and <= 0, got {}", self.lambda),
            );
        }
        if self.j.is_empty() || self.j.contains(&0) {
            return fail("J", "J needs at least one positive element count".into());
        }
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return fail("cfl", format!("cfl must be positive, got {}", self.cfl));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return fail(
                "t_end",
                format!("t_end must be positive, got {}", self.t_end),
            );
        }
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return fail(
                "amplitude",
                format!("amplitude must be >= 0, got {}", self.amplitude),
            );
        }
        if self.samples == 0 {
            return fail("samples", "samples must be positive".into());
        }
        if let Some(g) = self.n_geo.iter().find(|g| !(1..=4).contains(*g)) {
            return fail(
                "n_geo",
                format!("geometry degree must lie in 1..=4, got {g}"),
            );
        }
        let allowed: &[SplittingKind] = match self.experiment {
            Experiment::ConvergenceAdvection | Experiment::Spectrum => {
                &[SplittingKind::LaxFriedrichs]
            }
            Experiment::LocalStability => &[SplittingKind::FullUpwind],
            Experiment::OperatorDump => &[
                SplittingKind::LaxFriedrichs,
                SplittingKind::StegerWarming,
                SplittingKind::VanLeerHaenel,
                SplittingKind::FullUpwind,
            ],
            Experiment::FreeStream => &[
                SplittingKind::LaxFriedrichs,
                SplittingKind::StegerWarming,
                SplittingKind::VanLeerHaenel,
            ],
            _ => &[SplittingKind::StegerWarming, SplittingKind::VanLeerHaenel],
        };
        if !allowed.contains(&self.splitting) {
            return fail(
                "splitting",
                format!(
                    "{} does not support the {} splitting",
                    self.experiment, self.splitting
                ),
            );
        }
        if matches!(
            self.experiment,
            Experiment::Spectrum | Experiment::OperatorDump
        ) && self.j.len() != 1
        {
            return fail("J", format!("{} takes a single J", self.experiment));
        }
        if matches!(
            self.experiment,
            Experiment::FreeStream | Experiment::IsentropicVortex | Experiment::KelvinHelmholtz
        ) {
            if let Some(j) = self.j.iter().find(|&&j| square_side(j).is_none()) {
                return fail(
                    "J",
                    format!("two-dimensional runs need a square J, got {j}"),
                );
            }
        }
        Ok(())
    }
}

/// Side length of a square element count.
pub fn square_side(j: usize) -> Option<usize> {
    let s = (j as f64).sqrt().round() as usize;
    (s > 0 && s * s == j).then_some(s)
}

/// Keys accepted in a JSON configuration file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub experiment: Option<Experiment>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub lambda: Option<f64>,
    pub splitting: Option<String>,
    #[serde(rename = "J")]
    pub j: Option<Vec<usize>>,
    pub cfl: Option<f64>,
    pub t_end: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub n_geo: Option<Vec<usize>>,
    pub amplitude: Option<f64>,
    pub parallel: Option<bool>,
    pub out: Option<PathBuf>,
}

impl ConfigFile {
    pub fn read(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError::new("config", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, UsageError> {
        serde_json::from_str(text).map_err(|e| UsageError::new("config", e.to_string()))
    }

    /// Values set in `other` replace those of `self`.
    pub fn overlay(self, other: ConfigFile) -> ConfigFile {
        ConfigFile {
            experiment: other.experiment.or(self.experiment),
            n: other.n.or(self.n),
            lambda: other.lambda.or(self.lambda),
            splitting: other.splitting.or(self.splitting),
            j: other.j.or(self.j),
            cfl: other.cfl.or(self.cfl),
            t_end: other.t_end.or(self.t_end),
            seed: other.seed.or(self.seed),
            samples: other.samples.or(self.samples),
            n_geo: other.n_geo.or(self.n_geo),
            amplitude: other.amplitude.or(self.amplitude),
            parallel: other.parallel.or(self.parallel),
            out: other.out.or(self.out),
        }
    }

    pub fn resolve(self) -> Result<ExperimentConfig, UsageError> {
        let experiment = self
            .experiment
            .ok_or_else(|| UsageError::new("experiment", "no experiment given".into()))?;
        let d = ExperimentConfig::defaults(experiment);
        let splitting = match self.splitting {
            Some(s) => s
                .parse()
                .map_err(|_| UsageError::new("splitting", format!("unknown splitting '{s}'")))?,
            None => d.splitting,
        };
        let cfg = ExperimentConfig {
            experiment,
            n: self.n.unwrap_or(d.n),
            lambda: self.lambda.unwrap_or(d.lambda),
            splitting,
            j: self.j.unwrap_or(d.j),
            cfl: self.cfl.unwrap_or(d.cfl),
            t_end: self.t_end.unwrap_or(d.t_end),
            seed: self.seed.unwrap_or(d.seed),
            samples: self.samples.unwrap_or(d.samples),
            n_geo: self.n_geo.unwrap_or(d.n_geo),
            amplitude: self.amplitude.unwrap_or(d.amplitude),
            parallel: self.parallel.unwrap_or(d.parallel),
            out: self.out.or(d.out),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Merge an optional config file with flag overrides and validate.
pub fn load_config(path: Option<&Path>, flags: ConfigFile) -> Result<ExperimentConfig, UsageError> {
    let file = match path {
        Some(p) => ConfigFile::read(p)?,
        None => ConfigFile::default(),
    };
    file.overlay(flags).resolve()
}

/// Parse `2,4,8` or a range `2..128` of doublings.
pub fn parse_j_list(s: &str) -> Result<Vec<usize>, String> {
    if let Some((a, b)) = s.split_once("..") {
        let lo: usize = a.trim().parse().map_err(|e| format!("bad J '{a}': {e}"))?;
        let hi: usize = b.trim().parse().map_err(|e| format!("bad J '{b}': {e}"))?;
        if lo == 0 || hi < lo {
            return Err(format!("empty J range {s}"));
        }
        return Ok(std::iter::successors(Some(lo), |&j| Some(2 * j))
            .take_while(|&j| j <= hi)
            .collect());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|e| format!("bad J '{t}': {e}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(experiment: Experiment) -> ConfigFile {
        ConfigFile {
            experiment: Some(experiment),
            ..Default::default()
        }
    }

    #[test]
    fn minimal_flags_fill_defaults() {
        let cfg = ConfigFile {
            n: Some(3),
            lambda: Some(-1.0),
            ..flags(Experiment::ConvergenceAdvection)
        }
        .resolve()
        .unwrap();
        assert_eq!(cfg.j, vec![2, 4, 8, 16, 32, 64, 128]);
        assert_eq!(cfg.cfl, 0.1);
        assert_eq!(cfg.t_end, 5.0);
    }

    #[test]
    fn positive_lambda_rejected() {
        let err = ConfigFile {
            lambda: Some(0.5),
            ..flags(Experiment::Spectrum)
        }
        .resolve()
        .unwrap_err();
        assert_eq!(err.field, "lambda");
    }

    #[test]
    fn flags_override_file() {
        let file =
            ConfigFile::parse(r#"{"experiment": "kelvin-helmholtz", "J": [16], "cfl": 0.2}"#)
                .unwrap();
        let over = ConfigFile {
            j: Some(vec![64]),
            ..Default::default()
        };
        let cfg = file.overlay(over).resolve().unwrap();
        assert_eq!(cfg.j, vec![64]);
        assert_eq!(cfg.cfl, 0.2);
    }

    #[test]
    fn unknown_key_names_field() {
        let err = ConfigFile::parse(r#"{"experiment": "spectrum", "nodes": 4}"#).unwrap_err();
        assert!(err.message.contains("nodes"), "{err}");
    }

    #[test]
    fn invalid_combinations() {
        let bad = [
            ConfigFile {
                splitting: Some("steger-warming".into()),
                ..flags(Experiment::ConvergenceAdvection)
            },
            ConfigFile {
                j: Some(vec![12]),
                ..flags(Experiment::KelvinHelmholtz)
            },
            ConfigFile {
                j: Some(vec![4, 8]),
                ..flags(Experiment::Spectrum)
            },
            ConfigFile {
                n: Some(1),
                ..flags(Experiment::OperatorDump)
            },
            ConfigFile {
                splitting: Some("roe".into()),
                ..flags(Experiment::ConvergenceEuler)
            },
            ConfigFile::default(),
        ];
        for b in bad {
            assert!(b.clone().resolve().is_err(), "{b:?}");
        }
    }

    #[test]
    fn every_default_is_valid() {
        for e in Experiment::ALL {
            ExperimentConfig::defaults(e).validate().unwrap();
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
    }

    #[test]
    fn j_lists() {
        assert_eq!(parse_j_list("2..16").unwrap(), vec![2, 4, 8, 16]);
        assert_eq!(parse_j_list("16, 64").unwrap(), vec![16, 64]);
        assert!(parse_j_list("a").is_err());
        assert!(parse_j_list("8..2").is_err());
        assert_eq!(square_side(64), Some(8));
        assert_eq!(square_side(32), None);
    }
}
