use std::fmt;

use thiserror::Error;

/// Which admissibility condition a state violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    Density,
    Pressure,
    NonFinite,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Density => write!(f, "non-positive density"),
            Violation::Pressure => write!(f, "non-positive pressure"),
            Violation::NonFinite => write!(f, "non-finite value"),
        }
    }
}

/// Location of an inadmissible state inside a running simulation.
///
/// `element` and `node` index the flattened element/node layout of the
/// semi-discretization that detected the problem; `time` is filled in by the
/// time integrator (the right-hand side itself does not know the stage time
/// it is being evaluated for unless one is passed in).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SimulationAbort {
    pub time: f64,
    pub element: usize,
    pub node: usize,
    pub violation: Violation,
    pub value: f64,
}

impl fmt::Display for SimulationAbort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({:e}) at t = {}, element {}, node {}",
            self.violation, self.value, self.time, self.element, self.node
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("construction failed: {0}")]
    ConstructionFailure(String),
    #[error("inadmissible state: {0}")]
    Inadmissible(Violation),
    #[error("simulation aborted: {0}")]
    Aborted(SimulationAbort),
    #[error("mesh error: {0}")]
    Mesh(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
