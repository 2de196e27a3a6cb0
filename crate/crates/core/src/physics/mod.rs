//! Conservation laws and flux vector splittings.

pub mod euler;
pub mod initial;
pub mod manufactured;
pub mod splitting;

use serde::{Deserialize, Serialize};

use crate::error::Violation;

pub use euler::{EulerState, GAMMA};
pub use initial::{InitialCondition, FREE_STREAM};
pub use manufactured::{manufactured_euler_exact, manufactured_euler_source};
pub use splitting::{
    advection_splitting, burgers_full_upwind, steger_warming, van_leer_haenel, FluxSplitting,
    SplittingKind,
};

/// The supported conservation laws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Equation {
    /// `u_t + a·∇u = 0`.
    Advection { velocity: Vec<f64> },
    /// `u_t + (u²/2)_x = 0`.
    Burgers,
    /// Compressible Euler in `dim` space dimensions.
    Euler { dim: usize },
}

impl Equation {
    pub fn advection_1d() -> Self {
        Equation::Advection {
            velocity: vec![1.0],
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            Equation::Advection { .. } | Equation::Burgers => 1,
            Equation::Euler { dim } => dim + 2,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Equation::Advection { velocity } => velocity.len(),
            Equation::Burgers => 1,
            Equation::Euler { dim } => *dim,
        }
    }

    /// Names of the conserved variables.
    pub fn variable_names(&self) -> Vec<&'static str> {
        match self {
            Equation::Advection { .. } | Equation::Burgers => vec!["u"],
            Equation::Euler { dim: 1 } => vec!["rho", "rho_v", "rho_e"],
            Equation::Euler { .. } => vec!["rho", "rho_v1", "rho_v2", "rho_e"],
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Equation::Advection { .. })
    }

    /// `f(u)·n`.
    pub fn flux(&self, u: &[f64], n: &[f64], out: &mut [f64]) {
        match self {
            Equation::Advection { velocity } => {
                let an: f64 = velocity.iter().zip(n).map(|(a, b)| a * b).sum();
                out[0] = an * u[0];
            }
            Equation::Burgers => out[0] = 0.5 * u[0] * u[0] * n[0],
            Equation::Euler { .. } => euler::flux(u, n, out),
        }
    }

    /// Spectral radius of the normal flux Jacobian.
    pub fn max_wave_speed(&self, u: &[f64], n: &[f64]) -> f64 {
        match self {
            Equation::Advection { velocity } => velocity
                .iter()
                .zip(n)
                .map(|(a, b)| a * b)
                .sum::<f64>()
                .abs(),
            Equation::Burgers => (u[0] * n[0]).abs(),
            Equation::Euler { .. } => euler::max_wave_speed(u, n),
        }
    }

    /// Direction-independent bound on the characteristic speeds.
    pub fn max_speed(&self, u: &[f64]) -> f64 {
        match self {
            Equation::Advection { velocity } => velocity.iter().map(|a| a * a).sum::<f64>().sqrt(),
            Equation::Burgers => u[0].abs(),
            Equation::Euler { .. } => euler::max_speed(u),
        }
    }

    pub fn check(&self, u: &[f64]) -> Result<(), (Violation, f64)> {
        match self {
            Equation::Euler { .. } => euler::check_admissible(u),
            _ => match u.iter().find(|v| !v.is_finite()) {
                Some(&bad) => Err((Violation::NonFinite, bad)),
                None => Ok(()),
            },
        }
    }
}
