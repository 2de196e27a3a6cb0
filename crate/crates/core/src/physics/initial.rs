//! Initial data of the numerical experiments.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::euler::{EulerState, GAMMA};

/// Free-stream state `(ρ, ρv₁, ρv₂, ρe)`.
pub const FREE_STREAM: [f64; 4] = [1.0, 0.1, -0.2, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialCondition {
    AdvectionSine,
    IsentropicVortex,
    KelvinHelmholtz,
    FreeStream,
}

impl InitialCondition {
    /// Default domain `[lo, hi]` per coordinate.
    pub fn domain(self) -> (f64, f64) {
        match self {
            InitialCondition::AdvectionSine | InitialCondition::KelvinHelmholtz => (-1.0, 1.0),
            InitialCondition::IsentropicVortex => (-5.0, 5.0),
            InitialCondition::FreeStream => (0.0, 1.0),
        }
    }

    /// Conserved state at point `x` (one or two coordinates).
    pub fn evaluate(self, x: &[f64]) -> Vec<f64> {
        match self {
            InitialCondition::AdvectionSine => vec![(PI * x[0]).sin()],
            InitialCondition::IsentropicVortex => isentropic_vortex(x[0], x[1]).to_conserved(),
            InitialCondition::KelvinHelmholtz => kelvin_helmholtz(x[0], x[1]).to_conserved(),
            InitialCondition::FreeStream => FREE_STREAM.to_vec(),
        }
    }
}

pub const VORTEX_STRENGTH: f64 = 10.0;
pub const VORTEX_BACKGROUND: (f64, [f64; 2], f64) = (1.0, [1.0, 1.0], 10.0);

/// Isentropic vortex centred at the origin.
pub fn isentropic_vortex(x: f64, y: f64) -> EulerState {
    let (rho0, v0, p0) = VORTEX_BACKGROUND;
    let eps = VORTEX_STRENGTH;
    let t0 = p0 / rho0;
    let r2 = x * x + y * y;
    let t = t0 - (GAMMA - 1.0) * eps * eps / (8.0 * GAMMA * PI * PI) * (1.0 - r2).exp();
    let rho = rho0 * (t / t0).powf(1.0 / (GAMMA - 1.0));
    let amp = eps / (2.0 * PI) * (0.5 * (1.0 - r2)).exp();
    let v = [v0[0] - amp * y, v0[1] + amp * x];
    EulerState::from_primitive(rho, &v, rho * t)
}

/// Isentropic vortex advected by the background velocity for time `t` on
/// the periodic square `[lo, hi]²`.
pub fn isentropic_vortex_exact(t: f64, x: f64, y: f64, lo: f64, hi: f64) -> EulerState {
    let (_, v0, _) = VORTEX_BACKGROUND;
    let len = hi - lo;
    let wrap = |z: f64| lo + (z - lo).rem_euclid(len);
    isentropic_vortex(wrap(x - v0[0] * t), wrap(y - v0[1] * t))
}

fn kh_step(y: f64) -> f64 {
    (15.0 * y + 7.5).tanh() - (15.0 * y - 7.5).tanh()
}

/// Kelvin–Helmholtz shear layer.
pub fn kelvin_helmholtz(x: f64, y: f64) -> EulerState {
    let b = kh_step(y);
    let rho = 0.5 + 0.75 * b;
    let v = [0.5 * (b - 1.0), 0.1 * (2.0 * PI * x).sin()];
    EulerState::from_primitive(rho, &v, 1.0)
}

/// Componentwise uniform values on `[0.1, 1.1]` from a seeded generator.
pub fn random_nonnegative(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(0.1..1.1)).collect()
}
