//! Compressible Euler equations of an ideal gas in one or two dimensions.
//!
//! Conserved states are slices `[ρ, ρv_1, …, ρv_d, ρe]`; the spatial
//! dimension is `d = u.len() - 2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};

pub const GAMMA: f64 = 1.4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerState {
    pub rho: f64,
    pub momentum: Vec<f64>,
    pub total_energy: f64,
}

impl EulerState {
    pub fn from_primitive(rho: f64, velocity: &[f64], p: f64) -> Self {
        let kinetic: f64 = 0.5 * rho * velocity.iter().map(|v| v * v).sum::<f64>();
        Self {
            rho,
            momentum: velocity.iter().map(|v| rho * v).collect(),
            total_energy: p / (GAMMA - 1.0) + kinetic,
        }
    }

    pub fn from_conserved(u: &[f64]) -> Self {
        let d = u.len() - 2;
        Self {
            rho: u[0],
            momentum: u[1..=d].to_vec(),
            total_energy: u[d + 1],
        }
    }

    pub fn to_conserved(&self) -> Vec<f64> {
        let mut u = Vec::with_capacity(self.momentum.len() + 2);
        u.push(self.rho);
        u.extend_from_slice(&self.momentum);
        u.push(self.total_energy);
        u
    }

    pub fn velocity(&self) -> Vec<f64> {
        self.momentum.iter().map(|m| m / self.rho).collect()
    }

    pub fn pressure(&self) -> f64 {
        pressure(&self.to_conserved())
    }

    pub fn is_admissible(&self) -> bool {
        check_admissible(&self.to_conserved()).is_ok()
    }
}

#[inline]
pub fn dim(u: &[f64]) -> usize {
    u.len() - 2
}

#[inline]
pub fn kinetic_energy_density(u: &[f64]) -> f64 {
    let d = dim(u);
    0.5 * u[1..=d].iter().map(|m| m * m).sum::<f64>() / u[0]
}

/// `p = (γ - 1)(ρe - ρ|v|²/2)`.
#[inline]
pub fn pressure(u: &[f64]) -> f64 {
    (GAMMA - 1.0) * (u[dim(u) + 1] - kinetic_energy_density(u))
}

#[inline]
pub fn sound_speed(u: &[f64]) -> f64 {
    (GAMMA * pressure(u) / u[0]).sqrt()
}

/// Density and pressure must be positive and every entry finite.
pub fn check_admissible(u: &[f64]) -> std::result::Result<(), (Violation, f64)> {
    if let Some(&bad) = u.iter().find(|v| !v.is_finite()) {
        return Err((Violation::NonFinite, bad));
    }
    if !(u[0] > 0.0) {
        return Err((Violation::Density, u[0]));
    }
    let p = pressure(u);
    if !(p > 0.0) {
        return Err((Violation::Pressure, p));
    }
    Ok(())
}

pub(crate) fn admissible(u: &[f64]) -> Result<()> {
    check_admissible(u).map_err(|(v, _)| Error::Inadmissible(v))
}

/// Normal flux `f(u)·n` for a (not necessarily unit) direction `n`.
pub fn flux(u: &[f64], n: &[f64], out: &mut [f64]) {
    let d = dim(u);
    let rho = u[0];
    let p = pressure(u);
    let vn: f64 = (0..d).map(|k| u[1 + k] * n[k]).sum::<f64>() / rho;
    out[0] = rho * vn;
    for k in 0..d {
        out[1 + k] = u[1 + k] * vn + p * n[k];
    }
    out[d + 1] = (u[d + 1] + p) * vn;
}

/// Largest characteristic speed `|v·n| + c|n|`.
pub fn max_wave_speed(u: &[f64], n: &[f64]) -> f64 {
    let d = dim(u);
    let vn: f64 = (0..d).map(|k| u[1 + k] * n[k]).sum::<f64>() / u[0];
    let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    vn.abs() + sound_speed(u) * norm
}

/// Largest `|v| + c`, direction independent.
pub fn max_speed(u: &[f64]) -> f64 {
    let speed = (2.0 * kinetic_energy_density(u) / u[0]).sqrt();
    speed + sound_speed(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_round_trip() {
        let s = EulerState::from_primitive(1.3, &[0.2, -0.7], 2.5);
        assert!((s.pressure() - 2.5).abs() < 1e-14);
        let v = s.velocity();
        assert!((v[0] - 0.2).abs() < 1e-15 && (v[1] + 0.7).abs() < 1e-15);
        assert_eq!(EulerState::from_conserved(&s.to_conserved()), s);
    }

    #[test]
    fn one_dimensional_flux() {
        // rho = 1, v = 0.1, rho e = 10 -> p = 0.4 (10 - 0.005)
        let u = [1.0, 0.1, 10.0];
        let p = 0.4 * (10.0 - 0.005);
        let mut f = [0.0; 3];
        flux(&u, &[1.0], &mut f);
        assert!((f[0] - 0.1).abs() < 1e-15);
        assert!((f[1] - (0.01 + p)).abs() < 1e-14);
        assert!((f[2] - (10.0 + p) * 0.1).abs() < 1e-14);
    }

    #[test]
    fn admissibility() {
        assert!(check_admissible(&[1.0, 0.0, 1.0]).is_ok());
        assert_eq!(
            check_admissible(&[-1.0, 0.0, 1.0]).unwrap_err().0,
            Violation::Density
        );
        assert_eq!(
            check_admissible(&[1.0, 3.0, 1.0]).unwrap_err().0,
            Violation::Pressure
        );
        assert_eq!(
            check_admissible(&[1.0, f64::NAN, 1.0]).unwrap_err().0,
            Violation::NonFinite
        );
    }

    #[test]
    fn flux_is_linear_in_direction() {
        let u = [0.9, 0.3, -0.4, 3.0];
        let mut a = [0.0; 4];
        let mut b = [0.0; 4];
        let mut c = [0.0; 4];
        flux(&u, &[1.0, 0.0], &mut a);
        flux(&u, &[0.0, 1.0], &mut b);
        flux(&u, &[0.3, -2.0], &mut c);
        for i in 0..4 {
            assert!((c[i] - (0.3 * a[i] - 2.0 * b[i])).abs() < 1e-14);
        }
    }
}
