//! Manufactured solution for the 1D Euler equations:
//! `ρ = h`, `v = 1`, `ρe = h²` with `h = 2 + 0.1 sin(π(x - t))`.

use std::f64::consts::PI;

use super::euler::{EulerState, GAMMA};

fn h(t: f64, x: f64) -> f64 {
    2.0 + 0.1 * (PI * (x - t)).sin()
}

fn h_x(t: f64, x: f64) -> f64 {
    0.1 * PI * (PI * (x - t)).cos()
}

pub fn manufactured_euler_exact(t: f64, x: f64) -> EulerState {
    let h = h(t, x);
    EulerState {
        rho: h,
        momentum: vec![h],
        total_energy: h * h,
    }
}

/// `∂_t u + ∂_x f(u)` of the exact solution. With `h_t = -h_x` the mass
/// residual vanishes and the momentum and energy residuals both reduce to
/// `p_x = (γ - 1)(2h - 1/2) h_x`.
pub fn manufactured_euler_source(t: f64, x: f64) -> [f64; 3] {
    let p_x = (GAMMA - 1.0) * (2.0 * h(t, x) - 0.5) * h_x(t, x);
    [0.0, p_x, p_x]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::euler;

    #[test]
    fn exact_at_origin() {
        let s = manufactured_euler_exact(0.0, 0.0);
        assert_eq!((s.rho, s.momentum[0], s.total_energy), (2.0, 2.0, 4.0));
    }

    #[test]
    fn source_vanishes_where_h_is_flat() {
        let src = manufactured_euler_source(0.3, 0.8);
        assert_eq!(src[0], 0.0);
        assert!(src[1].abs() < 1e-15 && src[2].abs() < 1e-15);
    }

    #[test]
    fn source_matches_finite_differences() {
        let step = 1e-6;
        let flux = |t: f64, x: f64| {
            let u = manufactured_euler_exact(t, x).to_conserved();
            let mut f = [0.0; 3];
            euler::flux(&u, &[1.0], &mut f);
            f
        };
        for &(t, x) in &[(0.0, 0.25), (0.7, 1.3), (1.9, 0.05)] {
            let up = manufactured_euler_exact(t + step, x).to_conserved();
            let um = manufactured_euler_exact(t - step, x).to_conserved();
            let fp = flux(t, x + step);
            let fm = flux(t, x - step);
            let src = manufactured_euler_source(t, x);
            for i in 0..3 {
                let oracle = (up[i] - um[i]) / (2.0 * step) + (fp[i] - fm[i]) / (2.0 * step);
                assert!((oracle - src[i]).abs() < 1e-7, "t={t} x={x} i={i}");
            }
        }
    }
}
