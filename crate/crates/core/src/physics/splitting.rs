//! Flux vector splittings `f = f₊ + f₋`.
//!
//! Every splitting is evaluated for a direction vector `n` that need not be
//! normalized. In one dimension `n = [1]`; curvilinear schemes pass the
//! contravariant metric vector.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::euler::{self, GAMMA};
use super::Equation;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplittingKind {
    LaxFriedrichs,
    StegerWarming,
    VanLeerHaenel,
    FullUpwind,
}

impl SplittingKind {
    /// Polynomial order of the split flux in the metric terms.
    pub fn metric_order(self) -> usize {
        match self {
            SplittingKind::LaxFriedrichs | SplittingKind::FullUpwind => 1,
            SplittingKind::StegerWarming | SplittingKind::VanLeerHaenel => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SplittingKind::LaxFriedrichs => "lax-friedrichs",
            SplittingKind::StegerWarming => "steger-warming",
            SplittingKind::VanLeerHaenel => "van-leer-haenel",
            SplittingKind::FullUpwind => "full-upwind",
        }
    }
}

impl fmt::Display for SplittingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SplittingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "lax-friedrichs" | "lf" => Ok(SplittingKind::LaxFriedrichs),
            "steger-warming" | "sw" => Ok(SplittingKind::StegerWarming),
            "van-leer-haenel" | "van-leer-hanel" | "vlh" => Ok(SplittingKind::VanLeerHaenel),
            "full-upwind" => Ok(SplittingKind::FullUpwind),
            other => Err(invalid(format!("unknown splitting '{other}'"))),
        }
    }
}

/// A named splitting bound to an equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxSplitting {
    pub kind: SplittingKind,
    pub equation: Equation,
    /// Frozen dissipation speed of the Lax–Friedrichs splitting, applied as
    /// is to `u` for any `n` (ignored by the other splittings).
    pub lambda: f64,
}

impl FluxSplitting {
    pub fn new(kind: SplittingKind, equation: Equation, lambda: Option<f64>) -> Result<Self> {
        match (kind, &equation) {
            (SplittingKind::LaxFriedrichs, _) => {
                let lambda = lambda.ok_or_else(|| invalid("Lax-Friedrichs needs lambda_max"))?;
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(invalid(format!(
                        "lambda_max must be positive, got {lambda}"
                    )));
                }
                Ok(Self {
                    kind,
                    equation,
                    lambda,
                })
            }
            (
                SplittingKind::StegerWarming | SplittingKind::VanLeerHaenel,
                Equation::Euler { .. },
            ) => Ok(Self {
                kind,
                equation,
                lambda: 0.0,
            }),
            (SplittingKind::FullUpwind, Equation::Burgers) => Ok(Self {
                kind,
                equation,
                lambda: 0.0,
            }),
            (kind, eq) => Err(invalid(format!(
                "{kind} splitting is not defined for {eq:?}"
            ))),
        }
    }

    pub fn metric_order(&self) -> usize {
        self.kind.metric_order()
    }

    pub fn nvars(&self) -> usize {
        self.equation.nvars()
    }

    /// Evaluate `f₊(u; n)` and `f₋(u; n)`.
    pub fn split(&self, u: &[f64], n: &[f64], fp: &mut [f64], fm: &mut [f64]) -> Result<()> {
        match self.kind {
            SplittingKind::LaxFriedrichs => {
                self.equation.flux(u, n, fp);
                for i in 0..u.len() {
                    let f = fp[i];
                    fp[i] = 0.5 * (f + self.lambda * u[i]);
                    fm[i] = 0.5 * (f - self.lambda * u[i]);
                }
                Ok(())
            }
            SplittingKind::FullUpwind => {
                self.equation.flux(u, n, fp);
                fm.iter_mut().for_each(|v| *v = 0.0);
                Ok(())
            }
            SplittingKind::StegerWarming => steger_warming_into(u, n, fp, fm),
            SplittingKind::VanLeerHaenel => van_leer_haenel_into(u, n, fp, fm),
        }
    }

    /// Convenience wrapper returning owned vectors.
    pub fn split_vec(&self, u: &[f64], n: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut fp = vec![0.0; u.len()];
        let mut fm = vec![0.0; u.len()];
        self.split(u, n, &mut fp, &mut fm)?;
        Ok((fp, fm))
    }
}

/// Lax–Friedrichs splitting `f± = (f ± λu)/2` for scalar advection with unit speed.
pub fn advection_splitting(lambda_max: f64) -> Result<FluxSplitting> {
    FluxSplitting::new(
        SplittingKind::LaxFriedrichs,
        Equation::advection_1d(),
        Some(lambda_max),
    )
}

/// `f₊ = u²/2`, `f₋ = 0`.
pub fn burgers_full_upwind() -> FluxSplitting {
    FluxSplitting {
        kind: SplittingKind::FullUpwind,
        equation: Equation::Burgers,
        lambda: 0.0,
    }
}

fn unit(n: &[f64]) -> ([f64; 3], f64) {
    let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut nh = [0.0; 3];
    for (o, x) in nh.iter_mut().zip(n) {
        *o = x / norm;
    }
    (nh, norm)
}

/// Steger–Warming splitting in direction `n`; eigenvalues `v·n`, `v·n ± c|n|`
/// are split by sign.
pub fn steger_warming_into(u: &[f64], n: &[f64], fp: &mut [f64], fm: &mut [f64]) -> Result<()> {
    euler::admissible(u)?;
    let d = euler::dim(u);
    let (nh, norm) = unit(n);
    let rho = u[0];
    let mut v = [0.0; 3];
    for k in 0..d {
        v[k] = u[1 + k] / rho;
    }
    let v2: f64 = v.iter().map(|x| x * x).sum();
    let vn: f64 = v.iter().zip(&nh).map(|(a, b)| a * b).sum();
    let c = euler::sound_speed(u);
    let lam = [(vn - c) * norm, vn * norm, (vn + c) * norm];
    let g = GAMMA;
    for (out, sign) in [(&mut *fp, 1.0), (&mut *fm, -1.0)] {
        let l = lam.map(|x| 0.5 * (x + sign * x.abs()));
        let pre = rho / (2.0 * g);
        out[0] = pre * (l[0] + 2.0 * (g - 1.0) * l[1] + l[2]);
        for k in 0..d {
            out[1 + k] = pre
                * (l[0] * (v[k] - c * nh[k])
                    + 2.0 * (g - 1.0) * l[1] * v[k]
                    + l[2] * (v[k] + c * nh[k]));
        }
        let w = (3.0 - g) * (l[0] + l[2]) * c * c / (2.0 * (g - 1.0));
        out[d + 1] = pre
            * (0.5 * l[0] * (v2 - 2.0 * c * vn + c * c)
                + (g - 1.0) * l[1] * v2
                + 0.5 * l[2] * (v2 + 2.0 * c * vn + c * c)
                + w);
    }
    Ok(())
}

/// van Leer–Hänel splitting: Mach-number mass flux, Hänel pressure split and
/// total-enthalpy energy flux. The Mach number is `v·n / c` with the
/// unnormalized `n`, which keeps the split flux a quadratic polynomial in the
/// metric terms. Outside the subsonic range (`|v·n| ≥ c|n|`) the splitting
/// is one-sided.
pub fn van_leer_haenel_into(u: &[f64], n: &[f64], fp: &mut [f64], fm: &mut [f64]) -> Result<()> {
    euler::admissible(u)?;
    let d = euler::dim(u);
    let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    let rho = u[0];
    let p = euler::pressure(u);
    let c = euler::sound_speed(u);
    let vn: f64 = (0..d).map(|k| u[1 + k] * n[k]).sum::<f64>() / rho;
    if vn >= c * norm || vn <= -c * norm {
        let (full, zero) = if vn > 0.0 { (fp, fm) } else { (fm, fp) };
        euler::flux(u, n, full);
        zero.iter_mut().for_each(|x| *x = 0.0);
        return Ok(());
    }
    let m = vn / c;
    let h = (u[d + 1] + p) / rho;
    for (out, sign) in [(&mut *fp, 1.0), (&mut *fm, -1.0)] {
        let mass = sign * 0.25 * rho * c * (m + sign) * (m + sign);
        let ps = 0.5 * (1.0 + sign * GAMMA * m) * p;
        out[0] = mass;
        for k in 0..d {
            out[1 + k] = mass * u[1 + k] / rho + n[k] * ps;
        }
        out[d + 1] = mass * h;
    }
    Ok(())
}

/// Owned-vector form of [`steger_warming_into`].
pub fn steger_warming(u: &[f64], n: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut fp = vec![0.0; u.len()];
    let mut fm = vec![0.0; u.len()];
    steger_warming_into(u, n, &mut fp, &mut fm)?;
    Ok((fp, fm))
}

/// Owned-vector form of [`van_leer_haenel_into`].
pub fn van_leer_haenel(u: &[f64], n: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut fp = vec![0.0; u.len()];
    let mut fm = vec![0.0; u.len()];
    van_leer_haenel_into(u, n, &mut fp, &mut fm)?;
    Ok((fp, fm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::euler::EulerState;

    fn euler_flux(u: &[f64], n: &[f64]) -> Vec<f64> {
        let mut f = vec![0.0; u.len()];
        euler::flux(u, n, &mut f);
        f
    }

    #[test]
    fn advection_lax_friedrichs() {
        let s = advection_splitting(1.0).unwrap();
        let (fp, fm) = s.split_vec(&[2.0], &[1.0]).unwrap();
        assert_eq!((fp[0], fm[0]), (2.0, 0.0));
        let (fp, fm) = s.split_vec(&[0.0], &[1.0]).unwrap();
        assert_eq!((fp[0], fm[0]), (0.0, 0.0));
        assert!(advection_splitting(0.0).is_err());
    }

    #[test]
    fn lax_friedrichs_euler_consistency() {
        let s = FluxSplitting::new(
            SplittingKind::LaxFriedrichs,
            Equation::Euler { dim: 1 },
            Some(5.0),
        )
        .unwrap();
        let u = [1.0, 0.1, 10.0];
        let (fp, fm) = s.split_vec(&u, &[1.0]).unwrap();
        let f = euler_flux(&u, &[1.0]);
        for i in 0..3 {
            assert!((fp[i] + fm[i] - f[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn steger_warming_supersonic_and_rest() {
        let u = EulerState::from_primitive(1.0, &[3.0], 1.0).to_conserved();
        let (fp, fm) = steger_warming(&u, &[1.0]).unwrap();
        let f = euler_flux(&u, &[1.0]);
        for i in 0..3 {
            assert!(fm[i].abs() < 1e-14);
            assert!((fp[i] - f[i]).abs() < 1e-13);
        }
        let rest = EulerState::from_primitive(1.0, &[0.0], 1.0).to_conserved();
        let (fp, fm) = steger_warming(&rest, &[1.0]).unwrap();
        let sum: Vec<f64> = fp.iter().zip(&fm).map(|(a, b)| a + b).collect();
        assert!(sum[0].abs() < 1e-15 && (sum[1] - 1.0).abs() < 1e-14 && sum[2].abs() < 1e-15);
    }

    #[test]
    fn van_leer_haenel_cases() {
        let rest = EulerState::from_primitive(1.0, &[0.0], 1.0).to_conserved();
        let (fp, fm) = van_leer_haenel(&rest, &[1.0]).unwrap();
        let c = GAMMA.sqrt();
        assert!((fp[0] - c / 4.0).abs() < 1e-15);
        assert!((fm[0] + c / 4.0).abs() < 1e-15);

        let u = EulerState::from_primitive(1.0, &[0.5], 2.0).to_conserved();
        let (fp, fm) = van_leer_haenel(&u, &[1.0]).unwrap();
        let f = euler_flux(&u, &[1.0]);
        for i in 0..3 {
            assert!((fp[i] + fm[i] - f[i]).abs() < 1e-13);
        }

        let fast = EulerState::from_primitive(1.0, &[-4.0], 1.0).to_conserved();
        let (fp, _) = van_leer_haenel(&fast, &[1.0]).unwrap();
        assert!(fp.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn inadmissible_states_rejected() {
        let bad = [1.0, 0.0, -1.0];
        assert!(matches!(
            steger_warming(&bad, &[1.0]),
            Err(Error::Inadmissible(_))
        ));
        assert!(matches!(
            van_leer_haenel(&bad, &[1.0]),
            Err(Error::Inadmissible(_))
        ));
    }

    #[test]
    fn burgers() {
        let s = burgers_full_upwind();
        let (fp, fm) = s.split_vec(&[2.0], &[1.0]).unwrap();
        assert_eq!((fp[0], fm[0]), (2.0, 0.0));
    }

    #[test]
    fn incompatible_combinations() {
        assert!(FluxSplitting::new(SplittingKind::StegerWarming, Equation::Burgers, None).is_err());
        assert!(
            FluxSplitting::new(SplittingKind::FullUpwind, Equation::Euler { dim: 2 }, None)
                .is_err()
        );
        assert!(FluxSplitting::new(SplittingKind::LaxFriedrichs, Equation::Burgers, None).is_err());
    }

    #[test]
    fn parse_names() {
        for k in [
            SplittingKind::LaxFriedrichs,
            SplittingKind::StegerWarming,
            SplittingKind::VanLeerHaenel,
            SplittingKind::FullUpwind,
        ] {
            assert_eq!(k.name().parse::<SplittingKind>().unwrap(), k);
        }
        assert!("roe".parse::<SplittingKind>().is_err());
    }

    #[test]
    fn van_leer_haenel_is_quadratic_in_metric() {
        let u = EulerState::from_primitive(1.0, &[0.1, -0.2], 4.0).to_conserved();
        let n = [0.13, -0.07];
        let at = |a: f64| van_leer_haenel(&u, &[a * n[0], a * n[1]]).unwrap().0;
        // Second differences of a quadratic are constant.
        let (f0, f1, f2, f3) = (at(0.5), at(1.0), at(1.5), at(2.0));
        for i in 0..4 {
            let d1 = f2[i] - 2.0 * f1[i] + f0[i];
            let d2 = f3[i] - 2.0 * f2[i] + f1[i];
            assert!((d1 - d2).abs() < 1e-13);
        }
    }
}
