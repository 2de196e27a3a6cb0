//! Fixed-step explicit Runge–Kutta integration with CFL step selection.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result, SimulationAbort};
use crate::physics::euler;
use crate::physics::Equation;
use crate::semidisc::{gather, SemiDiscretization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Classical four-stage, fourth-order method.
    Rk4Classic,
    /// Three-stage, third-order strong-stability-preserving method.
    Ssp33,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    pub cfl: f64,
    pub t_end: f64,
    pub max_steps: usize,
    /// Stop and report instead of failing when a state becomes inadmissible.
    pub abort_on_inadmissible: bool,
    /// Record diagnostics every this many steps (the final state is always recorded).
    pub diagnostics_every: usize,
}

impl IntegratorConfig {
    pub fn new(scheme: Scheme, cfl: f64, t_end: f64) -> Self {
        Self {
            scheme,
            cfl,
            t_end,
            max_steps: 10_000_000,
            abort_on_inadmissible: true,
            diagnostics_every: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 2.0) {
            return Err(invalid(format!("cfl must lie in (0, 2], got {}", self.cfl)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(invalid(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if self.max_steps == 0 || self.diagnostics_every == 0 {
            return Err(invalid("max_steps and diagnostics_every must be positive"));
        }
        Ok(())
    }
}

/// One row of the diagnostic time series. Euler-only quantities are `None`
/// for scalar equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticSample {
    pub t: f64,
    pub dt: f64,
    pub kinetic_energy: Option<f64>,
    pub min_density: Option<f64>,
    pub min_pressure: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Outcome {
    Finished,
    /// The state became inadmissible after `time`, the last admissible time.
    Crashed(SimulationAbort),
}

#[derive(Debug, Clone)]
pub struct IntegrationResult {
    pub state: Vec<f64>,
    pub time: f64,
    pub steps: usize,
    pub diagnostics: Vec<DiagnosticSample>,
    pub outcome: Outcome,
}

impl IntegrationResult {
    pub fn crashed(&self) -> bool {
        matches!(self.outcome, Outcome::Crashed(_))
    }
}

/// Reusable stage storage.
#[derive(Debug, Default)]
pub struct Workspace {
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

impl Workspace {
    fn resize(&mut self, n: usize) {
        for k in &mut self.k {
            k.resize(n, 0.0);
        }
        self.tmp.resize(n, 0.0);
    }
}

/// Advance `u` by one step of size `dt` for `du/dt = f(u, t)`.
pub fn step<F>(
    scheme: Scheme,
    f: &mut F,
    u: &mut [f64],
    t: f64,
    dt: f64,
    ws: &mut Workspace,
) -> Result<()>
where
    F: FnMut(&[f64], f64, &mut [f64]) -> Result<()>,
{
    let n = u.len();
    ws.resize(n);
    let Workspace { k, tmp } = ws;
    match scheme {
        Scheme::Rk4Classic => {
            f(u, t, &mut k[0])?;
            for i in 0..n {
                tmp[i] = u[i] + 0.5 * dt * k[0][i];
            }
            f(tmp, t + 0.5 * dt, &mut k[1])?;
            for i in 0..n {
                tmp[i] = u[i] + 0.5 * dt * k[1][i];
            }
            f(tmp, t + 0.5 * dt, &mut k[2])?;
            for i in 0..n {
                tmp[i] = u[i] + dt * k[2][i];
            }
            f(tmp, t + dt, &mut k[3])?;
            for i in 0..n {
                u[i] += dt / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
            }
        }
        Scheme::Ssp33 => {
            f(u, t, &mut k[0])?;
            for i in 0..n {
                tmp[i] = u[i] + dt * k[0][i];
            }
            f(tmp, t + dt, &mut k[1])?;
            for i in 0..n {
                tmp[i] = 0.75 * u[i] + 0.25 * (tmp[i] + dt * k[1][i]);
            }
            f(tmp, t + 0.5 * dt, &mut k[2])?;
            for i in 0..n {
                u[i] = u[i] / 3.0 + 2.0 / 3.0 * (tmp[i] + dt * k[2][i]);
            }
        }
    }
    Ok(())
}

/// Integrate `du/dt = f(u, t)` from 0 to `t_end` with constant step `dt`
/// (the last step is shortened).
pub fn integrate_fixed<F>(
    scheme: Scheme,
    mut f: F,
    u0: &[f64],
    t_end: f64,
    dt: f64,
) -> Result<Vec<f64>>
where
    F: FnMut(&[f64], f64, &mut [f64]) -> Result<()>,
{
    if !(dt > 0.0 && t_end > 0.0) {
        return Err(invalid("dt and t_end must be positive"));
    }
    let mut u = u0.to_vec();
    let mut ws = Workspace::default();
    let mut clock = Clock::default();
    while clock.t < t_end {
        let rest = clock.remaining(t_end);
        let h = dt.min(rest);
        step(scheme, &mut f, &mut u, clock.t, h, &mut ws)?;
        if rest <= dt {
            clock.finish(t_end);
        } else {
            clock.advance(h);
        }
    }
    Ok(u)
}

/// Compensated sum of the step sizes, so that the final step lands on
/// `t_end` without accumulated rounding in the elapsed time.
#[derive(Debug, Default, Clone, Copy)]
struct Clock {
    t: f64,
    carry: f64,
}

impl Clock {
    fn advance(&mut self, dt: f64) {
        let sum = self.t + dt;
        self.carry += if self.t.abs() >= dt.abs() {
            (self.t - sum) + dt
        } else {
            (dt - sum) + self.t
        };
        self.t = sum;
    }

    fn remaining(&self, t_end: f64) -> f64 {
        (t_end - self.t) - self.carry
    }

    fn finish(&mut self, t_end: f64) {
        self.t = t_end;
        self.carry = 0.0;
    }
}

/// Stable step `cfl · h_min / ((2N - 1) λ_max)`.
pub fn cfl_step(sd: &dyn SemiDiscretization, u: &[f64], cfl: f64) -> f64 {
    let lam = sd.max_speed(u);
    let n = sd.nodes_per_direction() as f64;
    cfl * sd.h_min() / ((2.0 * n - 1.0) * lam)
}

/// Integrate a semi-discretization from `u0` at `t = 0` to `config.t_end`.
pub fn integrate(
    sd: &dyn SemiDiscretization,
    u0: &[f64],
    config: &IntegratorConfig,
) -> Result<IntegrationResult> {
    config.validate()?;
    if u0.len() != sd.len() {
        return Err(Error::ShapeMismatch(format!(
            "initial state length {}, expected {}",
            u0.len(),
            sd.len()
        )));
    }
    let mut u = u0.to_vec();
    let mut scratch = vec![0.0; u.len()];
    sd.rhs(&u, 0.0, &mut scratch)?;
    let mut ws = Workspace::default();
    let mut clock = Clock::default();
    let mut steps = 0;
    let mut diagnostics = vec![sample(sd, &u, 0.0, 0.0)];
    let mut rhs = |x: &[f64], tt: f64, out: &mut [f64]| sd.rhs(x, tt, out);
    while clock.t < config.t_end {
        let t = clock.t;
        if steps >= config.max_steps {
            return Err(Error::NonConvergence(format!(
                "reached {} steps at t = {t} before t_end = {}",
                config.max_steps, config.t_end
            )));
        }
        let mut dt = cfl_step(sd, &u, config.cfl);
        let rest = clock.remaining(config.t_end);
        if !(dt > 0.0) || !dt.is_finite() {
            dt = rest;
        }
        let last = dt >= rest;
        if last {
            dt = rest;
        }
        scratch.copy_from_slice(&u);
        let result = step(config.scheme, &mut rhs, &mut u, t, dt, &mut ws)
            .and_then(|_| check_state(sd, &u, t + dt));
        match result {
            Ok(()) => {}
            Err(Error::Aborted(mut abort)) if config.abort_on_inadmissible => {
                abort.time = t;
                u.copy_from_slice(&scratch);
                diagnostics.push(sample(sd, &u, t, dt));
                return Ok(IntegrationResult {
                    state: u,
                    time: t,
                    steps,
                    diagnostics,
                    outcome: Outcome::Crashed(abort),
                });
            }
            Err(e) => return Err(e),
        }
        if last {
            clock.finish(config.t_end);
        } else {
            clock.advance(dt);
        }
        let t = clock.t;
        steps += 1;
        if steps % config.diagnostics_every == 0 || last {
            diagnostics.push(sample(sd, &u, t, dt));
        }
    }
    Ok(IntegrationResult {
        state: u,
        time: clock.t,
        steps,
        diagnostics,
        outcome: Outcome::Finished,
    })
}

fn check_state(sd: &dyn SemiDiscretization, u: &[f64], t: f64) -> Result<()> {
    let (nv, np) = (sd.nvars(), sd.npts());
    let mut s = vec![0.0; nv];
    for e in 0..sd.elements() {
        for i in 0..np {
            gather(u, nv, np, e, i, &mut s);
            crate::semidisc::check_node(sd.equation(), &s, t, e, i)?;
        }
    }
    Ok(())
}

fn sample(sd: &dyn SemiDiscretization, u: &[f64], t: f64, dt: f64) -> DiagnosticSample {
    let (min_density, min_pressure) = match sd.equation() {
        Equation::Euler { .. } => {
            let (nv, np) = (sd.nvars(), sd.npts());
            let mut s = vec![0.0; nv];
            let (mut rho, mut p) = (f64::INFINITY, f64::INFINITY);
            for e in 0..sd.elements() {
                for i in 0..np {
                    gather(u, nv, np, e, i, &mut s);
                    rho = rho.min(s[0]);
                    p = p.min(euler::pressure(&s));
                }
            }
            (Some(rho), Some(p))
        }
        _ => (None, None),
    };
    DiagnosticSample {
        t,
        dt,
        kinetic_energy: kinetic_energy(sd, u).ok(),
        min_density,
        min_pressure,
    }
}

/// Norm-matrix quadrature of `ρ|v|²/2`.
pub fn kinetic_energy(sd: &dyn SemiDiscretization, u: &[f64]) -> Result<f64> {
    if !matches!(sd.equation(), Equation::Euler { .. }) {
        return Err(invalid("kinetic energy needs the Euler equations"));
    }
    let (nv, np) = (sd.nvars(), sd.npts());
    let mut s = vec![0.0; nv];
    let mut density = Vec::with_capacity(sd.elements() * np);
    for e in 0..sd.elements() {
        for i in 0..np {
            gather(u, nv, np, e, i, &mut s);
            density.push(euler::kinetic_energy_density(&s));
        }
    }
    Ok(sd.integrate(&density))
}

/// `-dE/dt` by central differences (one-sided at the ends).
pub fn dissipation_rate(times: &[f64], energy: &[f64]) -> Vec<f64> {
    let n = times.len().min(energy.len());
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|i| {
            let (a, b) = match i {
                0 => (0, 1),
                _ if i == n - 1 => (n - 2, n - 1),
                _ => (i - 1, i + 1),
            };
            -(energy[b] - energy[a]) / (times[b] - times[a])
        })
        .collect()
}

/// Write diagnostics as CSV with columns `t, dt, E_kin, min_rho, min_p`.
pub fn write_diagnostics<W: Write>(samples: &[DiagnosticSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = crate::semidisc::snapshot::csv_err;
    w.write_record(["t", "dt", "E_kin", "min_rho", "min_p"])
        .map_err(err)?;
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:e}"));
    for s in samples {
        w.write_record([
            format!("{:e}", s.t),
            format!("{:e}", s.dt),
            opt(s.kinetic_energy),
            opt(s.min_density),
            opt(s.min_pressure),
        ])
        .map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::build_lgl_usbp;
    use crate::physics::{
        advection_splitting, EulerState, FluxSplitting, SplittingKind, FREE_STREAM,
    };
    use crate::semidisc::{cartesian_mesh, Boundary, Coupling, Dg1d, Dg2d, Mesh1D};

    fn decay(u: &[f64], _t: f64, du: &mut [f64]) -> Result<()> {
        du[0] = -u[0];
        Ok(())
    }

    #[test]
    fn rk4_exponential_decay() {
        let u = integrate_fixed(Scheme::Rk4Classic, decay, &[1.0], 1.0, 0.01).unwrap();
        assert!((u[0] - (-1.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn clock_compensates_rounding() {
        let mut naive = 0.0;
        let mut clock = Clock::default();
        for _ in 0..10_000 {
            naive += 0.1;
            clock.advance(0.1);
        }
        assert!((naive - 1000.0f64).abs() > 1e-10);
        assert!(clock.remaining(1000.0).abs() < 1.2e-13);

        let mut calls = 0;
        let count = |_: &[f64], _: f64, du: &mut [f64]| {
            calls += 1;
            du[0] = 1.0;
            Ok(())
        };
        let u = integrate_fixed(Scheme::Rk4Classic, count, &[0.0], 100.0, 0.1).unwrap();
        assert_eq!(calls, 4 * 1000);
        assert!((u[0] - 100.0).abs() < 1e-11);
    }

    #[test]
    fn rk4_order_four() {
        let err = |dt: f64| {
            let u = integrate_fixed(Scheme::Rk4Classic, decay, &[1.0], 1.0, dt).unwrap();
            (u[0] - (-1.0f64).exp()).abs()
        };
        let (e1, e2, e3) = (err(0.1), err(0.05), err(0.025));
        for (a, b) in [(e1, e2), (e2, e3)] {
            let eoc = (a / b).log2();
            assert!((eoc - 4.0).abs() < 0.1, "{eoc}");
        }
    }

    #[test]
    fn ssp33_order_three() {
        let err = |dt: f64| {
            let u = integrate_fixed(Scheme::Ssp33, decay, &[1.0], 1.0, dt).unwrap();
            (u[0] - (-1.0f64).exp()).abs()
        };
        let eoc = (err(0.05) / err(0.025)).log2();
        assert!((eoc - 3.0).abs() < 0.1, "{eoc}");
    }

    #[test]
    fn time_dependent_rhs_uses_stage_times() {
        let f = |_: &[f64], t: f64, du: &mut [f64]| {
            du[0] = 3.0 * t * t;
            Ok(())
        };
        let u = integrate_fixed(Scheme::Rk4Classic, f, &[0.0], 1.0, 0.3).unwrap();
        assert!((u[0] - 1.0).abs() < 1e-14);
    }

    fn advection(j: usize) -> Dg1d {
        Dg1d::new(
            Mesh1D::new(-1.0, 1.0, j).unwrap(),
            &build_lgl_usbp(4, -1.0).unwrap(),
            Equation::advection_1d(),
            Coupling::Upwind(advection_splitting(1.0).unwrap()),
            Boundary::Periodic,
        )
        .unwrap()
    }

    #[test]
    fn advection_period_and_determinism() {
        let sd = advection(8);
        let u0 = sd.project(&|x| vec![(std::f64::consts::PI * x[0]).sin()]);
        let cfg = IntegratorConfig::new(Scheme::Rk4Classic, 0.5, 2.0);
        let a = integrate(&sd, &u0, &cfg).unwrap();
        let b = integrate(&sd, &u0, &cfg).unwrap();
        assert_eq!(a.state, b.state);
        assert_eq!(a.time, 2.0);
        assert!(!a.crashed());
        let err = a
            .state
            .iter()
            .zip(&u0)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-2, "{err}");
        // dt = cfl h / ((2N - 1) λ) = 0.5 · 0.25 / 7.
        assert!((a.diagnostics[1].dt - 0.125 / 7.0).abs() < 1e-15);
        assert_eq!(a.diagnostics.len(), a.steps + 1);
    }

    #[test]
    fn config_validation() {
        let mut cfg = IntegratorConfig::new(Scheme::Ssp33, 2.5, 1.0);
        assert!(cfg.validate().is_err());
        cfg.cfl = 1.0;
        cfg.t_end = -1.0;
        assert!(cfg.validate().is_err());
        cfg.t_end = 1.0;
        cfg.max_steps = 3;
        let sd = advection(4);
        let u0 = vec![0.0; sd.len()];
        assert!(matches!(
            integrate(&sd, &u0, &cfg),
            Err(Error::NonConvergence(_))
        ));
    }

    fn euler_2d() -> Dg2d {
        let pair = build_lgl_usbp(4, -1.0).unwrap();
        let mesh = cartesian_mesh(2, 2, [0.0, 0.0], [1.0, 1.0], &pair.base).unwrap();
        let eq = Equation::Euler { dim: 2 };
        let split = FluxSplitting::new(SplittingKind::StegerWarming, eq.clone(), None).unwrap();
        Dg2d::new(mesh, &pair, eq, Coupling::Upwind(split), Boundary::Periodic).unwrap()
    }

    #[test]
    fn free_stream_kinetic_energy_is_exact() {
        let sd = euler_2d();
        let u = sd.project(&|_| FREE_STREAM.to_vec());
        let ke = kinetic_energy(&sd, &u).unwrap();
        assert!((ke - 0.5 * (0.01 + 0.04)).abs() < 1e-15);
        let rest =
            sd.project(&|_| EulerState::from_primitive(1.0, &[0.0, 0.0], 1.0).to_conserved());
        assert_eq!(kinetic_energy(&sd, &rest).unwrap(), 0.0);
        assert!(kinetic_energy(&advection(2), &[0.0; 8]).is_err());
    }

    #[test]
    fn crash_is_reported_with_location() {
        let sd = euler_2d();
        // A strong pressure jump with nearly vacuum density crashes quickly.
        let u0 = sd.project(&|x| {
            let (rho, p) = if x[0] < 0.5 {
                (1.0, 100.0)
            } else {
                (1e-3, 1e-3)
            };
            EulerState::from_primitive(rho, &[0.0, 0.0], p).to_conserved()
        });
        let cfg = IntegratorConfig::new(Scheme::Ssp33, 1.0, 1.0);
        let res = integrate(&sd, &u0, &cfg).unwrap();
        match res.outcome {
            Outcome::Crashed(a) => {
                assert!(a.time < 1.0);
                assert_eq!(a.time, res.time);
                assert!(a.element < 4 && a.node < 16);
            }
            Outcome::Finished => panic!("expected a crash"),
        }
        let strict = IntegratorConfig {
            abort_on_inadmissible: false,
            ..cfg
        };
        assert!(matches!(
            integrate(&sd, &u0, &strict),
            Err(Error::Aborted(_))
        ));
    }

    #[test]
    fn dissipation_rate_of_linear_decay() {
        let t = [0.0, 1.0, 2.0, 3.0];
        let e = [6.0, 4.0, 2.0, 0.0];
        assert_eq!(dissipation_rate(&t, &e), vec![2.0; 4]);
    }

    #[test]
    fn diagnostics_csv() {
        let samples = [DiagnosticSample {
            t: 0.5,
            dt: 0.1,
            kinetic_energy: Some(2.0),
            min_density: None,
            min_pressure: None,
        }];
        let mut buf = Vec::new();
        write_diagnostics(&samples, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "t,dt,E_kin,min_rho,min_p\n5e-1,1e-1,2e0,,\n");
    }
}
