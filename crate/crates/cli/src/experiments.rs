//! The experiment suite, one function per study.
//!
//! All functions take the dissipation parameter `lambda` of the experiment
//! tables. The operator pair damps its top DOP mode with eigenvalue
//! `2 lambda` of `S`.

use std::thread;

use serde::Serialize;
use usbp_core::analysis::{
    assemble_linear_operator, eigenvalues, eoc_table, jacobian_fd, l2_error_p, spectral_norm,
    ConvergenceRow, SpectrumReport,
};
use usbp_core::operators::{build_lgl_usbp, UsbpPair};
use usbp_core::physics::initial::{isentropic_vortex_exact, random_nonnegative};
use usbp_core::physics::{
    advection_splitting, burgers_full_upwind, manufactured_euler_exact, Equation, FluxSplitting,
    InitialCondition, SplittingKind, FREE_STREAM,
};
use usbp_core::semidisc::{
    build_warped_mesh, cartesian_mesh, Boundary, Coupling, Dg1d, Dg2d, Mesh1D, SemiDiscretization,
    SourceTerm,
};
use usbp_core::timeint::{integrate, DiagnosticSample, IntegratorConfig, Outcome, Scheme};
use usbp_core::{Result, SimulationAbort};

const EULER_1D: Equation = Equation::Euler { dim: 1 };
const EULER_2D: Equation = Equation::Euler { dim: 2 };

/// USBP pair on `n` LGL nodes for the experiment parameter `lambda`.
pub fn experiment_pair(n: usize, lambda: f64) -> Result<UsbpPair> {
    build_lgl_usbp(n, 2.0 * lambda)
}

/// Evaluate `f` on every item, optionally one thread per item.
pub fn sweep<I: Sync, T: Send>(items: &[I], parallel: bool, f: impl Fn(&I) -> T + Sync) -> Vec<T> {
    if !parallel || items.len() < 2 {
        return items.iter().map(f).collect();
    }
    thread::scope(|s| {
        let handles: Vec<_> = items.iter().map(|it| s.spawn(|| f(it))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    /// Richardson estimate of the temporal error on the finest mesh.
    pub temporal_error: f64,
}

impl ConvergenceStudy {
    pub fn finest(&self) -> &ConvergenceRow {
        self.rows.last().expect("convergence study without rows")
    }

    /// Whether the temporal error is below the spatial error on the finest mesh.
    pub fn time_resolved(&self) -> bool {
        self.temporal_error < self.finest().l2_error
    }
}

fn advection_sd(n: usize, lambda: f64, j: usize) -> Result<Dg1d> {
    Dg1d::new(
        Mesh1D::new(-1.0, 1.0, j)?,
        &experiment_pair(n, lambda)?,
        Equation::advection_1d(),
        Coupling::Upwind(advection_splitting(1.0)?),
        Boundary::Periodic,
    )
}

fn euler_sd(n: usize, lambda: f64, kind: SplittingKind, j: usize) -> Result<Dg1d> {
    Ok(Dg1d::new(
        Mesh1D::new(0.0, 2.0, j)?,
        &experiment_pair(n, lambda)?,
        EULER_1D,
        Coupling::Upwind(FluxSplitting::new(kind, EULER_1D, None)?),
        Boundary::Periodic,
    )?
    .with_source(SourceTerm::ManufacturedEuler))
}

fn finish(sd: &dyn SemiDiscretization, u0: &[f64], cfg: &IntegratorConfig) -> Result<Vec<f64>> {
    let res = integrate(sd, u0, cfg)?;
    match res.outcome {
        Outcome::Finished => Ok(res.state),
        Outcome::Crashed(a) => Err(usbp_core::Error::Aborted(a)),
    }
}

fn convergence_study(
    build: impl Fn(usize) -> Result<Dg1d> + Sync,
    exact: impl Fn(f64, &[f64]) -> Vec<f64> + Sync,
    vars: &[usize],
    js: &[usize],
    cfl: f64,
    t_end: f64,
    parallel: bool,
) -> Result<ConvergenceStudy> {
    let cfg = IntegratorConfig::new(Scheme::Rk4Classic, cfl, t_end);
    let runs = sweep(js, parallel, |&j| -> Result<(f64, Vec<f64>, Dg1d)> {
        let sd = build(j)?;
        let u0 = sd.project(&|x| exact(0.0, x));
        let u = finish(&sd, &u0, &cfg)?;
        let reference = sd.project(&|x| exact(t_end, x));
        Ok((l2_error_p(&sd, &u, &reference, vars)?, u, sd))
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let errors: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let (_, coarse, sd) = runs.last().expect("empty J list");
    let half = IntegratorConfig::new(Scheme::Rk4Classic, 0.5 * cfl, t_end);
    let fine = finish(sd, &sd.project(&|x| exact(0.0, x)), &half)?;
    let temporal_error = l2_error_p(sd, coarse, &fine, vars)? * 16.0 / 15.0;
    Ok(ConvergenceStudy {
        rows: eoc_table(js, &errors)?,
        temporal_error,
    })
}

/// Periodic advection of `sin(πx)` on `[-1, 1]` with Lax–Friedrichs
/// splitting, `λ_max = 1`.
pub fn convergence_advection(
    n: usize,
    lambda: f64,
    js: &[usize],
    cfl: f64,
    t_end: f64,
    parallel: bool,
) -> Result<ConvergenceStudy> {
    convergence_study(
        |j| advection_sd(n, lambda, j),
        |t, x| vec![(std::f64::consts::PI * (x[0] - t)).sin()],
        &[0],
        js,
        cfl,
        t_end,
        parallel,
    )
}

/// Manufactured Euler solution on the periodic interval `[0, 2]`.
pub fn convergence_euler(
    n: usize,
    lambda: f64,
    kind: SplittingKind,
    js: &[usize],
    cfl: f64,
    t_end: f64,
    parallel: bool,
) -> Result<ConvergenceStudy> {
    convergence_study(
        |j| euler_sd(n, lambda, kind, j),
        |t, x| manufactured_euler_exact(t, x[0]).to_conserved(),
        &[0, 1, 2],
        js,
        cfl,
        t_end,
        parallel,
    )
}

#[derive(Debug, Clone)]
pub struct SpectrumStudy {
    pub report: SpectrumReport,
    pub norm: f64,
}

/// Spectrum of the periodic advection operator on `j` elements.
pub fn spectrum(n: usize, lambda: f64, j: usize) -> Result<SpectrumStudy> {
    let a = assemble_linear_operator(&advection_sd(n, lambda, j)?)?;
    Ok(SpectrumStudy {
        report: eigenvalues(&a)?,
        norm: spectral_norm(&a),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub lambda: f64,
    #[serde(rename = "J")]
    pub j: usize,
    pub seed: u64,
    pub max_real_part: f64,
    pub norm: f64,
}

impl StabilityRow {
    /// `max Re λ / ‖A‖₂`.
    pub fn ratio(&self) -> f64 {
        self.max_real_part / self.norm
    }
}

const JACOBIAN_STEP: f64 = 1.0 / 1024.0;

/// Largest real part of the Jacobian spectrum of full-upwind Burgers at
/// `samples` random nonnegative states per element count.
pub fn local_stability(
    n: usize,
    lambda: f64,
    js: &[usize],
    seed: u64,
    samples: usize,
    parallel: bool,
) -> Result<Vec<StabilityRow>> {
    let cases: Vec<(usize, u64)> = js
        .iter()
        .flat_map(|&j| (0..samples as u64).map(move |s| (j, seed + s)))
        .collect();
    let pair = experiment_pair(n, lambda)?;
    sweep(&cases, parallel, |&(j, seed)| {
        let sd = Dg1d::new(
            Mesh1D::new(-1.0, 1.0, j)?,
            &pair,
            Equation::Burgers,
            Coupling::Upwind(burgers_full_upwind()),
            Boundary::Periodic,
        )?;
        let state = random_nonnegative(sd.len(), seed);
        let a = jacobian_fd(&sd, &state, JACOBIAN_STEP)?;
        Ok(StabilityRow {
            n,
            lambda,
            j,
            seed,
            max_real_part: eigenvalues(&a)?.max_real_part,
            norm: spectral_norm(&a),
        })
    })
    .into_iter()
    .collect()
}

fn euler_2d_coupling(kind: SplittingKind) -> Result<Coupling> {
    let lambda = (kind == SplittingKind::LaxFriedrichs).then(|| EULER_2D.max_speed(&FREE_STREAM));
    Ok(Coupling::Upwind(FluxSplitting::new(
        kind, EULER_2D, lambda,
    )?))
}

/// Maximum free-stream residual on the warped `side × side` mesh with
/// Dirichlet free-stream data.
pub fn free_stream(
    n: usize,
    lambda: f64,
    kind: SplittingKind,
    n_geo: usize,
    side: usize,
    amplitude: f64,
) -> Result<f64> {
    let pair = experiment_pair(n, lambda)?;
    let mesh = build_warped_mesh(side, side, n_geo, amplitude, &pair.base)?;
    let sd = Dg2d::new(
        mesh,
        &pair,
        EULER_2D,
        euler_2d_coupling(kind)?,
        Boundary::Dirichlet(FREE_STREAM.to_vec()),
    )?;
    let u = sd.project(&|_| FREE_STREAM.to_vec());
    let mut du = vec![0.0; u.len()];
    sd.rhs(&u, 0.0, &mut du)?;
    Ok(du.iter().fold(0.0, |m, v| m.max(v.abs())))
}

/// Result of a time-dependent two-dimensional run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub final_time: f64,
    pub steps: usize,
    pub crash: Option<SimulationAbort>,
    pub diagnostics: Vec<DiagnosticSample>,
    pub state: Vec<f64>,
}

impl RunSummary {
    pub fn finished(&self) -> bool {
        self.crash.is_none()
    }

    pub fn status(&self) -> &'static str {
        if self.finished() {
            "finished"
        } else {
            "crashed"
        }
    }
}

fn periodic_square(
    n: usize,
    lambda: f64,
    coupling: Coupling,
    side: usize,
    domain: (f64, f64),
) -> Result<Dg2d> {
    let pair = experiment_pair(n, lambda)?;
    let (lo, hi) = domain;
    let mesh = cartesian_mesh(side, side, [lo, lo], [hi, hi], &pair.base)?;
    Dg2d::new(mesh, &pair, EULER_2D, coupling, Boundary::Periodic)
}

fn run(sd: &dyn SemiDiscretization, u0: &[f64], cfg: &IntegratorConfig) -> Result<RunSummary> {
    let res = integrate(sd, u0, cfg)?;
    let crash = match res.outcome {
        Outcome::Finished => None,
        Outcome::Crashed(a) => Some(a),
    };
    Ok(RunSummary {
        final_time: res.time,
        steps: res.steps,
        crash,
        diagnostics: res.diagnostics,
        state: res.state,
    })
}

#[derive(Debug, Clone)]
pub struct VortexRun {
    pub scheme: String,
    pub summary: RunSummary,
    /// Density error in the `P` norm, when the run finished.
    pub density_error: Option<f64>,
    /// Richardson estimate of the temporal part of the density error.
    pub temporal_error: Option<f64>,
}

/// Isentropic vortex on the periodic square `[-5, 5]²` with
/// `side × side` elements, for the upwind splitting `kind` and the central
/// baseline. Each scheme is run again at half the CFL number for a
/// Richardson estimate of the temporal error.
pub fn isentropic_vortex(
    n: usize,
    lambda: f64,
    kind: SplittingKind,
    side: usize,
    cfl: f64,
    t_end: f64,
    parallel: bool,
) -> Result<Vec<VortexRun>> {
    let ic = InitialCondition::IsentropicVortex;
    let (lo, hi) = ic.domain();
    let cfg = IntegratorConfig::new(Scheme::Rk4Classic, cfl, t_end);
    let half = IntegratorConfig::new(Scheme::Rk4Classic, 0.5 * cfl, t_end);
    let schemes = [Some(kind), None];
    sweep(&schemes, parallel, |k| {
        let coupling = match k {
            Some(k) => euler_2d_coupling(*k)?,
            None => Coupling::CentralRusanov,
        };
        let sd = periodic_square(n, lambda, coupling, side, (lo, hi))?;
        let u0 = sd.project(&|x| ic.evaluate(x));
        let summary = run(&sd, &u0, &cfg)?;
        let (mut density_error, mut temporal_error) = (None, None);
        if summary.finished() {
            let exact =
                sd.project(&|x| isentropic_vortex_exact(t_end, x[0], x[1], lo, hi).to_conserved());
            density_error = Some(l2_error_p(&sd, &summary.state, &exact, &[0])?);
            let fine = run(&sd, &u0, &half)?;
            if fine.finished() {
                temporal_error =
                    Some(l2_error_p(&sd, &summary.state, &fine.state, &[0])? * 16.0 / 15.0);
            }
        }
        Ok(VortexRun {
            scheme: k.map_or("central".to_string(), |k| k.name().to_string()),
            summary,
            density_error,
            temporal_error,
        })
    })
    .into_iter()
    .collect()
}

/// Kelvin–Helmholtz shear layer on the periodic square `[-1, 1]²` with
/// `side × side` elements, integrated with SSP33 until `t_end` or the first
/// inadmissible state.
pub fn kelvin_helmholtz(
    n: usize,
    lambda: f64,
    kind: SplittingKind,
    side: usize,
    cfl: f64,
    t_end: f64,
) -> Result<RunSummary> {
    let ic = InitialCondition::KelvinHelmholtz;
    let sd = periodic_square(n, lambda, euler_2d_coupling(kind)?, side, ic.domain())?;
    let u0 = sd.project(&|x| ic.evaluate(x));
    let mut cfg = IntegratorConfig::new(Scheme::Ssp33, cfl, t_end);
    cfg.diagnostics_every = 10;
    run(&sd, &u0, &cfg)
}
