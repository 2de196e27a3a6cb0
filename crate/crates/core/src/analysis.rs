//! Error norms, convergence rates, operator assembly and spectra.

use std::io::Write;

use nalgebra::{Complex, DMatrix, Schur};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::semidisc::snapshot::csv_err;
use crate::semidisc::SemiDiscretization;

/// `sqrt(Σ_v ‖u_v - w_v‖²_P)` over the variables `vars`.
pub fn l2_error_p(
    sd: &dyn SemiDiscretization,
    numerical: &[f64],
    exact: &[f64],
    vars: &[usize],
) -> Result<f64> {
    if numerical.len() != sd.len() || exact.len() != sd.len() {
        return Err(Error::ShapeMismatch(format!(
            "states of length {} and {}, expected {}",
            numerical.len(),
            exact.len(),
            sd.len()
        )));
    }
    if let Some(v) = vars.iter().find(|&&v| v >= sd.nvars()) {
        return Err(invalid(format!("variable {v} out of range")));
    }
    let diff: Vec<f64> = numerical.iter().zip(exact).map(|(a, b)| a - b).collect();
    Ok(vars
        .iter()
        .map(|&v| sd.inner(&diff, &diff, v))
        .sum::<f64>()
        .sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    #[serde(rename = "J")]
    pub j: usize,
    pub l2_error: f64,
    pub eoc: Option<f64>,
}

/// Experimental orders of convergence `log(e_prev/e)/log(J/J_prev)`.
pub fn eoc_table(js: &[usize], errors: &[f64]) -> Result<Vec<ConvergenceRow>> {
    if js.len() != errors.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} element counts, {} errors",
            js.len(),
            errors.len()
        )));
    }
    if js.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("element counts must increase strictly"));
    }
    if let Some(e) = errors.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(invalid(format!("errors must be positive, got {e}")));
    }
    Ok((0..js.len())
        .map(|k| ConvergenceRow {
            j: js[k],
            l2_error: errors[k],
            eoc: (k > 0)
                .then(|| (errors[k - 1] / errors[k]).ln() / (js[k] as f64 / js[k - 1] as f64).ln()),
        })
        .collect())
}

/// Matrix `A` with `rhs(u) = A u`, probed column by column.
pub fn assemble_linear_operator(sd: &dyn SemiDiscretization) -> Result<DMatrix<f64>> {
    if !sd.equation().is_linear() {
        return Err(invalid("operator assembly needs linear physics"));
    }
    let n = sd.len();
    let mut a = DMatrix::zeros(n, n);
    let mut probe = vec![0.0; n];
    let mut col = vec![0.0; n];
    for k in 0..n {
        probe[k] = 1.0;
        sd.rhs(&probe, 0.0, &mut col)?;
        a.column_mut(k).copy_from_slice(&col);
        probe[k] = 0.0;
    }
    Ok(a)
}

/// Central-difference Jacobian of the right-hand side at `state`.
pub fn jacobian_fd(sd: &dyn SemiDiscretization, state: &[f64], step: f64) -> Result<DMatrix<f64>> {
    if !(step > 0.0) {
        return Err(invalid("finite-difference step must be positive"));
    }
    let n = sd.len();
    if state.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "state length {}, expected {n}",
            state.len()
        )));
    }
    let mut a = DMatrix::zeros(n, n);
    let mut u = state.to_vec();
    let (mut fp, mut fm) = (vec![0.0; n], vec![0.0; n]);
    for k in 0..n {
        // Divide by the representable spacing, not by 2·step.
        let (hi, lo) = (state[k] + step, state[k] - step);
        u[k] = hi;
        sd.rhs(&u, 0.0, &mut fp)?;
        u[k] = lo;
        sd.rhs(&u, 0.0, &mut fm)?;
        u[k] = state[k];
        for i in 0..n {
            a[(i, k)] = (fp[i] - fm[i]) / (hi - lo);
        }
    }
    Ok(a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex<f64>>,
    pub max_real_part: f64,
    pub spectral_radius: f64,
}

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 100_000;

/// Full complex spectrum of a square matrix.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<SpectrumReport> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let schur = Schur::try_new(m.clone(), SCHUR_EPS, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::NonConvergence("Schur decomposition did not converge".into()))?;
    let eigenvalues: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    let max_real_part = eigenvalues
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let spectral_radius = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(SpectrumReport {
        eigenvalues,
        max_real_part,
        spectral_radius,
    })
}

/// Spectral norm `‖A‖₂`.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Write eigenvalues as CSV columns `re, im`.
pub fn write_spectrum<W: Write>(report: &SpectrumReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re", "im"]).map_err(csv_err)?;
    for z in &report.eigenvalues {
        w.write_record([format!("{:e}", z.re), format!("{:e}", z.im)])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Write a convergence table as CSV columns `J, l2_error, eoc`.
pub fn write_convergence<W: Write>(rows: &[ConvergenceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["J", "l2_error", "eoc"]).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.j.to_string(),
            format!("{:e}", r.l2_error),
            r.eoc.map_or(String::new(), |e| format!("{e:.4}")),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
