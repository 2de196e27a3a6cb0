//! Upwind SBP operator pairs `D± = D ± P⁻¹S/2`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use super::sbp::{max_abs, SbpOperator};
use crate::error::{invalid, Result};

/// A degree `degree` USBP pair sharing `P` and `B` with its central base operator.
#[derive(Debug, Clone)]
pub struct UsbpPair {
    pub base: SbpOperator,
    pub s: DMatrix<f64>,
    pub d_plus: DMatrix<f64>,
    pub d_minus: DMatrix<f64>,
    pub q_plus: DMatrix<f64>,
    pub q_minus: DMatrix<f64>,
    pub degree: usize,
}

impl UsbpPair {
    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn p(&self) -> &DMatrix<f64> {
        &self.base.p
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.base.b
    }

    pub fn d(&self) -> &DMatrix<f64> {
        &self.base.d
    }
}

pub(crate) const SYMMETRY_TOL: f64 = 1e-12;
pub(crate) const DEFINITENESS_TOL: f64 = 1e-12;
pub(crate) const EXACTNESS_TOL: f64 = 1e-11;
const EXACTNESS_DEGREE_TOL: f64 = 1e-9;

/// Nodal values of `t^k`, `t` the node mapped to [-1, 1], and of its
/// derivative with respect to the physical coordinate.
pub(crate) fn scaled_monomial(op: &SbpOperator, k: usize) -> (DVector<f64>, DVector<f64>) {
    let nodes = &op.nodes;
    let scale = 1.0 / nodes.half_width();
    let n = nodes.len();
    let t: Vec<f64> = nodes.nodes.iter().map(|&x| nodes.to_unit(x)).collect();
    let f = DVector::from_fn(n, |i, _| t[i].powi(k as i32));
    let df = DVector::from_fn(n, |i, _| {
        if k == 0 {
            0.0
        } else {
            k as f64 * t[i].powi(k as i32 - 1) * scale
        }
    });
    (f, df)
}

fn boundary_values(op: &SbpOperator, k: usize) -> (f64, f64) {
    let nodes = &op.nodes;
    let l = nodes.to_unit(nodes.x_left).powi(k as i32);
    let r = nodes.to_unit(nodes.x_right).powi(k as i32);
    (l, r)
}

fn max_eigenvalue_symmetric(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b))
}

fn annihilation_residual(op: &SbpOperator, s: &DMatrix<f64>, degree: usize) -> f64 {
    (0..=degree)
        .map(|k| (s * scaled_monomial(op, k).0).amax())
        .fold(0.0, f64::max)
}

/// Combine a central SBP operator with a dissipation matrix.
pub fn build_usbp(base: &SbpOperator, s: &DMatrix<f64>, degree: usize) -> Result<UsbpPair> {
    let n = base.len();
    if s.nrows() != n || s.ncols() != n {
        return Err(invalid(format!(
            "dissipation matrix is {}x{}, operator has {n} nodes",
            s.nrows(),
            s.ncols()
        )));
    }
    if degree > base.degree {
        return Err(invalid(format!(
            "target degree {degree} exceeds base operator degree {}",
            base.degree
        )));
    }
    let asym = max_abs(&(s - s.transpose()));
    if asym > SYMMETRY_TOL {
        return Err(invalid(format!(
            "dissipation matrix not symmetric ({asym:e})"
        )));
    }
    let top = max_eigenvalue_symmetric(s);
    if top > DEFINITENESS_TOL {
        return Err(invalid(format!(
            "dissipation matrix has positive eigenvalue {top:e}"
        )));
    }
    let leak = annihilation_residual(base, s, degree);
    if leak > EXACTNESS_TOL * max_abs(s).max(1.0) {
        return Err(invalid(format!(
            "dissipation matrix acts on degree-{degree} polynomials ({leak:e})"
        )));
    }
    let half_p_inv_s = base.solve_norm(s)? * 0.5;
    Ok(UsbpPair {
        base: base.clone(),
        s: s.clone(),
        d_plus: &base.d + &half_p_inv_s,
        d_minus: &base.d - &half_p_inv_s,
        q_plus: &base.q + s * 0.5,
        q_minus: &base.q - s * 0.5,
        degree,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<InvariantCheck>,
    /// Largest `k` such that both `D±` differentiate every monomial of
    /// degree `≤ k` to 1e-9.
    pub exactness_degree: usize,
    pub passed: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &InvariantCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn exactness_residual(op: &SbpOperator, d: &DMatrix<f64>, k: usize) -> f64 {
    let (f, df) = scaled_monomial(op, k);
    (d * f - df).amax()
}

/// Residual of every USBP invariant. Failures are reported, never raised.
pub fn verify_usbp(pair: &UsbpPair) -> VerificationReport {
    let base = &pair.base;
    let n = pair.len();
    let mut checks = Vec::new();
    let mut push = |name, residual: f64, tolerance| {
        checks.push(InvariantCheck {
            name,
            residual,
            tolerance,
            passed: residual <= tolerance,
        })
    };

    let p_inv_s = base.solve_norm(&pair.s);
    let composed = base.solve_norm(&(&base.q + &base.b * 0.5));
    push(
        "sbp_composition",
        composed.map_or(f64::INFINITY, |c| max_abs(&(c - &base.d))),
        1e-12,
    );
    push("q_skew", max_abs(&(&base.q + base.q.transpose())), 1e-12);
    let p_min = SymmetricEigen::new(base.p.clone())
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b));
    push("norm_positive_definite", (-p_min).max(0.0), 0.0);
    push(
        "norm_symmetric",
        max_abs(&(&base.p - base.p.transpose())),
        1e-12,
    );
    push(
        "s_symmetric",
        max_abs(&(&pair.s - pair.s.transpose())),
        SYMMETRY_TOL,
    );
    push(
        "s_negative_semidefinite",
        max_eigenvalue_symmetric(&pair.s).max(0.0),
        DEFINITENESS_TOL,
    );
    push(
        "s_annihilates_resolved",
        annihilation_residual(base, &pair.s, pair.degree),
        EXACTNESS_TOL,
    );
    push(
        "q_plus_q_minus_transpose",
        max_abs(&(&pair.q_plus + pair.q_minus.transpose())),
        1e-12,
    );
    push(
        "q_plus_symmetric_part",
        max_abs(&(&pair.q_plus + pair.q_plus.transpose() - &pair.s)),
        1e-12,
    );
    push(
        "d_difference",
        p_inv_s.as_ref().map_or(f64::INFINITY, |ps| {
            max_abs(&(&pair.d_plus - &pair.d_minus - ps))
        }),
        1e-12,
    );
    push(
        "d_average",
        max_abs(&((&pair.d_plus + &pair.d_minus) * 0.5 - &base.d)),
        1e-12,
    );
    let plus = (0..=pair.degree)
        .map(|k| exactness_residual(base, &pair.d_plus, k))
        .fold(0.0, f64::max);
    let minus = (0..=pair.degree)
        .map(|k| exactness_residual(base, &pair.d_minus, k))
        .fold(0.0, f64::max);
    push("d_plus_exactness", plus, EXACTNESS_TOL);
    push("d_minus_exactness", minus, EXACTNESS_TOL);
    let mut boundary = 0.0f64;
    for i in 0..=pair.degree {
        for j in 0..=pair.degree {
            let (fi, _) = scaled_monomial(base, i);
            let (gj, _) = scaled_monomial(base, j);
            let (fl, fr) = boundary_values(base, i);
            let (gl, gr) = boundary_values(base, j);
            let lhs = (fi.transpose() * &base.b * gj)[(0, 0)];
            boundary = boundary.max((lhs - (fr * gr - fl * gl)).abs());
        }
    }
    push("boundary_form", boundary, EXACTNESS_TOL);

    let mut exactness_degree = 0;
    for k in 1..=n {
        let ok = exactness_residual(base, &pair.d_plus, k) < EXACTNESS_DEGREE_TOL
            && exactness_residual(base, &pair.d_minus, k) < EXACTNESS_DEGREE_TOL;
        if !ok {
            break;
        }
        exactness_degree = k;
    }

    let passed = checks.iter().all(|c| c.passed);
    VerificationReport {
        checks,
        exactness_degree,
        passed,
    }
}
