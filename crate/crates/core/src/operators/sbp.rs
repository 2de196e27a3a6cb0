//! Classical (central) summation-by-parts operators.

use nalgebra::{DMatrix, DVector};

use super::nodes::{equidistant_nodes, NodeSet};
use crate::error::{invalid, Error, Result};

/// A degree `degree` SBP operator `D = P^{-1}(Q + B/2)`.
#[derive(Debug, Clone)]
pub struct SbpOperator {
    pub nodes: NodeSet,
    pub p: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub d: DMatrix<f64>,
    pub degree: usize,
}

impl SbpOperator {
    pub fn len(&self) -> usize {
        self.d.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.d.nrows() == 0
    }

    /// `P^{-1} M`, via Cholesky for dense norms.
    pub fn solve_norm(&self, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if is_diagonal(&self.p) {
            let mut out = m.clone();
            for i in 0..out.nrows() {
                let pi = self.p[(i, i)];
                out.row_mut(i).iter_mut().for_each(|v| *v /= pi);
            }
            return Ok(out);
        }
        let chol = self
            .p
            .clone()
            .cholesky()
            .ok_or_else(|| invalid("norm matrix is not positive definite"))?;
        Ok(chol.solve(m))
    }

    /// Whether `P` is diagonal.
    pub fn is_diagonal_norm(&self) -> bool {
        is_diagonal(&self.p)
    }
}

pub(crate) fn is_diagonal(m: &DMatrix<f64>) -> bool {
    (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)] == 0.0))
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Barycentric weights of the Lagrange basis on `nodes`.
fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    (0..n)
        .map(|i| {
            let prod: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| nodes[i] - nodes[j])
                .product();
            1.0 / prod
        })
        .collect()
}

/// Values of all Lagrange basis polynomials of `nodes` at `x`.
pub fn lagrange_basis_at(nodes: &[f64], x: f64) -> Vec<f64> {
    if let Some(k) = nodes.iter().position(|&xn| xn == x) {
        let mut v = vec![0.0; nodes.len()];
        v[k] = 1.0;
        return v;
    }
    let w = barycentric_weights(nodes);
    let terms: Vec<f64> = nodes
        .iter()
        .zip(&w)
        .map(|(&xn, &wn)| wn / (x - xn))
        .collect();
    let denom: f64 = terms.iter().sum();
    terms.into_iter().map(|t| t / denom).collect()
}

/// Derivatives of all Lagrange basis polynomials of `nodes` at `x`.
pub fn lagrange_basis_derivative_at(nodes: &[f64], x: f64) -> Vec<f64> {
    let n = nodes.len();
    let w = barycentric_weights(nodes);
    (0..n)
        .map(|k| {
            // d/dx of w_k Π_{m≠k} (x - x_m), expanded by the product rule.
            let mut sum = 0.0;
            for skip in (0..n).filter(|&m| m != k) {
                let prod: f64 = (0..n)
                    .filter(|&m| m != k && m != skip)
                    .map(|m| x - nodes[m])
                    .product();
                sum += prod;
            }
            w[k] * sum
        })
        .collect()
}

/// Collocation derivative matrix of the Lagrange interpolant on `nodes`.
pub fn lagrange_derivative_matrix(nodes: &[f64]) -> DMatrix<f64> {
    let n = nodes.len();
    let w = barycentric_weights(nodes);
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = (w[j] / w[i]) / (nodes[i] - nodes[j]);
                d[(i, j)] = v;
                diag -= v;
            }
        }
        d[(i, i)] = diag;
    }
    d
}

/// Boundary matrix `B = t_R t_R^T - t_L t_L^T` where `t_L`, `t_R` hold the
/// Lagrange basis values at the interval ends.
pub fn boundary_matrix(nodes: &NodeSet) -> DMatrix<f64> {
    let (t_left, t_right) = boundary_interpolation(nodes);
    let tl = DVector::from_vec(t_left);
    let tr = DVector::from_vec(t_right);
    &tr * tr.transpose() - &tl * tl.transpose()
}

/// Lagrange basis values at the left and right end of the interval.
pub fn boundary_interpolation(nodes: &NodeSet) -> (Vec<f64>, Vec<f64>) {
    (
        lagrange_basis_at(&nodes.nodes, nodes.x_left),
        lagrange_basis_at(&nodes.nodes, nodes.x_right),
    )
}

const SBP_RESIDUAL_TOL: f64 = 1e-10;

/// Diagonal-norm SBP operator from the Lagrange collocation derivative.
///
/// The node set must carry quadrature weights exact for the products
/// appearing in the SBP identity (LGL: degree 2N-3, Gauss: 2N-1). The
/// resulting operator has degree N-1.
pub fn lagrange_sbp(nodes: &NodeSet) -> Result<SbpOperator> {
    let weights = nodes
        .weights
        .as_ref()
        .ok_or_else(|| invalid("lagrange_sbp needs quadrature weights"))?;
    let n = nodes.len();
    if n < 2 {
        return Err(invalid("lagrange_sbp needs at least two nodes"));
    }
    let d = lagrange_derivative_matrix(&nodes.nodes);
    let p = DMatrix::from_diagonal(&DVector::from_vec(weights.clone()));
    let b = boundary_matrix(nodes);
    let q = &p * &d - &b * 0.5;
    let residual = max_abs(&(&q + q.transpose()));
    if residual > SBP_RESIDUAL_TOL {
        return Err(Error::ConstructionFailure(format!(
            "Q + Q^T residual {residual:e} exceeds {SBP_RESIDUAL_TOL:e}; weights not exact enough"
        )));
    }
    Ok(SbpOperator {
        nodes: nodes.clone(),
        p,
        q,
        b,
        d,
        degree: n - 1,
    })
}

/// Degree-three dense-norm SBP operator on four equidistant points.
///
/// The printed operator of this family has unit grid spacing, so the nodes
/// are 0, 1, 2, 3. `P` and `D` are stored exactly; `Q = P D - B/2`.
pub fn dense_norm_sbp_4pt() -> SbpOperator {
    let nodes = equidistant_nodes(4, 0.0, 3.0).expect("valid interval");
    #[rustfmt::skip]
    let p = DMatrix::from_row_slice(4, 4, &[
        2.0, 1.0, 0.0, 0.0,
        1.0, 10.0, -2.0, 0.0,
        0.0, -2.0, 10.0, 1.0,
        0.0, 0.0, 1.0, 2.0,
    ]) / 8.0;
    #[rustfmt::skip]
    let d = DMatrix::from_row_slice(4, 4, &[
        -11.0, 18.0, -9.0, 2.0,
        -2.0, -3.0, 6.0, -1.0,
        1.0, -6.0, 3.0, 2.0,
        -2.0, 9.0, -18.0, 11.0,
    ]) / 6.0;
    let b = boundary_matrix(&nodes);
    let q = &p * &d - &b * 0.5;
    SbpOperator {
        nodes,
        p,
        q,
        b,
        d,
        degree: 3,
    }
}
