//! Discrete orthogonal polynomial (DOP) bases.

use nalgebra::DMatrix;

use super::nodes::NodeSet;
use super::sbp::max_abs;
use crate::error::{invalid, Error, Result};

/// Orthogonal Vandermonde matrix of a DOP basis: column `k` holds the nodal
/// values of the degree-`k` polynomial (zero-based), orthonormal in the
/// unweighted Euclidean inner product.
#[derive(Debug, Clone)]
pub struct DopBasis {
    pub nodes: NodeSet,
    pub v: DMatrix<f64>,
}

const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Modified Gram–Schmidt on the monomial Vandermonde (monomials taken on the
/// interval mapped to [-1, 1]) with one re-orthogonalization sweep.
///
/// Each column is normalized so that its value at the last node is
/// nonnegative.
pub fn dop_basis(nodes: &NodeSet) -> Result<DopBasis> {
    let x = &nodes.nodes;
    let n = x.len();
    if n == 0 {
        return Err(invalid("empty node set"));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if x[i] == x[j] {
                return Err(invalid(format!("duplicate node {}", x[i])));
            }
        }
    }
    let t: Vec<f64> = x.iter().map(|&xi| nodes.to_unit(xi)).collect();
    let mut v = DMatrix::from_fn(n, n, |i, k| t[i].powi(k as i32));

    for k in 0..n {
        for _pass in 0..2 {
            for j in 0..k {
                let proj = v.column(j).dot(&v.column(k));
                let qj = v.column(j).clone_owned();
                v.column_mut(k).axpy(-proj, &qj, 1.0);
            }
        }
        let norm = v.column(k).norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::ConstructionFailure(format!(
                "Gram-Schmidt broke down at column {k}"
            )));
        }
        v.column_mut(k).scale_mut(1.0 / norm);
        // Sign convention: last nonzero entry (scanning from the end) >= 0.
        let pivot = v
            .column(k)
            .iter()
            .rev()
            .copied()
            .find(|e| e.abs() > 1e-12)
            .unwrap_or(0.0);
        if pivot < 0.0 {
            v.column_mut(k).neg_mut();
        }
    }

    let defect = max_abs(&(v.transpose() * &v - DMatrix::identity(n, n)));
    if defect > ORTHOGONALITY_TOL {
        return Err(Error::ConstructionFailure(format!(
            "loss of orthogonality {defect:e}"
        )));
    }
    Ok(DopBasis {
        nodes: nodes.clone(),
        v,
    })
}

impl DopBasis {
    pub fn len(&self) -> usize {
        self.v.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.v.ncols() == 0
    }
}
