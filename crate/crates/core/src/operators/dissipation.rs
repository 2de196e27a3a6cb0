//! Dissipation matrices `S = V Λ V^T` built on a DOP basis.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::dop::DopBasis;
use crate::error::{invalid, Result};

/// Spectrum of a dissipation matrix for a degree `degree` operator.
///
/// The first `degree + 1` eigenvalues act on resolved modes and must vanish;
/// the remaining ones must be nonpositive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissipationSpec {
    pub eigenvalues: Vec<f64>,
    pub degree: usize,
}

impl DissipationSpec {
    pub fn new(eigenvalues: Vec<f64>, degree: usize) -> Result<Self> {
        let spec = Self {
            eigenvalues,
            degree,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Only the highest mode is damped: `λ_1 = … = λ_{N-1} = 0`, `λ_N = lambda`.
    /// The resulting operator has degree `N - 2` (or `N - 1` when
    /// `lambda == 0`).
    pub fn top_mode(n: usize, lambda: f64) -> Result<Self> {
        if n < 2 {
            return Err(invalid("need at least two nodes for a damped top mode"));
        }
        let mut eigenvalues = vec![0.0; n];
        eigenvalues[n - 1] = lambda;
        let degree = if lambda == 0.0 { n - 1 } else { n - 2 };
        Self::new(eigenvalues, degree)
    }

    /// All free modes damped with the same value.
    pub fn uniform(n: usize, degree: usize, lambda: f64) -> Result<Self> {
        let eigenvalues = (0..n)
            .map(|k| if k <= degree { 0.0 } else { lambda })
            .collect();
        Self::new(eigenvalues, degree)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.eigenvalues.len();
        if self.degree + 1 > n {
            return Err(invalid(format!(
                "degree {} needs at least {} nodes, have {n}",
                self.degree,
                self.degree + 1
            )));
        }
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            if !lam.is_finite() {
                return Err(invalid(format!("eigenvalue {} is not finite", k + 1)));
            }
            if lam > 0.0 {
                return Err(invalid(format!("eigenvalue {} = {lam} is positive", k + 1)));
            }
            if k <= self.degree && lam != 0.0 {
                return Err(invalid(format!(
                    "eigenvalue {} = {lam} acts on a resolved mode of degree {}",
                    k + 1,
                    self.degree
                )));
            }
        }
        Ok(())
    }

    /// True if every free eigenvalue is strictly negative.
    pub fn is_strict(&self) -> bool {
        self.eigenvalues[self.degree + 1..].iter().all(|&l| l < 0.0)
    }
}

/// `S = V Λ V^T`. Entries are accumulated as `Σ_k λ_k V_ik V_jk`, which is
/// bitwise symmetric.
pub fn dissipation_matrix(basis: &DopBasis, spec: &DissipationSpec) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let n = basis.len();
    if spec.eigenvalues.len() != n {
        return Err(invalid(format!(
            "{} eigenvalues for {n} nodes",
            spec.eigenvalues.len()
        )));
    }
    let v = &basis.v;
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let sij: f64 = spec
                .eigenvalues
                .iter()
                .enumerate()
                .filter(|(_, &l)| l != 0.0)
                .map(|(k, &l)| l * v[(i, k)] * v[(j, k)])
                .sum();
            s[(i, j)] = sij;
            s[(j, i)] = sij;
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::dop::dop_basis;
    use crate::operators::nodes::{equidistant_nodes, lgl_nodes};
    use crate::operators::sbp::max_abs;

    #[test]
    fn three_lgl_top_mode() {
        let basis = dop_basis(&lgl_nodes(3).unwrap()).unwrap();
        let s = dissipation_matrix(&basis, &DissipationSpec::top_mode(3, -1.0).unwrap()).unwrap();
        #[rustfmt::skip]
        let expected = DMatrix::from_row_slice(3, 3, &[
            -1.0, 2.0, -1.0,
            2.0, -4.0, 2.0,
            -1.0, 2.0, -1.0,
        ]) / 6.0;
        assert!(max_abs(&(s - expected)) < 1e-14);
    }

    #[test]
    fn zero_spectrum_gives_zero() {
        let basis = dop_basis(&lgl_nodes(5).unwrap()).unwrap();
        let spec = DissipationSpec::new(vec![0.0; 5], 4).unwrap();
        assert_eq!(max_abs(&dissipation_matrix(&basis, &spec).unwrap()), 0.0);
    }

    #[test]
    fn four_equidistant_top_mode() {
        let basis = dop_basis(&equidistant_nodes(4, 0.0, 1.0).unwrap()).unwrap();
        let s = dissipation_matrix(&basis, &DissipationSpec::top_mode(4, -1.0).unwrap()).unwrap();
        #[rustfmt::skip]
        let expected = DMatrix::from_row_slice(4, 4, &[
            -1.0, 3.0, -3.0, 1.0,
            3.0, -9.0, 9.0, -3.0,
            -3.0, 9.0, -9.0, 3.0,
            1.0, -3.0, 3.0, -1.0,
        ]) / 20.0;
        assert!(max_abs(&(s - expected)) < 1e-14);
    }

    #[test]
    fn rejects_bad_spectra() {
        assert!(DissipationSpec::new(vec![0.0, 0.0, 0.5], 1).is_err());
        assert!(DissipationSpec::new(vec![0.0, -1.0, -1.0], 1).is_err());
        assert!(DissipationSpec::new(vec![0.0, 0.0], 2).is_err());
        let basis = dop_basis(&lgl_nodes(4).unwrap()).unwrap();
        let spec = DissipationSpec::top_mode(3, -1.0).unwrap();
        assert!(dissipation_matrix(&basis, &spec).is_err());
    }
}
