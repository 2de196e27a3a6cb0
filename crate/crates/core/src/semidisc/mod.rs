//! Method-of-lines right-hand sides of the DG-USBP schemes.
//!
//! States are flat vectors with element-contiguous blocks: variable `v` of
//! node `i` in element `e` lives at `(e·nvars + v)·npts + i`.

pub mod dg1d;
pub mod dg2d;
pub mod mesh;
pub mod snapshot;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result, SimulationAbort};
use crate::operators::sbp::is_diagonal;
use crate::operators::UsbpPair;
use crate::physics::{manufactured_euler_source, Equation, FluxSplitting};

pub use dg1d::Dg1d;
pub use dg2d::Dg2d;
pub use mesh::{build_warped_mesh, cartesian_mesh, curvilinear_mesh, Mesh1D, Mesh2D};
pub use snapshot::write_snapshot;

/// Treatment of the outer boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Periodic,
    /// Weakly imposed exterior state.
    Dirichlet(Vec<f64>),
}

/// Interface and volume treatment.
#[derive(Debug, Clone, PartialEq)]
pub enum Coupling {
    /// `D₊ f₋ + D₋ f₊` with flux-splitting SATs.
    Upwind(FluxSplitting),
    /// Central `D f` with a local Lax–Friedrichs (Rusanov) interface flux.
    CentralRusanov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceTerm {
    ManufacturedEuler,
}

impl SourceTerm {
    fn eval(self, t: f64, x: &[f64], out: &mut [f64]) {
        match self {
            SourceTerm::ManufacturedEuler => {
                out.copy_from_slice(&manufactured_euler_source(t, x[0]))
            }
        }
    }
}

/// Row-major element operators derived from a USBP pair.
#[derive(Debug, Clone)]
pub struct ElementOps {
    pub n: usize,
    pub d_plus: Vec<f64>,
    pub d_minus: Vec<f64>,
    pub d: Vec<f64>,
    /// `P⁻¹ e_L` and `P⁻¹ e_R`.
    pub pinv_left: Vec<f64>,
    pub pinv_right: Vec<f64>,
    pub p: DMatrix<f64>,
    /// Length of the reference interval of the node set.
    pub ref_width: f64,
    /// Nodes mapped to `[-1, 1]`.
    pub ref_nodes: Vec<f64>,
    pub diagonal: bool,
}

impl ElementOps {
    pub fn new(pair: &UsbpPair) -> Result<Self> {
        let nodes = &pair.base.nodes;
        if !nodes.includes_boundary {
            return Err(invalid("element operators need boundary-including nodes"));
        }
        let n = pair.len();
        let flat = |m: &DMatrix<f64>| -> Vec<f64> {
            (0..n)
                .flat_map(|i| (0..n).map(move |j| m[(i, j)]))
                .collect()
        };
        let mut e = DMatrix::zeros(n, 2);
        e[(0, 0)] = 1.0;
        e[(n - 1, 1)] = 1.0;
        let pe = pair.base.solve_norm(&e)?;
        Ok(Self {
            n,
            d_plus: flat(&pair.d_plus),
            d_minus: flat(&pair.d_minus),
            d: flat(pair.d()),
            pinv_left: pe.column(0).iter().copied().collect(),
            pinv_right: pe.column(1).iter().copied().collect(),
            p: pair.p().clone(),
            ref_width: nodes.x_right - nodes.x_left,
            ref_nodes: nodes.nodes.iter().map(|&x| nodes.to_unit(x)).collect(),
            diagonal: is_diagonal(pair.p()),
        })
    }

    /// Quadrature weights on `[-1, 1]` (diagonal norms only).
    pub fn unit_weights(&self) -> Option<Vec<f64>> {
        self.diagonal.then(|| {
            (0..self.n)
                .map(|i| self.p[(i, i)] * 2.0 / self.ref_width)
                .collect()
        })
    }
}

/// A spatial discretization `du/dt = rhs(u, t)`.
pub trait SemiDiscretization: Send + Sync {
    fn equation(&self) -> &Equation;
    fn elements(&self) -> usize;
    /// Nodes per element.
    fn npts(&self) -> usize;
    /// Nodes per element and coordinate direction.
    fn nodes_per_direction(&self) -> usize;
    /// Physical node coordinates, element-major; unused coordinates are 0.
    fn coordinates(&self) -> &[[f64; 2]];
    fn h_min(&self) -> f64;
    fn rhs(&self, u: &[f64], t: f64, du: &mut [f64]) -> Result<()>;
    /// Norm-matrix quadrature of a nodal scalar field (one value per node).
    fn integrate(&self, f: &[f64]) -> f64;
    /// Norm-matrix inner product of variable `var` of two states.
    fn inner(&self, a: &[f64], b: &[f64], var: usize) -> f64;

    fn nvars(&self) -> usize {
        self.equation().nvars()
    }

    fn len(&self) -> usize {
        self.elements() * self.nvars() * self.npts()
    }

    fn dim(&self) -> usize {
        self.equation().dim()
    }

    /// Nodal interpolant of `f(x)`.
    fn project(&self, f: &dyn Fn(&[f64]) -> Vec<f64>) -> Vec<f64> {
        let (nv, np, dim) = (self.nvars(), self.npts(), self.dim());
        let mut u = vec![0.0; self.len()];
        for (k, x) in self.coordinates().iter().enumerate() {
            let (e, i) = (k / np, k % np);
            let val = f(&x[..dim]);
            for v in 0..nv {
                u[(e * nv + v) * np + i] = val[v];
            }
        }
        u
    }

    /// Largest direction-independent characteristic speed over all nodes.
    fn max_speed(&self, u: &[f64]) -> f64 {
        let (nv, np) = (self.nvars(), self.npts());
        let mut s = vec![0.0; nv];
        let mut out = 0.0f64;
        for e in 0..self.elements() {
            for i in 0..np {
                gather(u, nv, np, e, i, &mut s);
                out = out.max(self.equation().max_speed(&s));
            }
        }
        out
    }
}

#[inline]
pub(crate) fn gather(u: &[f64], nv: usize, np: usize, e: usize, i: usize, out: &mut [f64]) {
    for (v, o) in out.iter_mut().enumerate() {
        *o = u[(e * nv + v) * np + i];
    }
}

pub(crate) fn check_node(
    eq: &Equation,
    s: &[f64],
    t: f64,
    element: usize,
    node: usize,
) -> Result<()> {
    eq.check(s).map_err(|(violation, value)| {
        Error::Aborted(SimulationAbort {
            time: t,
            element,
            node,
            violation,
            value,
        })
    })
}

pub(crate) fn validate_boundary(boundary: &Boundary, eq: &Equation) -> Result<()> {
    if let Boundary::Dirichlet(state) = boundary {
        if state.len() != eq.nvars() {
            return Err(invalid(format!(
                "boundary state has {} components, expected {}",
                state.len(),
                eq.nvars()
            )));
        }
        eq.check(state)
            .map_err(|(v, _)| invalid(format!("boundary state is inadmissible: {v}")))?;
    }
    Ok(())
}

pub(crate) fn validate_coupling(coupling: &Coupling, eq: &Equation) -> Result<()> {
    if let Coupling::Upwind(split) = coupling {
        if &split.equation != eq {
            return Err(invalid("splitting was built for a different equation"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::build_lgl_usbp;

    #[test]
    fn element_ops_boundary_vectors() {
        let ops = ElementOps::new(&build_lgl_usbp(3, -1.0).unwrap()).unwrap();
        assert!((ops.pinv_left[0] - 3.0).abs() < 1e-14);
        assert_eq!(ops.pinv_left[1], 0.0);
        assert!((ops.pinv_right[2] - 3.0).abs() < 1e-14);
        assert_eq!(ops.ref_width, 2.0);
        let w = ops.unit_weights().unwrap();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }
}
