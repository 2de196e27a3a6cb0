//! Multi-element DG-USBP scheme in one space dimension.

use super::{
    check_node, gather, validate_boundary, validate_coupling, Boundary, Coupling, ElementOps,
    SemiDiscretization, SourceTerm,
};
use crate::error::{invalid, Result};
use crate::operators::UsbpPair;
use crate::physics::Equation;

#[derive(Debug, Clone)]
pub struct Dg1d {
    pub mesh: super::Mesh1D,
    pub ops: ElementOps,
    pub equation: Equation,
    pub coupling: Coupling,
    pub boundary: Boundary,
    pub source: Option<SourceTerm>,
    coords: Vec<[f64; 2]>,
}

impl Dg1d {
    pub fn new(
        mesh: super::Mesh1D,
        pair: &UsbpPair,
        equation: Equation,
        coupling: Coupling,
        boundary: Boundary,
    ) -> Result<Self> {
        if equation.dim() != 1 {
            return Err(invalid(
                "one-dimensional scheme needs a one-dimensional equation",
            ));
        }
        validate_coupling(&coupling, &equation)?;
        validate_boundary(&boundary, &equation)?;
        let ops = ElementOps::new(pair)?;
        let coords = (0..mesh.elements)
            .flat_map(|e| ops.ref_nodes.iter().map(move |&t| (e, t)))
            .map(|(e, t)| [mesh.map(e, t), 0.0])
            .collect();
        Ok(Self {
            mesh,
            ops,
            equation,
            coupling,
            boundary,
            source: None,
            coords,
        })
    }

    pub fn with_source(mut self, source: SourceTerm) -> Self {
        self.source = Some(source);
        self
    }

    /// Reference-to-physical derivative factor of element `e`.
    fn scale(&self, e: usize) -> f64 {
        let (l, r) = self.mesh.element_bounds(e);
        self.ops.ref_width / (r - l)
    }

    fn left_of(&self, e: usize) -> Option<usize> {
        match (e, &self.boundary) {
            (0, Boundary::Periodic) => Some(self.mesh.elements - 1),
            (0, Boundary::Dirichlet(_)) => None,
            _ => Some(e - 1),
        }
    }

    fn right_of(&self, e: usize) -> Option<usize> {
        let last = self.mesh.elements - 1;
        match &self.boundary {
            _ if e < last => Some(e + 1),
            Boundary::Periodic => Some(0),
            Boundary::Dirichlet(_) => None,
        }
    }

    fn check_all(&self, u: &[f64], t: f64) -> Result<()> {
        let (nv, n) = (self.equation.nvars(), self.ops.n);
        let mut s = vec![0.0; nv];
        for e in 0..self.mesh.elements {
            for i in 0..n {
                gather(u, nv, n, e, i, &mut s);
                check_node(&self.equation, &s, t, e, i)?;
            }
        }
        Ok(())
    }

    fn rhs_upwind(
        &self,
        split: &crate::physics::FluxSplitting,
        u: &[f64],
        du: &mut [f64],
    ) -> Result<()> {
        let (nv, n, ne) = (self.equation.nvars(), self.ops.n, self.mesh.elements);
        let mut fp = vec![0.0; u.len()];
        let mut fm = vec![0.0; u.len()];
        let (mut s, mut a, mut b) = (vec![0.0; nv], vec![0.0; nv], vec![0.0; nv]);
        for e in 0..ne {
            for i in 0..n {
                gather(u, nv, n, e, i, &mut s);
                split.split(&s, &[1.0], &mut a, &mut b)?;
                for v in 0..nv {
                    fp[(e * nv + v) * n + i] = a[v];
                    fm[(e * nv + v) * n + i] = b[v];
                }
            }
        }
        let exterior = match &self.boundary {
            Boundary::Dirichlet(state) => Some(split.split_vec(state, &[1.0])?),
            Boundary::Periodic => None,
        };
        let ops = &self.ops;
        for e in 0..ne {
            let g = self.scale(e);
            let (left, right) = (self.left_of(e), self.right_of(e));
            for v in 0..nv {
                let base = (e * nv + v) * n;
                let (fpe, fme) = (&fp[base..base + n], &fm[base..base + n]);
                for r in 0..n {
                    let row = r * n;
                    let acc: f64 = (1..n)
                        .map(|k| {
                            ops.d_plus[row + k] * (fme[k] - fme[0])
                                + ops.d_minus[row + k] * (fpe[k] - fpe[0])
                        })
                        .sum();
                    du[base + r] = -g * acc;
                }
                let fm_nb = match (right, &exterior) {
                    (Some(j), _) => fm[(j * nv + v) * n],
                    (None, Some((_, ext))) => ext[v],
                    (None, None) => unreachable!("periodic meshes have neighbours"),
                };
                let jump_r = fm_nb - fme[n - 1];
                let fp_nb = match (left, &exterior) {
                    (Some(j), _) => fp[(j * nv + v) * n + n - 1],
                    (None, Some((ext, _))) => ext[v],
                    (None, None) => unreachable!("periodic meshes have neighbours"),
                };
                let jump_l = fp_nb - fpe[0];
                for r in 0..n {
                    du[base + r] += g * (jump_l * ops.pinv_left[r] - jump_r * ops.pinv_right[r]);
                }
            }
        }
        Ok(())
    }

    fn rhs_central(&self, u: &[f64], du: &mut [f64]) -> Result<()> {
        let (nv, n, ne) = (self.equation.nvars(), self.ops.n, self.mesh.elements);
        let eq = &self.equation;
        let mut f = vec![0.0; u.len()];
        let (mut s, mut a) = (vec![0.0; nv], vec![0.0; nv]);
        for e in 0..ne {
            for i in 0..n {
                gather(u, nv, n, e, i, &mut s);
                eq.flux(&s, &[1.0], &mut a);
                for v in 0..nv {
                    f[(e * nv + v) * n + i] = a[v];
                }
            }
        }
        let ops = &self.ops;
        let mut own = vec![0.0; nv];
        let mut nb = vec![0.0; nv];
        let (mut f_own, mut f_nb) = (vec![0.0; nv], vec![0.0; nv]);
        for e in 0..ne {
            let g = self.scale(e);
            for v in 0..nv {
                let base = (e * nv + v) * n;
                for r in 0..n {
                    let row = r * n;
                    let acc: f64 = (1..n)
                        .map(|k| ops.d[row + k] * (f[base + k] - f[base]))
                        .sum();
                    du[base + r] = -g * acc;
                }
            }
            for (side, neighbour) in [(1usize, self.right_of(e)), (0usize, self.left_of(e))] {
                let own_node = if side == 1 { n - 1 } else { 0 };
                gather(u, nv, n, e, own_node, &mut own);
                match (neighbour, &self.boundary) {
                    (Some(j), _) => gather(u, nv, n, j, n - 1 - own_node, &mut nb),
                    (None, Boundary::Dirichlet(state)) => nb.copy_from_slice(state),
                    (None, Boundary::Periodic) => unreachable!("periodic meshes have neighbours"),
                }
                eq.flux(&own, &[1.0], &mut f_own);
                eq.flux(&nb, &[1.0], &mut f_nb);
                let lam = eq
                    .max_wave_speed(&own, &[1.0])
                    .max(eq.max_wave_speed(&nb, &[1.0]));
                // Jump taken left-to-right across the interface.
                let sign = if side == 1 { 1.0 } else { -1.0 };
                for v in 0..nv {
                    let fstar = 0.5 * (f_own[v] + f_nb[v]) - 0.5 * sign * lam * (nb[v] - own[v]);
                    let (pinv, dir) = if side == 1 {
                        (&ops.pinv_right, -1.0)
                    } else {
                        (&ops.pinv_left, 1.0)
                    };
                    let base = (e * nv + v) * n;
                    for r in 0..n {
                        du[base + r] += dir * g * pinv[r] * (fstar - f_own[v]);
                    }
                }
            }
        }
        Ok(())
    }
}

impl SemiDiscretization for Dg1d {
    fn equation(&self) -> &Equation {
        &self.equation
    }

    fn elements(&self) -> usize {
        self.mesh.elements
    }

    fn npts(&self) -> usize {
        self.ops.n
    }

    fn nodes_per_direction(&self) -> usize {
        self.ops.n
    }

    fn coordinates(&self) -> &[[f64; 2]] {
        &self.coords
    }

    fn h_min(&self) -> f64 {
        self.mesh.h()
    }

    fn rhs(&self, u: &[f64], t: f64, du: &mut [f64]) -> Result<()> {
        if u.len() != self.len() || du.len() != self.len() {
            return Err(crate::Error::ShapeMismatch(format!(
                "state length {} / {}, expected {}",
                u.len(),
                du.len(),
                self.len()
            )));
        }
        self.check_all(u, t)?;
        match &self.coupling {
            Coupling::Upwind(split) => self.rhs_upwind(split, u, du)?,
            Coupling::CentralRusanov => self.rhs_central(u, du)?,
        }
        if let Some(source) = self.source {
            let (nv, n) = (self.equation.nvars(), self.ops.n);
            let mut s = vec![0.0; nv];
            for (k, x) in self.coords.iter().enumerate() {
                let (e, i) = (k / n, k % n);
                source.eval(t, x, &mut s);
                for v in 0..nv {
                    du[(e * nv + v) * n + i] += s[v];
                }
            }
        }
        Ok(())
    }

    fn integrate(&self, f: &[f64]) -> f64 {
        let n = self.ops.n;
        (0..self.mesh.elements)
            .map(|e| {
                let fe = &f[e * n..(e + 1) * n];
                let pf: f64 = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .map(|(i, j)| self.ops.p[(i, j)] * fe[j])
                    .sum();
                pf / self.scale(e)
            })
            .sum()
    }

    fn inner(&self, a: &[f64], b: &[f64], var: usize) -> f64 {
        let (nv, n) = (self.equation.nvars(), self.ops.n);
        (0..self.mesh.elements)
            .map(|e| {
                let base = (e * nv + var) * n;
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        acc += a[base + i] * self.ops.p[(i, j)] * b[base + j];
                    }
                }
                acc / self.scale(e)
            })
            .sum()
    }
}
