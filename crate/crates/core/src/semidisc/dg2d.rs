//! Tensor-product DG-USBP scheme on structured quadrilateral meshes.
//!
//! The same kernel serves Cartesian and curvilinear meshes; see [`Mesh2D`]
//! for the meaning of the per-node direction vectors and factors.

use super::mesh::Mesh2D;
use super::{
    check_node, gather, validate_boundary, validate_coupling, Boundary, Coupling, ElementOps,
    SemiDiscretization,
};
use crate::error::{invalid, Error, Result};
use crate::operators::UsbpPair;
use crate::physics::{Equation, FluxSplitting, SplittingKind};

#[derive(Debug, Clone)]
pub struct Dg2d {
    pub mesh: Mesh2D,
    pub ops: ElementOps,
    pub equation: Equation,
    pub coupling: Coupling,
    pub boundary: Boundary,
    /// Per-direction splittings with the Lax–Friedrichs speed scaled by the mesh.
    splits: Option<[FluxSplitting; 2]>,
    weights: Vec<f64>,
}

const MAX_VARS: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Low,
    High,
}

impl Dg2d {
    pub fn new(
        mesh: Mesh2D,
        pair: &UsbpPair,
        equation: Equation,
        coupling: Coupling,
        boundary: Boundary,
    ) -> Result<Self> {
        if equation.dim() != 2 {
            return Err(invalid(
                "two-dimensional scheme needs a two-dimensional equation",
            ));
        }
        validate_coupling(&coupling, &equation)?;
        validate_boundary(&boundary, &equation)?;
        let ops = ElementOps::new(pair)?;
        if ops.n != mesh.n {
            return Err(invalid(format!(
                "mesh has {} nodes per direction, operator {}",
                mesh.n, ops.n
            )));
        }
        let w = ops
            .unit_weights()
            .ok_or_else(|| invalid("two-dimensional schemes need a diagonal norm"))?;
        let n = ops.n;
        let weights = (0..n * n).map(|i| w[i % n] * w[i / n]).collect();
        let splits = match &coupling {
            Coupling::Upwind(s) => Some([0, 1].map(|d| {
                let mut s = s.clone();
                if s.kind == SplittingKind::LaxFriedrichs {
                    s.lambda *= mesh.lf_scale[d];
                }
                s
            })),
            Coupling::CentralRusanov => None,
        };
        Ok(Self {
            mesh,
            ops,
            equation,
            coupling,
            boundary,
            splits,
            weights,
        })
    }

    /// Neighbouring element across the `side` face in direction `d`.
    fn neighbour(&self, e: usize, d: usize, side: Side) -> Option<usize> {
        let (jx, jy) = (self.mesh.jx, self.mesh.jy);
        let (ex, ey) = (e % jx, e / jx);
        let (pos, len) = if d == 0 { (ex, jx) } else { (ey, jy) };
        let next = match side {
            Side::High if pos + 1 < len => pos + 1,
            Side::Low if pos > 0 => pos - 1,
            _ => match self.boundary {
                Boundary::Periodic => match side {
                    Side::High => 0,
                    Side::Low => len - 1,
                },
                Boundary::Dirichlet(_) => return None,
            },
        };
        Some(if d == 0 {
            next + jx * ey
        } else {
            ex + jx * next
        })
    }

    /// Node index at position `r` along direction `d` on line `l`.
    #[inline]
    fn line_node(n: usize, d: usize, r: usize, l: usize) -> usize {
        if d == 0 {
            r + n * l
        } else {
            l + n * r
        }
    }

    /// Interface correction `c` such that the face adds `∓ P⁻¹e c` to the
    /// reference divergence. `own_split` holds the element's own `(f₊, f₋)`
    /// in direction `d` for upwind coupling.
    #[allow(clippy::too_many_arguments)]
    fn face_correction(
        &self,
        d: usize,
        side: Side,
        own: &[f64],
        own_split: (&[f64], &[f64]),
        nb: &[f64],
        n: &[f64],
        out: &mut [f64],
    ) -> Result<()> {
        let nv = own.len();
        match &self.splits {
            Some(splits) => {
                let (mut p_n, mut m_n) = ([0.0; MAX_VARS], [0.0; MAX_VARS]);
                splits[d].split(nb, n, &mut p_n[..nv], &mut m_n[..nv])?;
                let (p_o, m_o) = own_split;
                for v in 0..nv {
                    out[v] = match side {
                        Side::High => m_n[v] - m_o[v],
                        Side::Low => p_n[v] - p_o[v],
                    };
                }
            }
            None => {
                let eq = &self.equation;
                let (mut f_o, mut f_n) = ([0.0; MAX_VARS], [0.0; MAX_VARS]);
                eq.flux(own, n, &mut f_o[..nv]);
                eq.flux(nb, n, &mut f_n[..nv]);
                let lam = eq.max_wave_speed(own, n).max(eq.max_wave_speed(nb, n));
                let sign = if side == Side::High { 1.0 } else { -1.0 };
                for v in 0..nv {
                    let fstar = 0.5 * (f_o[v] + f_n[v]) - 0.5 * sign * lam * (nb[v] - own[v]);
                    out[v] = fstar - f_o[v];
                }
            }
        }
        Ok(())
    }
}

impl SemiDiscretization for Dg2d {
    fn equation(&self) -> &Equation {
        &self.equation
    }

    fn elements(&self) -> usize {
        self.mesh.elements()
    }

    fn npts(&self) -> usize {
        self.mesh.npts()
    }

    fn nodes_per_direction(&self) -> usize {
        self.mesh.n
    }

    fn coordinates(&self) -> &[[f64; 2]] {
        &self.mesh.coords
    }

    fn h_min(&self) -> f64 {
        self.mesh.h_min
    }

    fn rhs(&self, u: &[f64], t: f64, du: &mut [f64]) -> Result<()> {
        if u.len() != self.len() || du.len() != self.len() {
            return Err(Error::ShapeMismatch(format!(
                "state length {} / {}, expected {}",
                u.len(),
                du.len(),
                self.len()
            )));
        }
        let (nv, n, ne) = (self.nvars(), self.mesh.n, self.elements());
        let np = n * n;
        let mesh = &self.mesh;
        let ops = &self.ops;

        // Nodal fluxes per direction: (f₊, f₋) for upwind, (f, unused) for central.
        let mut fa = [vec![0.0; u.len()], vec![0.0; u.len()]];
        let mut fb = [vec![0.0; u.len()], vec![0.0; u.len()]];
        let (mut s, mut a, mut b) = (vec![0.0; nv], vec![0.0; nv], vec![0.0; nv]);
        for e in 0..ne {
            for i in 0..np {
                gather(u, nv, np, e, i, &mut s);
                check_node(&self.equation, &s, t, e, i)?;
                let k = mesh.node(e, i);
                for d in 0..2 {
                    let nd = &mesh.normals[d][k];
                    match &self.splits {
                        Some(splits) => splits[d].split(&s, nd, &mut a, &mut b)?,
                        None => self.equation.flux(&s, nd, &mut a),
                    }
                    for v in 0..nv {
                        fa[d][(e * nv + v) * np + i] = a[v];
                        fb[d][(e * nv + v) * np + i] = b[v];
                    }
                }
            }
        }

        let upwind = self.splits.is_some();
        let (dm, dp) = if upwind {
            (&ops.d_minus, &ops.d_plus)
        } else {
            (&ops.d, &ops.d)
        };
        let mut div = [vec![0.0; np], vec![0.0; np]];
        let (mut la, mut lb) = (vec![0.0; n], vec![0.0; n]);
        for e in 0..ne {
            for v in 0..nv {
                let base = (e * nv + v) * np;
                for d in 0..2 {
                    for l in 0..n {
                        // Differencing against the first node of the line
                        // annihilates constants exactly.
                        let j0 = base + Self::line_node(n, d, 0, l);
                        for k in 1..n {
                            let j = base + Self::line_node(n, d, k, l);
                            la[k] = fa[d][j] - fa[d][j0];
                            lb[k] = if upwind { fb[d][j] - fb[d][j0] } else { 0.0 };
                        }
                        for r in 0..n {
                            let row = &dm[r * n..(r + 1) * n];
                            let rowp = &dp[r * n..(r + 1) * n];
                            let mut acc = 0.0;
                            for k in 1..n {
                                acc += row[k] * la[k] + rowp[k] * lb[k];
                            }
                            div[d][Self::line_node(n, d, r, l)] = acc;
                        }
                    }
                }
                let k0 = mesh.node(e, 0);
                for i in 0..np {
                    du[base + i] = -(mesh.factors[0][k0 + i] * div[0][i]
                        + mesh.factors[1][k0 + i] * div[1][i]);
                }
            }
        }

        let mut own = vec![0.0; nv];
        let mut nb = vec![0.0; nv];
        let mut corr = vec![0.0; nv];
        let (mut own_p, mut own_m) = (vec![0.0; nv], vec![0.0; nv]);
        for e in 0..ne {
            for d in 0..2 {
                for side in [Side::Low, Side::High] {
                    let (r_own, r_nb, pinv, sign) = match side {
                        Side::High => (n - 1, 0, &ops.pinv_right, -1.0),
                        Side::Low => (0, n - 1, &ops.pinv_left, 1.0),
                    };
                    let neighbour = self.neighbour(e, d, side);
                    for l in 0..n {
                        let i = Self::line_node(n, d, r_own, l);
                        gather(u, nv, np, e, i, &mut own);
                        match (neighbour, &self.boundary) {
                            (Some(j), _) => {
                                gather(u, nv, np, j, Self::line_node(n, d, r_nb, l), &mut nb)
                            }
                            (None, Boundary::Dirichlet(state)) => nb.copy_from_slice(state),
                            (None, Boundary::Periodic) => {
                                unreachable!("periodic meshes have neighbours")
                            }
                        }
                        let nd = &mesh.normals[d][mesh.node(e, i)];
                        for v in 0..nv {
                            let k = (e * nv + v) * np + i;
                            own_p[v] = fa[d][k];
                            own_m[v] = fb[d][k];
                        }
                        self.face_correction(d, side, &own, (&own_p, &own_m), &nb, nd, &mut corr)?;
                        for r in 0..n {
                            if pinv[r] == 0.0 {
                                continue;
                            }
                            let node = Self::line_node(n, d, r, l);
                            let fac = mesh.factors[d][mesh.node(e, node)];
                            for v in 0..nv {
                                du[(e * nv + v) * np + node] += sign * fac * pinv[r] * corr[v];
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn integrate(&self, f: &[f64]) -> f64 {
        let np = self.npts();
        f.iter()
            .enumerate()
            .map(|(k, fk)| self.weights[k % np] * self.mesh.jacobian[k] * fk)
            .sum()
    }

    fn inner(&self, a: &[f64], b: &[f64], var: usize) -> f64 {
        let (nv, np) = (self.nvars(), self.npts());
        let mut acc = 0.0;
        for e in 0..self.elements() {
            let base = (e * nv + var) * np;
            for i in 0..np {
                acc += self.weights[i] * self.mesh.jacobian[e * np + i] * a[base + i] * b[base + i];
            }
        }
        acc
    }
}
