//! One-dimensional and structured two-dimensional element meshes.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::operators::sbp::{lagrange_basis_at, lagrange_basis_derivative_at};
use crate::operators::SbpOperator;

/// Uniform partition of `[x_min, x_max]` into `J` elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    pub x_min: f64,
    pub x_max: f64,
    pub elements: usize,
}

impl Mesh1D {
    pub fn new(x_min: f64, x_max: f64, elements: usize) -> Result<Self> {
        if elements == 0 {
            return Err(invalid("mesh needs at least one element"));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(invalid(format!("invalid interval [{x_min}, {x_max}]")));
        }
        Ok(Self {
            x_min,
            x_max,
            elements,
        })
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / self.elements as f64
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    /// `[left, right]` of element `j`.
    pub fn element_bounds(&self, j: usize) -> (f64, f64) {
        let h = self.h();
        let left = self.x_min + j as f64 * h;
        let right = if j + 1 == self.elements {
            self.x_max
        } else {
            left + h
        };
        (left, right)
    }

    /// Physical coordinate of reference point `t ∈ [-1, 1]` in element `j`.
    pub fn map(&self, j: usize, t: f64) -> f64 {
        let (l, r) = self.element_bounds(j);
        l + 0.5 * (t + 1.0) * (r - l)
    }
}

/// Per-node geometry of a structured quadrilateral mesh.
///
/// Node `i = a + N·b` of element `e = e_ξ + J_ξ·e_η` sits at reference point
/// `(ξ_a, η_b)`. For every node the mesh stores the physical coordinates,
/// the two direction vectors along which fluxes are evaluated and the factor
/// that turns the reference divergence into a time derivative:
///
/// * Cartesian elements: unit directions, factors `2/h_x`, `2/h_y`;
/// * mapped elements: `n₁ = (Y_η, -X_η)`, `n₂ = (-Y_ξ, X_ξ)`, factor `1/J`.
#[derive(Debug, Clone)]
pub struct Mesh2D {
    pub jx: usize,
    pub jy: usize,
    /// Nodes per direction.
    pub n: usize,
    pub coords: Vec<[f64; 2]>,
    pub normals: [Vec<[f64; 2]>; 2],
    pub factors: [Vec<f64>; 2],
    /// Mapping Jacobian per node (`h_x h_y / 4` for Cartesian elements).
    pub jacobian: Vec<f64>,
    /// Scale applied to the Lax–Friedrichs speed per direction.
    pub lf_scale: [f64; 2],
    /// Largest discrete metric identity defect per element.
    pub metric_residual: Vec<f64>,
    pub h_min: f64,
    pub curvilinear: bool,
    pub n_geo: usize,
}

impl Mesh2D {
    pub fn elements(&self) -> usize {
        self.jx * self.jy
    }

    pub fn npts(&self) -> usize {
        self.n * self.n
    }

    /// Flat node index of node `i` of element `e`.
    pub fn node(&self, e: usize, i: usize) -> usize {
        e * self.npts() + i
    }

    pub fn min_jacobian(&self) -> f64 {
        self.jacobian.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_metric_residual(&self) -> f64 {
        self.metric_residual.iter().copied().fold(0.0, f64::max)
    }
}

fn reference_nodes(op: &SbpOperator) -> Result<Vec<f64>> {
    if !op.nodes.includes_boundary {
        return Err(invalid("element operators need boundary-including nodes"));
    }
    Ok(op
        .nodes
        .nodes
        .iter()
        .map(|&x| op.nodes.to_unit(x))
        .collect())
}

/// Cartesian mesh of `jx × jy` equal rectangles on `[lo.0, hi.0] × [lo.1, hi.1]`.
pub fn cartesian_mesh(
    jx: usize,
    jy: usize,
    lo: [f64; 2],
    hi: [f64; 2],
    op: &SbpOperator,
) -> Result<Mesh2D> {
    if jx == 0 || jy == 0 {
        return Err(invalid("mesh needs at least one element per direction"));
    }
    if !(hi[0] > lo[0] && hi[1] > lo[1]) {
        return Err(invalid("empty domain"));
    }
    let t = reference_nodes(op)?;
    let n = t.len();
    let hx = (hi[0] - lo[0]) / jx as f64;
    let hy = (hi[1] - lo[1]) / jy as f64;
    let total = jx * jy * n * n;
    let mut coords = Vec::with_capacity(total);
    for ey in 0..jy {
        for ex in 0..jx {
            for b in 0..n {
                for a in 0..n {
                    coords.push([
                        lo[0] + (ex as f64 + 0.5 * (t[a] + 1.0)) * hx,
                        lo[1] + (ey as f64 + 0.5 * (t[b] + 1.0)) * hy,
                    ]);
                }
            }
        }
    }
    Ok(Mesh2D {
        jx,
        jy,
        n,
        coords,
        normals: [vec![[1.0, 0.0]; total], vec![[0.0, 1.0]; total]],
        factors: [vec![2.0 / hx; total], vec![2.0 / hy; total]],
        jacobian: vec![0.25 * hx * hy; total],
        lf_scale: [1.0, 1.0],
        metric_residual: vec![0.0; jx * jy],
        h_min: hx.min(hy),
        curvilinear: false,
        n_geo: 1,
    })
}

/// Mapping from the element index and reference point to physical space.
pub trait ElementMap {
    fn eval(&self, e: usize, xi: f64, eta: f64) -> [f64; 2];
}

impl<F: Fn(usize, f64, f64) -> [f64; 2]> ElementMap for F {
    fn eval(&self, e: usize, xi: f64, eta: f64) -> [f64; 2] {
        self(e, xi, eta)
    }
}

const JACOBIAN_SAMPLES: usize = 50;

/// Curvilinear mesh whose elements are the degree-`n_geo` tensor-product
/// interpolants of `map` at equispaced geometry nodes.
///
/// Coordinates at the operator nodes are obtained from the geometry
/// polynomial; metric terms are the operator's collocation derivative
/// applied to them, so that the discrete metric identities hold.
pub fn curvilinear_mesh(
    jx: usize,
    jy: usize,
    n_geo: usize,
    map: &dyn ElementMap,
    op: &SbpOperator,
) -> Result<Mesh2D> {
    if jx == 0 || jy == 0 {
        return Err(invalid("mesh needs at least one element per direction"));
    }
    if n_geo == 0 {
        return Err(invalid("geometry degree must be at least one"));
    }
    let t = reference_nodes(op)?;
    let n = t.len();
    let npts = n * n;
    let ng = n_geo + 1;
    let geo: Vec<f64> = (0..ng)
        .map(|k| -1.0 + 2.0 * k as f64 / n_geo as f64)
        .collect();
    // Reference derivative: d/dξ = half_width · d/dx on the operator nodes.
    let hw = op.nodes.half_width();
    let d: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| op.d[(i, j)] * hw)
        .collect();
    let interp: Vec<Vec<f64>> = t.iter().map(|&x| lagrange_basis_at(&geo, x)).collect();

    let total = jx * jy * npts;
    let mut coords = Vec::with_capacity(total);
    let mut n1 = Vec::with_capacity(total);
    let mut n2 = Vec::with_capacity(total);
    let mut jac = Vec::with_capacity(total);
    let mut residual = Vec::with_capacity(jx * jy);
    let samples: Vec<f64> = (0..JACOBIAN_SAMPLES)
        .map(|k| -1.0 + 2.0 * k as f64 / (JACOBIAN_SAMPLES - 1) as f64)
        .collect();
    let sample_val: Vec<Vec<f64>> = samples
        .iter()
        .map(|&s| lagrange_basis_at(&geo, s))
        .collect();
    let sample_der: Vec<Vec<f64>> = samples
        .iter()
        .map(|&s| lagrange_basis_derivative_at(&geo, s))
        .collect();

    for e in 0..jx * jy {
        let gx: Vec<[f64; 2]> = (0..ng * ng)
            .map(|k| map.eval(e, geo[k % ng], geo[k / ng]))
            .collect();
        for (p, lp) in sample_val.iter().enumerate() {
            for (q, lq) in sample_val.iter().enumerate() {
                let (dp, dq) = (&sample_der[p], &sample_der[q]);
                let mut m = [0.0; 4];
                for kb in 0..ng {
                    for ka in 0..ng {
                        let g = gx[ka + ng * kb];
                        let wx = dp[ka] * lq[kb];
                        let wy = lp[ka] * dq[kb];
                        m[0] += wx * g[0];
                        m[1] += wy * g[0];
                        m[2] += wx * g[1];
                        m[3] += wy * g[1];
                    }
                }
                let det = m[0] * m[3] - m[1] * m[2];
                if !(det > 0.0) {
                    return Err(Error::Mesh(format!(
                        "non-positive mapping Jacobian {det:e} in element {e} at ({}, {})",
                        samples[p], samples[q]
                    )));
                }
            }
        }
        let mut xs = vec![0.0; npts];
        let mut ys = vec![0.0; npts];
        for b in 0..n {
            for a in 0..n {
                let (mut x, mut y) = (0.0, 0.0);
                for kb in 0..ng {
                    for ka in 0..ng {
                        let w = interp[a][ka] * interp[b][kb];
                        x += w * gx[ka + ng * kb][0];
                        y += w * gx[ka + ng * kb][1];
                    }
                }
                xs[a + n * b] = x;
                ys[a + n * b] = y;
            }
        }
        // Metrics from element-local coordinates keep their rounding small.
        let cx = xs.iter().sum::<f64>() / npts as f64;
        let cy = ys.iter().sum::<f64>() / npts as f64;
        let xl: Vec<f64> = xs.iter().map(|x| x - cx).collect();
        let yl: Vec<f64> = ys.iter().map(|y| y - cy).collect();
        let dxi = |f: &[f64]| apply_xi(&d, n, f);
        let deta = |f: &[f64]| apply_eta(&d, n, f);
        let (x_xi, x_eta, y_xi, y_eta) = (dxi(&xl), deta(&xl), dxi(&yl), deta(&yl));
        let r1 = dxi(&y_eta)
            .iter()
            .zip(deta(&y_xi))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let r2 = dxi(&x_eta)
            .iter()
            .zip(deta(&x_xi))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        residual.push(r1.max(r2));
        for i in 0..npts {
            let det = x_xi[i] * y_eta[i] - x_eta[i] * y_xi[i];
            if !(det > 0.0) {
                return Err(Error::Mesh(format!(
                    "non-positive mapping Jacobian {det:e} in element {e}, node {i}"
                )));
            }
            coords.push([xs[i], ys[i]]);
            n1.push([y_eta[i], -x_eta[i]]);
            n2.push([-y_xi[i], x_xi[i]]);
            jac.push(det);
        }
    }
    let norm = |v: &[f64; 2]| (v[0] * v[0] + v[1] * v[1]).sqrt();
    let max_n = n1.iter().chain(&n2).map(norm).fold(0.0, f64::max);
    let h_min = (0..total)
        .map(|i| 2.0 * jac[i] / norm(&n1[i]).max(norm(&n2[i])))
        .fold(f64::INFINITY, f64::min);
    let inv_j: Vec<f64> = jac.iter().map(|j| 1.0 / j).collect();
    Ok(Mesh2D {
        jx,
        jy,
        n,
        coords,
        normals: [n1, n2],
        factors: [inv_j.clone(), inv_j],
        jacobian: jac,
        lf_scale: [max_n, max_n],
        metric_residual: residual,
        h_min,
        curvilinear: true,
        n_geo,
    })
}

fn apply_xi(d: &[f64], n: usize, f: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for b in 0..n {
        for a in 0..n {
            out[a + n * b] = (0..n).map(|k| d[a * n + k] * f[k + n * b]).sum();
        }
    }
    out
}

fn apply_eta(d: &[f64], n: usize, f: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for b in 0..n {
        for a in 0..n {
            out[a + n * b] = (0..n).map(|k| d[b * n + k] * f[a + n * k]).sum();
        }
    }
    out
}

/// Sinusoidal warp `x + A sin(2πx) sin(2πy)` of the unit square, applied to
/// both coordinates.
pub fn warp(amplitude: f64, x: f64, y: f64) -> [f64; 2] {
    let s = amplitude * (2.0 * PI * x).sin() * (2.0 * PI * y).sin();
    [x + s, y + s]
}

/// Warped `jx × jy` mesh of `[0, 1]²` with degree-`n_geo` elements.
pub fn build_warped_mesh(
    jx: usize,
    jy: usize,
    n_geo: usize,
    amplitude: f64,
    op: &SbpOperator,
) -> Result<Mesh2D> {
    if !(1..=4).contains(&n_geo) {
        return Err(invalid(format!(
            "geometry degree must be in 1..=4, got {n_geo}"
        )));
    }
    if !amplitude.is_finite() {
        return Err(invalid("warp amplitude must be finite"));
    }
    let (hx, hy) = (1.0 / jx.max(1) as f64, 1.0 / jy.max(1) as f64);
    let map = move |e: usize, xi: f64, eta: f64| {
        let (ex, ey) = (e % jx, e / jx);
        let x = (ex as f64 + 0.5 * (xi + 1.0)) * hx;
        let y = (ey as f64 + 0.5 * (eta + 1.0)) * hy;
        warp(amplitude, x, y)
    };
    curvilinear_mesh(jx, jy, n_geo, &map, op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{lagrange_sbp, lgl_nodes};

    fn op(n: usize) -> SbpOperator {
        lagrange_sbp(&lgl_nodes(n).unwrap()).unwrap()
    }

    #[test]
    fn mesh1d_partition() {
        let m = Mesh1D::new(-1.0, 1.0, 4).unwrap();
        assert_eq!(m.h(), 0.5);
        assert_eq!(m.element_bounds(3), (0.5, 1.0));
        assert_eq!(m.map(1, -1.0), -0.5);
        assert!(Mesh1D::new(1.0, 1.0, 2).is_err());
        assert!(Mesh1D::new(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn zero_amplitude_is_affine() {
        let m = build_warped_mesh(3, 3, 2, 0.0, &op(4)).unwrap();
        let j0 = m.jacobian[0];
        assert!(m.jacobian.iter().all(|j| (j - j0).abs() < 1e-14));
        assert!((j0 - (1.0 / 6.0f64).powi(2)).abs() < 1e-14);
        assert!(m.max_metric_residual() < 1e-13);
        assert!((m.h_min - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn bilinear_metrics_are_linear() {
        let m = build_warped_mesh(4, 4, 1, 0.08, &op(5)).unwrap();
        // Y_η is linear in ξ and constant in η for a bilinear map.
        let n = m.n;
        let e = 5;
        for a in 0..n {
            let first = m.normals[0][m.node(e, a)][0];
            for b in 1..n {
                assert!((m.normals[0][m.node(e, a + n * b)][0] - first).abs() < 1e-13);
            }
        }
        let col: Vec<f64> = (0..n).map(|a| m.normals[0][m.node(e, a)][0]).collect();
        let t: Vec<f64> = lgl_nodes(n).unwrap().nodes;
        let slope = (col[n - 1] - col[0]) / 2.0;
        for a in 0..n {
            assert!((col[a] - (col[0] + slope * (t[a] + 1.0))).abs() < 1e-13);
        }
    }

    #[test]
    fn quadratic_warp_has_positive_jacobian() {
        let m = build_warped_mesh(4, 4, 2, 0.08, &op(4)).unwrap();
        assert!(m.min_jacobian() > 0.0);
        assert!(m.max_metric_residual() < 1e-12);
        assert!(m.curvilinear);
    }

    #[test]
    fn folded_mesh_is_rejected() {
        let r = build_warped_mesh(2, 2, 4, 0.5, &op(5));
        assert!(matches!(r, Err(Error::Mesh(_))));
    }

    #[test]
    fn cartesian_geometry() {
        let m = cartesian_mesh(2, 4, [0.0, 0.0], [2.0, 1.0], &op(3)).unwrap();
        assert_eq!(m.elements(), 8);
        assert_eq!(m.coords[m.node(1, 8)], [2.0, 0.25]);
        assert_eq!(m.factors[0][0], 2.0);
        assert_eq!(m.factors[1][0], 8.0);
        assert_eq!(m.h_min, 0.25);
    }

    #[test]
    fn gauss_nodes_rejected() {
        let gl = crate::operators::gauss_legendre_nodes(3).unwrap();
        let op = lagrange_sbp(&gl).unwrap();
        assert!(cartesian_mesh(1, 1, [0.0, 0.0], [1.0, 1.0], &op).is_err());
    }
}
