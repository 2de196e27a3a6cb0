//! Node sets on a reference interval.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeFamily {
    Lgl,
    GaussLegendre,
    Equidistant,
    Custom,
}

/// Grid points of one element together with (optional) diagonal quadrature
/// weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSet {
    pub nodes: Vec<f64>,
    pub weights: Option<Vec<f64>>,
    pub includes_boundary: bool,
    pub family: NodeFamily,
    pub x_left: f64,
    pub x_right: f64,
}

const MAX_NODES: usize = 12;

impl NodeSet {
    /// Build a custom node set, checking ordering and weight consistency.
    pub fn custom(
        nodes: Vec<f64>,
        weights: Option<Vec<f64>>,
        x_left: f64,
        x_right: f64,
    ) -> Result<Self> {
        if nodes.is_empty() {
            return Err(invalid("node set must not be empty"));
        }
        if !(x_left < x_right) {
            return Err(invalid(format!("empty interval [{x_left}, {x_right}]")));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("nodes must be strictly increasing"));
        }
        if nodes[0] < x_left || nodes[nodes.len() - 1] > x_right {
            return Err(invalid("nodes must lie inside the interval"));
        }
        if let Some(w) = &weights {
            if w.len() != nodes.len() {
                return Err(invalid("one weight per node required"));
            }
            if w.iter().any(|&p| !(p > 0.0)) {
                return Err(invalid("weights must be positive"));
            }
            let total: f64 = w.iter().sum();
            if (total - (x_right - x_left)).abs() > 1e-13 * (x_right - x_left).max(1.0) {
                return Err(invalid(format!(
                    "weights sum to {total}, expected {}",
                    x_right - x_left
                )));
            }
        }
        let scale = (x_right - x_left).abs();
        let includes_boundary = (nodes[0] - x_left).abs() <= 1e-14 * scale
            && (nodes[nodes.len() - 1] - x_right).abs() <= 1e-14 * scale;
        Ok(Self {
            nodes,
            weights,
            includes_boundary,
            family: NodeFamily::Custom,
            x_left,
            x_right,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Affine map of the interval onto [-1, 1].
    pub fn to_unit(&self, x: f64) -> f64 {
        (2.0 * x - (self.x_left + self.x_right)) / (self.x_right - self.x_left)
    }

    /// Half width of the interval, i.e. dx/dt of the map from [-1, 1].
    pub fn half_width(&self) -> f64 {
        0.5 * (self.x_right - self.x_left)
    }
}

/// Legendre polynomial P_n and its derivative at `x` via the three-term
/// recurrence.
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    // P_n' from the standard identity; at |x| = 1 use the closed form.
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < 1e-15 {
        0.5 * nf * (nf + 1.0) * x.powi(n as i32 + 1)
    } else {
        nf * (p_prev - x * p) / (1.0 - x * x)
    };
    (p, dp)
}

fn symmetrize(nodes: &mut [f64], weights: &mut [f64]) {
    let n = nodes.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -x;
        nodes[j] = x;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}

/// Legendre–Gauss–Lobatto nodes and weights on [-1, 1].
pub fn lgl_nodes(n: usize) -> Result<NodeSet> {
    if !(2..=MAX_NODES).contains(&n) {
        return Err(invalid(format!(
            "LGL node count {n} outside 2..={MAX_NODES}"
        )));
    }
    let order = n - 1;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    nodes[0] = -1.0;
    nodes[n - 1] = 1.0;
    // Interior nodes are the roots of P_{n-1}'. Newton on P_{n-1}' using
    // (1 - x^2) P'' = 2x P' - n(n+1) P.
    for (k, node) in nodes.iter_mut().enumerate().take(n - 1).skip(1) {
        let mut x = -(std::f64::consts::PI * k as f64 / order as f64).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(order, x);
            let of = order as f64;
            let ddp = (2.0 * x * dp - of * (of + 1.0) * p) / (1.0 - x * x);
            let step = dp / ddp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        *node = x;
    }
    let nf = n as f64;
    for (w, &x) in weights.iter_mut().zip(&nodes) {
        let (p, _) = legendre(order, x);
        *w = 2.0 / (nf * (nf - 1.0) * p * p);
    }
    symmetrize(&mut nodes, &mut weights);
    Ok(NodeSet {
        nodes,
        weights: Some(weights),
        includes_boundary: true,
        family: NodeFamily::Lgl,
        x_left: -1.0,
        x_right: 1.0,
    })
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre_nodes(n: usize) -> Result<NodeSet> {
    if !(1..=MAX_NODES).contains(&n) {
        return Err(invalid(format!(
            "Gauss-Legendre node count {n} outside 1..={MAX_NODES}"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for k in 0..n {
        // Chebyshev-type initial guess, ascending order.
        let mut x = -(std::f64::consts::PI * (k as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[k] = x;
        weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    symmetrize(&mut nodes, &mut weights);
    Ok(NodeSet {
        nodes,
        weights: Some(weights),
        includes_boundary: false,
        family: NodeFamily::GaussLegendre,
        x_left: -1.0,
        x_right: 1.0,
    })
}

/// Uniformly spaced nodes including both endpoints. No weights are attached;
/// a (possibly dense) norm matrix has to be supplied separately.
pub fn equidistant_nodes(n: usize, x_left: f64, x_right: f64) -> Result<NodeSet> {
    if n < 2 {
        return Err(invalid("equidistant node set needs at least two nodes"));
    }
    if !(x_left < x_right) {
        return Err(invalid(format!("empty interval [{x_left}, {x_right}]")));
    }
    let h = (x_right - x_left) / (n - 1) as f64;
    let mut nodes: Vec<f64> = (0..n).map(|i| x_left + i as f64 * h).collect();
    nodes[n - 1] = x_right;
    Ok(NodeSet {
        nodes,
        weights: None,
        includes_boundary: true,
        family: NodeFamily::Equidistant,
        x_left,
        x_right,
    })
}
