//! JSON export and import of USBP operator pairs.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::nodes::{NodeFamily, NodeSet};
use super::sbp::SbpOperator;
use super::usbp::UsbpPair;
use crate::error::{invalid, Result};

/// Row-major, full-precision representation of a USBP pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorBundle {
    pub family: NodeFamily,
    #[serde(rename = "N")]
    pub n: usize,
    pub degree: usize,
    pub interval: [f64; 2],
    pub nodes: Vec<f64>,
    pub weights: Option<Vec<f64>>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<f64>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<f64>>,
    #[serde(rename = "Dplus")]
    pub d_plus: Vec<Vec<f64>>,
    #[serde(rename = "Dminus")]
    pub d_minus: Vec<Vec<f64>>,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn matrix(name: &str, rows: &[Vec<f64>], n: usize) -> Result<DMatrix<f64>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(invalid(format!("{name} must be {n}x{n}")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

impl OperatorBundle {
    pub fn from_pair(pair: &UsbpPair) -> Self {
        let nodes = &pair.base.nodes;
        Self {
            family: nodes.family,
            n: pair.len(),
            degree: pair.degree,
            interval: [nodes.x_left, nodes.x_right],
            nodes: nodes.nodes.clone(),
            weights: nodes.weights.clone(),
            p: rows(&pair.base.p),
            q: rows(&pair.base.q),
            b: rows(&pair.base.b),
            s: rows(&pair.s),
            d_plus: rows(&pair.d_plus),
            d_minus: rows(&pair.d_minus),
        }
    }

    /// Rebuild the pair. The central `D` is recomputed as `P⁻¹(Q + B/2)`.
    pub fn to_pair(&self) -> Result<UsbpPair> {
        let n = self.n;
        if self.nodes.len() != n {
            return Err(invalid("node count does not match N"));
        }
        let nodes = NodeSet {
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
            includes_boundary: self.nodes.first() == Some(&self.interval[0])
                && self.nodes.last() == Some(&self.interval[1]),
            family: self.family,
            x_left: self.interval[0],
            x_right: self.interval[1],
        };
        let p = matrix("P", &self.p, n)?;
        let q = matrix("Q", &self.q, n)?;
        let b = matrix("B", &self.b, n)?;
        let mut base = SbpOperator {
            nodes,
            p,
            q,
            b,
            d: DMatrix::zeros(n, n),
            degree: self.degree,
        };
        base.d = base.solve_norm(&(&base.q + &base.b * 0.5))?;
        Ok(UsbpPair {
            base,
            s: matrix("S", &self.s, n)?,
            d_plus: matrix("Dplus", &self.d_plus, n)?,
            d_minus: matrix("Dminus", &self.d_minus, n)?,
            q_plus: DMatrix::zeros(n, n),
            q_minus: DMatrix::zeros(n, n),
            degree: self.degree,
        })
        .map(|mut pair| {
            pair.q_plus = &pair.base.q + &pair.s * 0.5;
            pair.q_minus = &pair.base.q - &pair.s * 0.5;
            pair
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
