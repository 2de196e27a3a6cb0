//! Node sets, SBP operators, DOP bases, dissipation matrices and USBP pairs.

pub mod dissipation;
pub mod dop;
pub mod export;
pub mod nodes;
pub mod sbp;
pub mod usbp;

pub use dissipation::{dissipation_matrix, DissipationSpec};
pub use dop::{dop_basis, DopBasis};
pub use export::OperatorBundle;
pub use nodes::{equidistant_nodes, gauss_legendre_nodes, lgl_nodes, NodeFamily, NodeSet};
pub use sbp::{dense_norm_sbp_4pt, lagrange_sbp, SbpOperator};
pub use usbp::{build_usbp, verify_usbp, InvariantCheck, UsbpPair, VerificationReport};

use crate::error::Result;

/// USBP pair on `n` LGL nodes damping only the highest DOP mode with
/// eigenvalue `lambda` of `S`. The degree is `n - 2` (or `n - 1` for
/// `lambda == 0`).
pub fn build_lgl_usbp(n: usize, lambda: f64) -> Result<UsbpPair> {
    let nodes = lgl_nodes(n)?;
    let base = lagrange_sbp(&nodes)?;
    let spec = DissipationSpec::top_mode(n, lambda)?;
    let s = dissipation_matrix(&dop_basis(&nodes)?, &spec)?;
    build_usbp(&base, &s, spec.degree)
}

/// Same as [`build_lgl_usbp`] for an arbitrary spectrum.
pub fn build_lgl_usbp_with(spec: &DissipationSpec) -> Result<UsbpPair> {
    let nodes = lgl_nodes(spec.eigenvalues.len())?;
    let base = lagrange_sbp(&nodes)?;
    let s = dissipation_matrix(&dop_basis(&nodes)?, spec)?;
    build_usbp(&base, &s, spec.degree)
}
