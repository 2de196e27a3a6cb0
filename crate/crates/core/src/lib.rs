//! Upwind summation-by-parts (USBP) operators and a nodal discontinuous
//! Galerkin solver built on them.
//!
//! The crate is organised bottom-up:
//!
//! * [`operators`]: node sets, central SBP operators, discrete orthogonal
//!   polynomial bases, dissipation matrices and USBP pairs.
//! * [`physics`]: advection, Burgers and compressible Euler, plus flux vector
//!   splittings.
//! * [`semidisc`]: method-of-lines right-hand sides on 1D, 2D Cartesian and
//!   2D curvilinear meshes.
//! * [`timeint`]: fixed-step explicit Runge–Kutta integration.
//! * [`analysis`]: error norms, convergence rates, operator assembly and
//!   spectra.

pub mod analysis;
pub mod error;
pub mod operators;
pub mod physics;
pub mod semidisc;
pub mod timeint;

pub use error::{Error, Result, SimulationAbort, Violation};
