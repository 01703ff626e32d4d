//! Exact desk-scale solver for the electronic ground state of H2+ in
//! prolate spheroidal coordinates.
//!
//! The Born-Oppenheimer problem separates into a radial (xi) and an angular
//! (eta) ordinary differential equation coupled through the energy E and
//! the separation constant A. This crate solves the pair three independent
//! ways and cross-checks them:
//!
//! * [`angular`] expands Y(eta) over even Legendre polynomials (tridiagonal
//!   eigenproblem) and also builds the two-term exponential-ansatz
//!   decomposition whose behaviour the diagnostics report.
//! * [`radial`] solves the xi equation by a Jaffe-type series whose
//!   three-term recurrence yields the quantization condition as a
//!   continued-fraction defect.
//! * [`oracle`] integrates both equations directly (shooting with Frobenius
//!   starts) as a brute-force referee.
//!
//! [`quantize`] joins the solvability conditions into ground-state
//! eigenpairs and potential curves; [`density`] normalizes the wavefunction
//! and derives electron-density grids, axis profiles, anisotropy and
//! nuclear-cusp diagnostics.

pub mod angular;
pub mod density;
pub mod error;
pub mod geometry;
pub mod ode;
pub mod oracle;
pub mod quadrature;
pub mod quantize;
pub mod radial;
pub mod roots;

pub use error::{Error, Result};
pub use geometry::{SignConvention, SystemConfig};
pub use quantize::{SeparationPair, SolveOptions};
