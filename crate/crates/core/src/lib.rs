//! Permanents, permanental polynomials and their correlation functions for
//! classical random-matrix ensembles.
//!
//! The crate is organised bottom-up:
//!
//! * [`matrix`] – dense complex matrices and polynomials.
//! * [`perm`] – exact permanent kernels (naive, Ryser, Glynn, contour
//!   quadrature), permanental polynomial coefficients and the Gaussian
//!   Monte-Carlo permanent estimator.
//! * [`ensembles`] – GUE, GOE, CUE, Ginibre and unitary-invariant samplers.
//! * [`orthopoly`] – monic orthogonal polynomials and Gauss quadrature for
//!   measures `exp(-N V(x)) dx`.
//! * [`closed_forms`] – closed-form expectations, group integrals and the
//!   large-N potentials used as oracles.
//! * [`montecarlo`] – reproducible parallel estimators tying samplers to
//!   oracles.
//! * [`roots`] – permanental root clouds and density histograms.
//! * [`verify`] – named check suites combining all of the above.

pub mod closed_forms;
pub mod ensembles;
mod error;
pub mod matrix;
pub mod montecarlo;
pub mod orthopoly;
pub mod perm;
pub mod roots;
pub mod special;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{CMatrix, Poly};

/// Complex double-precision scalar used throughout.
pub type C64 = num_complex::Complex64;
