//! Moments of the derivative of characteristic polynomials of random unitary
//! matrices (CUE), computed three ways: exact finite-N formulas, large-N
//! closed forms in the global / mesoscopic / microscopic regimes, and Monte
//! Carlo over Haar-distributed spectra. A companion module evaluates the
//! matching Dirichlet-series quantities for the Riemann zeta function.
//!
//! The crate is `no_std` (with `alloc`); the `cuemom` crate adds IO, the
//! command-line interface, and parallel sampling.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod asymptotics;
pub mod combinatorics;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod mc;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod specfun;
pub mod zeta;

pub use error::{Error, Result};
pub use scalar::{ExactNumber, Mode};

/// Version of this crate, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
