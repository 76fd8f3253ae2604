//! Exact computations around Delsarte hypersurfaces and a certificate-producing
//! obstruction engine for intermediate Jacobians that split as products of
//! Jacobians of curves.
//!
//! The Klein quartic 3-fold `x0^3 x1 + x1^3 x2 + x2^3 x3 + x3^3 x4 + x4^3 x0 = 0`
//! is the motivating example: its diagonal symmetry of order 61, its cyclic
//! symmetry of order 5 and its 30-dimensional intermediate Jacobian feed the
//! engine in [`obstruction`], which derives a contradiction.

pub mod cli;
pub mod delsarte;
pub mod error;
pub mod exact;
pub mod hodge;
pub mod obstruction;
pub mod rh;
pub mod search;

pub use error::{Error, Result};
