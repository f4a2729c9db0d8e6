//! Boundary-only meshless PDE solver built on nonsingular general solutions
//! with radial-basis-function particular solutions.

// Negated float comparisons send NaN to the rejection branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod bkm;
pub mod cli;
pub mod drm;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod quad;
pub mod rbf;
pub mod structmat;

pub use error::{Error, Result};
