//! Shintani L-functions of several variables: evaluation in ordinary,
//! normalized and completed forms, plus residual checks for the identities
//! they satisfy.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod kernel;
pub mod lfunction;
pub mod quadrature;
pub mod series;
pub mod suite;
pub mod taylor;

pub use error::{Error, Result};
