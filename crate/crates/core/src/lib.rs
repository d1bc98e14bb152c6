//! Numerical laboratory for spectral-radius inequalities of positive operators.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
#[cfg(feature = "cli")]
pub mod cli;
pub mod eig;
pub mod error;
pub mod falsify;
pub mod linops;
pub mod nystrom;
pub mod perron;

pub use error::{Error, Result};
pub use linops::PositiveOperator;
