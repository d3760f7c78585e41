//! Numerical engine for rearrangement-invariant spaces on (0, 1).

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod equivharness;
pub mod error;
pub mod interpolation;
pub mod kfunctional;
pub mod logcalc;
pub mod norms;
pub mod rearrangement;

pub use config::NumConfig;
pub use error::{Error, Result};
