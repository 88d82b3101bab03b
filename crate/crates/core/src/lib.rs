//! Extremal functions for the radial operators `Λ_m` and `Λ_m*`, closed-form
//! weak-type ratio functionals, their maximization, and verification suites.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod families;
pub mod functionals;
pub mod operators;
pub mod optimize;
pub mod piecewise;
pub mod quadrature;
pub mod roots;
pub mod verify;

pub use error::{Error, Result};
