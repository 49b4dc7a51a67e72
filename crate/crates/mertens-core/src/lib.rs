//! Core library for quadratic-field Mertens bias computations.

// Frozen reference constants deliberately carry guard digits beyond f64
// precision so the decimal source of each value is documented in full.
#![allow(clippy::excessive_precision)]
// Guards written as `!(x > bound)` are NaN-rejecting by construction;
// rewriting them as `x <= bound` would silently accept NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod error;
pub mod field;
pub mod numerics;
pub mod observables;
pub mod sieve;
pub mod zeros;

pub use error::{Error, Result};
pub use field::Field;
