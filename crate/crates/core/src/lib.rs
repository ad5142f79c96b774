//! Numerical toolkit for the geometric α-stable process, the Lévy process
//! with symbol `ψ(ξ) = log(1 + |ξ|^α)`.
//!
//! The core is generic over the floating-point scalar ([`Real`]); the
//! `*F64` aliases below fix it to `f64`.

// `!(x > 0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod quadrature;
pub mod radial;
pub mod real;
pub mod special;

pub mod levy;
pub mod process;
pub mod schrodinger;
pub mod stable;
pub mod transition;
pub mod verify;

pub use error::{Error, Result};
pub use process::{ProcessSpec, RecurrenceClass};
pub use real::Real;

pub type ProcessSpecF64 = ProcessSpec<f64>;
pub type ProcessSpecF32 = ProcessSpec<f32>;
