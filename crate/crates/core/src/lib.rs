//! Proper-time formulation of relativistic quantum and classical dynamics.
//!
//! * [`spectrum`]: Dirac and proper-time hydrogen levels, exact and series.
//! * [`nist`]: comparison of both against measured levels.
//! * [`sqrt_operator`]: Bessel kernels of the square-root energy operator.
//! * [`separation`]: particle/antiparticle separation of plane waves.
//! * [`classical`]: proper-velocity kinematics, orbits and fields.

// Reference constants keep all published digits, and `!(x > 0.0)` is the
// intended way to reject NaN along with non-positive values.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod bessel;
pub mod classical;
pub mod constants;
pub mod error;
pub mod nist;
pub mod quadrature;
pub mod separation;
pub mod spectrum;
pub mod sqrt_operator;

pub use constants::{load_constants, BoundState, PhysicalConstants};
pub use error::{Error, Result};
