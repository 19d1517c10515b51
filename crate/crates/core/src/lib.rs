//! Bounding perfect powers in elliptic divisibility sequences on
//! y² = x³ + Dx with Frey ℚ-curves and the modular method.

pub mod arith;
pub mod conductor;
pub mod curve;
pub mod descent2;
pub mod eds;
pub mod elimination;
pub mod error;
pub mod frey;
pub mod galois_cocycle;
pub mod irreducibility;
pub mod newforms;
pub mod power_descent;

pub use error::{Error, Result};
