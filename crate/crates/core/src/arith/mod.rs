//! Exact arithmetic: integers and rationals, quadratic fields, number fields
//! with explicit automorphisms, and small finite fields.

pub mod ff;
pub mod int;
pub mod numfield;
pub mod poly;
pub mod quad;

pub use ff::{Fe, Fq};
pub use int::{
    factor, int, integer_nth_root, is_prime, padic_val, prime_divisors, radical_outside, rat, Int,
    Rat, Valuation,
};
pub use numfield::{nf_norm, Automorphism, NfElem, NumberField};
pub use quad::{is_square_quad, quad_norm, QuadElem};
