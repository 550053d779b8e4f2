//! Exact arithmetic over GF(p) and GF(p^N), dense matrices over either, and
//! linearized polynomials.

mod field;
mod linearized;
mod matrix;

pub use field::{is_irreducible, is_prime, Elem, Field, FieldSpec, MAX_ORDER};
pub use linearized::{base_independent, LinearizedPoly};
pub use matrix::{dot, moore, vandermonde, Matrix};
