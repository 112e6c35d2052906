//! Integer and arbitrary-precision foundations.
//!
//! [`BigFloat`] is a midpoint-radius ball over a fixed-point grid: the value
//! `mid · 2^-bits` with absolute error at most `rad · 2^-bits`. Every ring
//! operation widens the radius so that the true result stays enclosed, which
//! is what lets the trace module certify integer roundings.

mod bigfloat;
mod complex;
mod discriminant;

pub use bigfloat::{digits_to_bits, BigFloat};
pub use complex::ComplexBall;
pub use discriminant::{
    is_fundamental, is_prime, is_square_mod, is_squarefree, kronecker, kronecker_chi,
    Discriminant,
};
