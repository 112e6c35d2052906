//! Arithmetic engine for O'Nan moonshine.
//!
//! The crate computes the dimensions `a(D)` of the moonshine modules `W_D`
//! as weighted traces of the singular moduli `J_O'N(z_Q)` over classes of
//! positive definite binary quadratic forms, checks the class-number
//! congruences those dimensions satisfy, and evaluates the elliptic-curve
//! families whose Selmer groups the congruences predict.
//!
//! Module map:
//! - [`arith`]: ball arithmetic ([`BigFloat`]), discriminants and the Kronecker symbol.
//! - [`qforms`]: reduction, class enumeration, weights, CM points, `Γ₀(p)` class numbers.
//! - [`modfun`]: exact q-series for `j`, certified evaluation of `J` and `θ`.
//! - [`traces`]: the trace formula for `a(D)` with certified integer rounding.
//! - [`lfun`]: Dirichlet `L(1, χ_D)`, the curve families `E₁₁, E₁₄, E₁₅, E₁₉`, point counts and `L_E(1)`.
//! - [`scan`], [`report`], [`cache`]: range scans, versioned JSON/CSV reports and the on-disk trace cache.

pub mod arith;
pub mod cache;
pub mod error;
pub mod lfun;
pub mod modfun;
pub mod qforms;
pub mod report;
pub mod scan;
pub mod traces;

pub use arith::{BigFloat, ComplexBall, Discriminant};
pub use error::{Error, Result};
pub use qforms::{CMPoint, QuadraticForm};
pub use traces::TraceResult;

/// Engine version recorded in every report.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
