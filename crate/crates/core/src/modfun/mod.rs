//! q-series for `Δ`, `E₄`, `j`, `J = j − 744` and `J_O'N`, and certified
//! evaluation of `J` and `θ`.
//!
//! Coefficients are exact integers; conversion to balls happens only at
//! evaluation. `J` is summed directly from its q-expansion, which converges
//! fast at reduced CM points (`|q| ≤ e^{−π√3}`); the truncation error is
//! bounded with `|c(n)| ≤ 10·e^{4π√n}`.

mod eval;
mod series;

pub use eval::{evaluate_j, evaluate_j_with, j_onan, j_onan_complex, j_table, theta, DEFAULT_MAX_TERMS};
pub use series::{discriminant_delta, eisenstein_e4, j_coefficients, j_coefficients_csv, PowerSeries};
