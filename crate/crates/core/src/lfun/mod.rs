//! Dirichlet `L(1, χ_D)`, the curve families `E_N(D)`, point counting,
//! `L_E(1)` by exponential smoothing, and the `p = 11, 19` Selmer indicator.

mod curve;
mod dirichlet;
mod lseries;
mod selmer;

pub use curve::{count_points, curve, within_hasse, CurveSpec, FAMILIES, MAX_PRIME};
pub use dirichlet::{class_number_from_l, dirichlet_l1};
pub use lseries::{dirichlet_coefficients, l_value_at_1, LSeriesData, ROOT_NUMBER_TOLERANCE};
pub use selmer::{
    curve_report, selmer_indicator, ApEntry, CurveReport, LValueSummary, SelmerIndicator, BSD_LABEL,
};
