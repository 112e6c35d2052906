//! `a(D) = dim W_D` as a weighted trace of singular moduli:
//!
//! ```text
//! a(D) = Σ_{[Q], disc Q = D} J_O'N(z_Q) / w_Q
//! ```
//!
//! The sum is taken over all reduced forms of discriminant `D` (imprimitive
//! ones included). Each term is evaluated as a complex ball; the total,
//! cleared of denominators by 12, must lie within 0.25 of an integer or the
//! evaluation is repeated at doubled precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_square_mod, BigFloat, ComplexBall, Discriminant};
use crate::error::{Error, Result};
use crate::modfun::{evaluate_j, j_onan_complex};
use crate::qforms::{class_number, class_representatives};

/// Distance from the nearest integer (after scaling by 12) that certification tolerates.
pub const CERTIFICATION_THRESHOLD: f64 = 0.25;

/// Precision doublings attempted after the first evaluation.
pub const MAX_RETRIES: u32 = 3;

/// A certified trace.
#[derive(Clone, Debug)]
pub struct TraceResult {
    pub d: Discriminant,
    /// The certified integer `a(D)`.
    pub a: BigInt,
    /// The real part of the raw weighted sum.
    pub raw: BigFloat,
    /// Upper bound on `dist(12·raw, ℤ) / 12`.
    pub residual: f64,
    pub class_count: usize,
    /// Reduced forms with `gcd(A, B, C) > 1` included in the sum.
    pub imprimitive_classes: usize,
    pub precision_digits: u32,
    /// 1 when the first precision sufficed.
    pub attempts: u32,
}

/// Default precision: `⌈π√|D| / ln 10⌉ + 40` digits after the point.
pub fn default_precision(d: Discriminant) -> u32 {
    (std::f64::consts::PI * (d.abs() as f64).sqrt() / std::f64::consts::LN_10).ceil() as u32 + 40
}

enum Attempt {
    Certified { twelve_a: BigInt, sum12: BigFloat, residual: f64 },
    Uncertified { residual: f64 },
}

fn attempt(d: Discriminant, digits: u32) -> Result<Attempt> {
    let reps = class_representatives(d);
    let mut sum12: Option<ComplexBall> = None;
    for q in &reps {
        let z = q.cm_point()?;
        let j = evaluate_j(&z, digits)?;
        let factor = 12 / q.weight()? as i64;
        let term = j_onan_complex(&j).mul_i64(factor);
        sum12 = Some(match sum12 {
            None => term,
            Some(s) => &s + &term,
        });
    }
    let (re, im) = sum12.expect("every discriminant has a reduced form").into_parts();
    let im_bound = im.abs_upper_f64();
    let (n, dist) = re.nearest_integer();
    if dist < CERTIFICATION_THRESHOLD && im_bound < CERTIFICATION_THRESHOLD {
        Ok(Attempt::Certified {
            twelve_a: n,
            sum12: re,
            residual: dist / 12.0,
        })
    } else {
        Ok(Attempt::Uncertified {
            residual: dist.max(im_bound) / 12.0,
        })
    }
}

/// Computes and certifies `a(D)`, doubling the precision up to [`MAX_RETRIES`] times.
pub fn trace(d: Discriminant, precision: Option<u32>) -> Result<TraceResult> {
    let mut digits = precision.unwrap_or_else(|| default_precision(d));
    let mut last_residual = f64::INFINITY;
    for attempts in 1..=MAX_RETRIES + 1 {
        match attempt(d, digits)? {
            Attempt::Certified { twelve_a, sum12, residual } => {
                let (a, rem) = twelve_a.div_rem(&BigInt::from(12));
                if !rem.is_zero() {
                    return Err(Error::NonIntegralTrace {
                        d: d.value(),
                        twelve_a: twelve_a.to_string(),
                    });
                }
                let reps = class_representatives(d);
                return Ok(TraceResult {
                    d,
                    a,
                    raw: sum12.div_int(12),
                    residual,
                    class_count: reps.len(),
                    imprimitive_classes: reps.iter().filter(|q| !q.is_primitive()).count(),
                    precision_digits: digits,
                    attempts,
                });
            }
            Attempt::Uncertified { residual } => {
                last_residual = residual;
                digits *= 2;
            }
        }
    }
    Err(Error::CertificationFailed {
        d: d.value(),
        residual: last_residual,
        attempts: MAX_RETRIES + 1,
    })
}

/// Traces for every valid discriminant in `[d_min, d_max]`, ordered by descending `D`.
///
/// Discriminants are evaluated in parallel; the output order does not depend on scheduling.
pub fn trace_table(d_min: i64, d_max: i64) -> Result<Vec<TraceResult>> {
    if d_min > d_max || d_max >= 0 {
        return Err(Error::Domain(format!("invalid range [{d_min}, {d_max}]")));
    }
    let ds: Vec<Discriminant> = Discriminant::range_desc(d_min, d_max).collect();
    ds.par_iter()
        .map(|&d| trace(d, None).map_err(|e| Error::at(d.value(), e)))
        .collect()
}

/// The class-number side of the congruences: `−24·h(D)`, weight-corrected at `D = −3, −4`.
pub fn weighted_class_term(d: Discriminant) -> Result<i64> {
    let h = class_number(d)? as i64;
    Ok(match d.value() {
        -3 => -8,
        -4 => -12,
        _ => -24 * h,
    })
}

/// One modulus of the class-number congruences for `a(D)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceCheck {
    pub modulus: u32,
    pub applicable: bool,
    pub a_residue: u32,
    pub term_residue: u32,
}

impl CongruenceCheck {
    pub fn holds(&self) -> bool {
        self.a_residue == self.term_residue
    }

    /// `Some(pass)` when applicable.
    pub fn outcome(&self) -> Option<bool> {
        self.applicable.then(|| self.holds())
    }
}

/// Moduli checked for a fundamental discriminant, in report order.
pub const CONGRUENCE_MODULI: [u32; 4] = [16, 9, 5, 7];

/// Whether the congruence modulo `modulus` applies to the fundamental discriminant `d`.
///
/// 16: `D < −8` even; 9: `D` not a square mod 3; 5 and 7: `D` not a square mod 5, 7.
pub fn congruence_applies(d: Discriminant, modulus: u32) -> bool {
    let dv = d.value();
    let non_square = |p: u64| !is_square_mod(dv, p).expect("prime modulus");
    match modulus {
        16 => d.is_even() && dv < -8,
        9 => non_square(3),
        5 => non_square(5),
        7 => non_square(7),
        _ => false,
    }
}

fn residue(x: &BigInt, m: u32) -> u32 {
    x.mod_floor(&BigInt::from(m)).to_u32().expect("residue fits")
}

/// The four congruence checks `a(D) ≡ term (mod m)` for `m ∈ {16, 9, 5, 7}`.
pub fn congruence_checks(d: Discriminant, a: &BigInt, term: i64) -> Vec<CongruenceCheck> {
    let t = BigInt::from(term);
    CONGRUENCE_MODULI
        .iter()
        .map(|&m| CongruenceCheck {
            modulus: m,
            applicable: congruence_applies(d, m),
            a_residue: residue(a, m),
            term_residue: residue(&t, m),
        })
        .collect()
}

/// Serializable view of a [`TraceResult`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub d: i64,
    pub fundamental: bool,
    pub a: String,
    pub raw: String,
    pub error_bound: f64,
    pub residual: f64,
    pub class_count: usize,
    pub imprimitive_classes: usize,
    pub precision_digits: u32,
    pub attempts: u32,
}

impl From<&TraceResult> for TraceRecord {
    fn from(t: &TraceResult) -> Self {
        TraceRecord {
            d: t.d.value(),
            fundamental: t.d.is_fundamental(),
            a: t.a.to_string(),
            raw: t.raw.to_decimal(12),
            error_bound: t.raw.error_bound(),
            residual: t.residual,
            class_count: t.class_count,
            imprimitive_classes: t.imprimitive_classes,
            precision_digits: t.precision_digits,
            attempts: t.attempts,
        }
    }
}
