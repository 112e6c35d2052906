use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;

use super::series::j_coefficients;
use crate::arith::{digits_to_bits, BigFloat, ComplexBall};
use crate::error::{Error, Result};
use crate::qforms::CMPoint;

/// Default cap on the number of q-expansion terms used by [`evaluate_j`].
pub const DEFAULT_MAX_TERMS: usize = 2048;

/// Safety factor on the coefficient growth bound `c(n) ≤ e^{4π√n}`.
const GROWTH_SAFETY: f64 = 10.0;

static J_TABLE: OnceLock<RwLock<Arc<Vec<BigInt>>>> = OnceLock::new();

/// Shared read-only table `c(0), c(1), …, c(n)` (at least) of `J`'s coefficients.
///
/// The table is computed on first use and regrown (never mutated in place)
/// when a caller needs more terms.
pub fn j_table(n: usize) -> Arc<Vec<BigInt>> {
    let lock = J_TABLE.get_or_init(|| RwLock::new(Arc::new(Vec::new())));
    {
        let t = lock.read().expect("j table lock poisoned");
        if t.len() > n {
            return Arc::clone(&t);
        }
    }
    let mut t = lock.write().expect("j table lock poisoned");
    if t.len() <= n {
        let target = n.max(2 * t.len()).max(256);
        let series = j_coefficients(target);
        let coeffs: Vec<BigInt> = (0..=target as i64).map(|k| series.coefficient(k)).collect();
        *t = Arc::new(coeffs);
    }
    Arc::clone(&t)
}

/// `log2` of an upper bound for `Σ_{n>terms} |c(n)| |q|^n`, given `ln|q|`.
fn tail_log2(terms: usize, ln_q: f64) -> Option<f64> {
    let n1 = (terms + 1) as f64;
    let rho = 2.0 * std::f64::consts::PI / n1.sqrt() + ln_q;
    if rho >= 0.0 {
        return None;
    }
    let first = GROWTH_SAFETY.ln() + 4.0 * std::f64::consts::PI * n1.sqrt() + n1 * ln_q;
    let total = first - (-rho.exp()).ln_1p();
    Some(total / std::f64::consts::LN_2)
}

/// Smallest number of series terms whose tail bound is below `2^-bits`, if within `max_terms`.
fn terms_needed(ln_q: f64, bits: u32, max_terms: usize) -> Option<usize> {
    let target = -(bits as f64) - 2.0;
    (1..=max_terms).find(|&n| tail_log2(n, ln_q).is_some_and(|t| t < target))
}

/// `J(z) = j(z) − 744` at a CM point, to `digits` decimal digits after the point.
pub fn evaluate_j(z: &CMPoint, digits: u32) -> Result<ComplexBall> {
    evaluate_j_with(z, digits, DEFAULT_MAX_TERMS)
}

/// [`evaluate_j`] with an explicit cap on the series length.
pub fn evaluate_j_with(z: &CMPoint, digits: u32, max_terms: usize) -> Result<ComplexBall> {
    if !z.in_fundamental_strip() {
        return Err(Error::Domain(format!("Im z below √3/2 at {z}")));
    }
    let bits = digits_to_bits(digits);
    let ln_q = -2.0 * std::f64::consts::PI * z.im_f64() * (1.0 - 1e-12);
    let terms = terms_needed(ln_q, bits, max_terms)
        .ok_or(Error::PrecisionUnachievable { digits, max_terms })?;
    let table = j_table(terms);

    // q⁻¹ amplifies the absolute error of 2π·Im z by |q⁻¹|
    let w = bits + 16 + (-ln_q / std::f64::consts::LN_2).ceil() as u32;
    let pi = BigFloat::pi(w);
    // 2π·Im z = 2π √radicand / im_den
    let two_pi_y = (&pi * &BigFloat::sqrt_int(z.radicand, w))
        .mul_i64(2)
        .div_int(z.im_den);
    let modulus = (-&two_pi_y).exp();
    let inv_modulus = two_pi_y.exp();
    // 2π·Re z, with Re z reduced into [-1/2, 1/2]
    let (num, den) = (*z.re.numer(), *z.re.denom());
    let mut r = num.rem_euclid(den);
    if 2 * r > den {
        r -= den;
    }
    let phase = pi.mul_i64(2 * r).div_int(den).expi();
    let q = phase.scale(&modulus);
    let q_inv = phase.conj().scale(&inv_modulus);

    let mut acc = ComplexBall::from_int(table[terms].clone(), w);
    for c in table[1..terms].iter().rev() {
        acc = &(&acc * &q) + &ComplexBall::from_int(c.clone(), w);
    }
    let series = &acc * &q;
    let j = &q_inv + &series;
    let (mut re, mut im) = j.into_parts();
    let tail = tail_log2(terms, ln_q).expect("tail bound exists for chosen length");
    re.add_error_log2(tail);
    im.add_error_log2(tail);
    Ok(ComplexBall::new(re, im).with_bits(bits))
}

/// `J_O'N(x) = x² − x − 393768`.
pub fn j_onan(x: &BigFloat) -> BigFloat {
    let c = BigFloat::from_int(393768, x.bits());
    &(&x.square() - x) - &c
}

/// [`j_onan`] over a complex ball.
pub fn j_onan_complex(x: &ComplexBall) -> ComplexBall {
    let c = ComplexBall::from_int(393768, x.re().bits());
    &(&x.square() - x) - &c
}

/// `θ(iv) = Σ_{n∈ℤ} e^{−π v n²}`, to `digits` decimal digits.
pub fn theta(v: &BigFloat, digits: u32) -> Result<BigFloat> {
    let v_lo = v.to_f64() - v.error_bound();
    if !(v_lo >= 1e-3) {
        return Err(Error::Domain(format!("theta needs v ≥ 1e-3, got {}", v.to_f64())));
    }
    let bits = digits_to_bits(digits);
    let w = bits + 16;
    let v_lo = v_lo * (1.0 - 1e-12);
    let target = -(w as f64) * std::f64::consts::LN_2;
    // 2·e^{-πv(N+1)²} / (1 − e^{-πv(2N+3)}) bounds the two-sided tail
    let tail_ln = |n: f64| {
        std::f64::consts::LN_2 - std::f64::consts::PI * v_lo * (n + 1.0).powi(2)
            - (-(-std::f64::consts::PI * v_lo * (2.0 * n + 3.0)).exp()).ln_1p()
    };
    let mut terms = 1usize;
    while tail_ln(terms as f64) > target {
        terms += 1;
    }
    let pi = BigFloat::pi(w);
    let x = (-(&pi * &v.with_bits(w))).exp();
    let x2 = x.square();
    let mut power = x.clone();
    let mut step = &x2 * &x;
    let mut sum = x.clone();
    for _ in 2..=terms {
        power = &power * &step;
        step = &step * &x2;
        sum = &sum + &power;
    }
    let mut theta = &BigFloat::from_int(1, w) + &sum.mul_i64(2);
    theta.add_error_log2(tail_ln(terms as f64) / std::f64::consts::LN_2);
    Ok(theta.with_bits(bits))
}
