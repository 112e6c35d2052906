use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{digits_to_bits, kronecker, BigFloat, Discriminant};
use crate::error::{Error, Result};

/// Full periods of `χ_D` summed directly before switching to the tail expansion.
const BLOCKS: u64 = 4;

static BERNOULLI: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();

/// `B_0, …, B_n` (with `B_1 = −1/2`).
fn bernoulli(n: usize) -> Vec<BigRational> {
    let lock = BERNOULLI.get_or_init(|| Mutex::new(vec![BigRational::one()]));
    let mut b = lock.lock().expect("bernoulli table poisoned");
    while b.len() <= n {
        let m = b.len();
        // Σ_{k<m} C(m+1, k) B_k = −(m+1) B_m
        let mut binom = BigInt::one();
        let mut s = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += bk * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b[..=n].to_vec()
}

/// Upper bound on `log2 |x|` for a nonzero rational.
fn log2_upper(x: &BigRational) -> f64 {
    x.numer().bits() as f64 - (x.denom().bits() as f64 - 1.0)
}

fn ball(x: &BigRational, bits: u32) -> BigFloat {
    BigFloat::from_ratio(x.numer().clone(), x.denom().clone(), bits)
}

/// `Σ_{m ≥ from} m^{-s}` for `s ≥ 2`, to roughly `2^-bits`.
///
/// Sums directly up to a cut `L`, then applies Euler–Maclaurin with the
/// remainder bounded by twice the first omitted term.
pub(crate) fn zeta_tail(s: u32, from: u64, bits: u32) -> BigFloat {
    assert!(s >= 2 && from >= 1);
    let r = (bits as u64 / 5 + 4) as usize;
    let cut = from.max(s as u64 + 2 * r as u64 + 2);
    let w = bits + 8 + 64 - (cut - from + 1).leading_zeros();
    let mut acc = BigFloat::zero(w);
    for m in from..cut {
        acc = &acc + &BigFloat::from_ratio(1, BigInt::from(m).pow(s), w);
    }
    let l = BigInt::from(cut);
    let big_l = |e: u32| BigRational::from_integer(l.pow(e));
    // ∫_L^∞ x^{-s} dx + L^{-s}/2
    let mut exact = BigRational::one() / (big_l(s - 1) * BigInt::from(s - 1))
        + BigRational::one() / (big_l(s) * BigInt::from(2));
    let b = bernoulli(2 * r + 2);
    let term = |k: usize| {
        // B_{2k}/(2k)! · s(s+1)…(s+2k−2) · L^{−s−2k+1}
        let mut rising = BigInt::one();
        for i in 0..(2 * k - 1) as u32 {
            rising *= s + i;
        }
        let mut fact = BigInt::one();
        for i in 1..=2 * k {
            fact *= i;
        }
        &b[2 * k] * BigRational::new(rising, fact) / big_l(s + 2 * k as u32 - 1)
    };
    for k in 1..=r {
        exact += term(k);
    }
    let mut total = &acc + &ball(&exact, w);
    total.add_error_log2(log2_upper(&term(r + 1)) + 1.0);
    total.with_bits(bits)
}

/// `L(1, χ_D)` for fundamental `D < −4`, to `digits` decimal digits after the point.
///
/// The series is summed over the first few full periods of `χ_D`; the rest is
/// written block by block as `Σ_a χ(a)/(mk + a)`, expanded in powers of
/// `a/(mk)` (the constant term vanishes since `χ` sums to zero over a period)
/// and resummed with Hurwitz-type tails `Σ_{m≥M} m^{-j-1}`.
pub fn dirichlet_l1(d: Discriminant, digits: u32) -> Result<BigFloat> {
    if d.value() >= -4 {
        return Err(Error::Domain(format!("dirichlet_L1 needs D < -4, got {}", d.value())));
    }
    if !d.is_fundamental() {
        return Err(Error::NotFundamental(d.value()));
    }
    let k = d.abs();
    let chi: Vec<i8> = (0..=k)
        .map(|n| if n == 0 { 0 } else { kronecker(d.value(), n) })
        .collect();
    let head = BLOCKS * k;
    let bits = digits_to_bits(digits) + 8;
    let w = bits + 64 - head.leading_zeros() + 8;

    let mut partial = BigFloat::zero(w);
    for n in 1..=head {
        let c = chi[(n % k) as usize];
        if c != 0 {
            partial = &partial + &BigFloat::from_ratio(c as i64, n, w);
        }
    }

    // J terms leave a remainder ≤ (1/(J+1) + 1/k)(M^{-J-1} + M^{-J}/J)
    let m = BLOCKS as f64;
    let target = -(bits as f64);
    let remainder_log2 = |j: f64| {
        ((1.0 / (j + 1.0) + 1.0 / k as f64) * (m.powf(-j - 1.0) + m.powf(-j) / j)).log2()
    };
    let mut jmax = 1u32;
    while remainder_log2(jmax as f64) > target {
        jmax += 1;
    }

    // S_j = Σ_a χ(a) a^j, exact
    let mut sums = vec![BigInt::zero(); jmax as usize + 1];
    for a in 1..k {
        let c = chi[a as usize];
        if c == 0 {
            continue;
        }
        let mut pw = BigInt::from(a);
        for s in sums.iter_mut().skip(1) {
            if c > 0 {
                *s += &pw;
            } else {
                *s -= &pw;
            }
            pw *= a;
        }
    }

    let kk = BigInt::from(k);
    let mut tail = BigFloat::zero(w);
    for j in 1..=jmax {
        let sj = &sums[j as usize];
        if sj.is_zero() {
            continue;
        }
        // (−1)^j S_j / k^{j+1} · Z_{j+1}(M)
        let coef = BigRational::new(sj.clone(), kk.pow(j + 1));
        let coef = if j % 2 == 1 { -coef } else { coef };
        let scale = (log2_upper(&coef.abs()).max(0.0)) as u32;
        let z = zeta_tail(j + 1, BLOCKS, w + scale);
        tail = &tail + &(&ball(&coef, w + scale) * &z).with_bits(w);
    }
    let mut l = &partial + &tail;
    l.add_error_log2(remainder_log2(jmax as f64));
    Ok(l.with_bits(bits))
}

/// `h(D)` recovered as `round(√|D| · L(1, χ_D) / π)`, with the distance to the integer.
pub fn class_number_from_l(d: Discriminant) -> Result<(u64, f64)> {
    let l = dirichlet_l1(d, 12)?;
    let bits = l.bits();
    let x = (&l * &BigFloat::sqrt_int(d.abs(), bits)).div(&BigFloat::pi(bits))?;
    let (n, dist) = x.nearest_integer();
    let h = u64::try_from(n).map_err(|_| Error::Domain("negative class number".into()))?;
    Ok((h, dist))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    fn assert_close(x: &BigFloat, reference: &str, tol: f64) {
        let digits = reference.len() - reference.find('.').unwrap() - 1;
        let got = x.to_decimal(digits);
        assert_eq!(&got[..got.len() - 1], &reference[..reference.len() - 1]);
        assert!(x.error_bound() < tol);
    }

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli(12);
        assert_eq!(b[1], BigRational::new((-1).into(), 2.into()));
        assert_eq!(b[2], BigRational::new(1.into(), 6.into()));
        assert_eq!(b[4], BigRational::new((-1).into(), 30.into()));
        assert_eq!(b[12], BigRational::new((-691).into(), 2730.into()));
        assert!(b[7].is_zero());
    }

    #[test]
    fn zeta_tail_matches_zeta_two() {
        // ζ(2) − 1 − 1/4 − 1/9
        let z = zeta_tail(2, 4, 200);
        let pi = BigFloat::pi(200);
        let expect = &(&pi.square()).div_int(6) - &BigFloat::from_ratio(49, 36, 200);
        assert!(z.overlaps(&expect));
        assert!(z.error_bound() < 1e-50);
    }

    #[test]
    fn class_number_formula_examples() {
        assert_close(&dirichlet_l1(disc(-7), 20).unwrap(), "1.18741041172372594878", 1e-19);
        assert_close(&dirichlet_l1(disc(-20), 20).unwrap(), "1.40496294620814527863", 1e-19);
        assert_close(&dirichlet_l1(disc(-8), 20).unwrap(), "1.11072073453959156175", 1e-19);
    }

    #[test]
    fn rejects_small_and_non_fundamental() {
        assert!(dirichlet_l1(disc(-4), 10).is_err());
        assert!(dirichlet_l1(disc(-3), 10).is_err());
        assert!(matches!(dirichlet_l1(disc(-12), 10), Err(Error::NotFundamental(-12))));
    }

    #[test]
    fn recovers_class_numbers() {
        for (d, h) in [(-7, 1), (-15, 2), (-23, 3), (-47, 5), (-71, 7), (-163, 1), (-4027, 9)] {
            let (got, dist) = class_number_from_l(disc(d)).unwrap();
            assert_eq!(got, h, "D = {d}");
            assert!(dist < 1e-6);
        }
    }
}
