use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Fractional bits needed for `digits` decimal digits after the point, plus guard bits.
pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + 16
}

/// A real number enclosed in the ball `(mid ± rad) · 2^-bits`.
///
/// `bits` is an absolute (fixed-point) precision: values of very different
/// magnitude carry the same absolute resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFloat {
    mid: BigInt,
    rad: BigUint,
    bits: u32,
}

/// `round(x / 2^s)` and whether the division was exact.
fn shr_round(x: &BigInt, s: u32) -> (BigInt, bool) {
    if s == 0 {
        return (x.clone(), true);
    }
    let exact = x.is_zero() || x.trailing_zeros().is_some_and(|tz| tz >= s as u64);
    let half = BigInt::one() << (s - 1);
    ((x + half) >> s, exact)
}

fn shr_ceil(x: &BigUint, s: u32) -> BigUint {
    if s == 0 {
        return x.clone();
    }
    let mask = (BigUint::one() << s) - 1u32;
    (x + mask) >> s
}

/// `x · 2^-shift` as an f64, for magnitudes well inside the f64 range.
fn scaled_f64(x: &BigUint, shift: i64) -> f64 {
    let len = x.bits() as i64;
    if len == 0 {
        return 0.0;
    }
    let drop = (len - 64).max(0);
    let top = (x >> drop as u64).to_f64().unwrap_or(f64::INFINITY);
    let e = drop - shift;
    top * 2f64.powi(e.clamp(-2000, 2000) as i32)
}

/// Smallest integer count of `2^-bits` ulps covering `2^log2_bound`.
fn ulps_from_log2(log2_bound: f64, bits: u32) -> BigUint {
    let e = log2_bound + bits as f64;
    if e < 0.0 {
        return BigUint::one();
    }
    let whole = e.floor();
    let frac = e - whole;
    // 2^frac ∈ [1, 2) represented with 52 fractional bits, rounded up generously.
    let mant = ((2f64.powf(frac) * (1.0 + 1e-12)) * 2f64.powi(52)).ceil() as u64;
    let m = BigUint::from(mant);
    let w = whole as i64 - 52;
    if w >= 0 {
        m << w as u64
    } else {
        shr_ceil(&m, (-w) as u32) + 1u32
    }
}

impl BigFloat {
    pub fn zero(bits: u32) -> Self {
        BigFloat {
            mid: BigInt::zero(),
            rad: BigUint::zero(),
            bits,
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T, bits: u32) -> Self {
        BigFloat {
            mid: v.into() << bits,
            rad: BigUint::zero(),
            bits,
        }
    }

    /// The rational `num / den`, correctly rounded to the grid.
    pub fn from_ratio<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D, bits: u32) -> Self {
        let num: BigInt = num.into();
        let den: BigInt = den.into();
        assert!(!den.is_zero(), "zero denominator");
        let scaled = num << bits;
        let (q, r) = div_round(&scaled, &den);
        BigFloat {
            mid: q,
            rad: if r { BigUint::zero() } else { BigUint::one() },
            bits,
        }
    }

    /// `sqrt(n)` for a non-negative integer.
    pub fn sqrt_int<T: Into<BigUint>>(n: T, bits: u32) -> Self {
        let n: BigUint = n.into();
        let scaled = n << (2 * bits as u64);
        let s = scaled.sqrt();
        let exact = &s * &s == scaled;
        BigFloat {
            mid: BigInt::from(s),
            rad: if exact { BigUint::zero() } else { BigUint::one() },
            bits,
        }
    }

    /// Builds a ball from raw parts: `(mid ± rad) · 2^-bits`.
    pub fn from_parts(mid: BigInt, rad: BigUint, bits: u32) -> Self {
        BigFloat { mid, rad, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Decimal digits after the point carried by the grid.
    pub fn precision_digits(&self) -> u32 {
        (self.bits as f64 / LOG2_10).floor() as u32
    }

    pub fn mid_raw(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad_raw(&self) -> &BigUint {
        &self.rad
    }

    /// Re-expresses the ball on a grid with `bits` fractional bits.
    pub fn with_bits(&self, bits: u32) -> Self {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = bits - self.bits;
                BigFloat {
                    mid: &self.mid << s,
                    rad: &self.rad << s,
                    bits,
                }
            }
            Ordering::Less => {
                let s = self.bits - bits;
                let (mid, exact) = shr_round(&self.mid, s);
                let mut rad = shr_ceil(&self.rad, s);
                if !exact {
                    rad += 1u32;
                }
                BigFloat { mid, rad, bits }
            }
        }
    }

    fn aligned(a: &BigFloat, b: &BigFloat) -> (BigFloat, BigFloat) {
        let bits = a.bits.max(b.bits);
        (a.with_bits(bits), b.with_bits(bits))
    }

    /// Upper bound on the magnitude of any point in the ball.
    fn mag_upper(&self) -> BigUint {
        self.mid.magnitude() + &self.rad
    }

    /// Upper bound on `log2 |x|` over the ball (−∞ when the ball is `{0}`).
    pub fn log2_upper(&self) -> f64 {
        let m = self.mag_upper();
        if m.is_zero() {
            return f64::NEG_INFINITY;
        }
        let len = m.bits() as f64;
        // m < 2^len
        len - self.bits as f64
    }

    /// Upper bound of `|x|` as an f64.
    pub fn abs_upper_f64(&self) -> f64 {
        scaled_f64(&self.mag_upper(), self.bits as i64) * (1.0 + 1e-12)
    }

    pub fn to_f64(&self) -> f64 {
        let v = scaled_f64(self.mid.magnitude(), self.bits as i64);
        if self.mid.is_negative() {
            -v
        } else {
            v
        }
    }

    /// Upper bound on the absolute error.
    pub fn error_bound(&self) -> f64 {
        scaled_f64(&self.rad, self.bits as i64) * (1.0 + 1e-12)
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.magnitude() <= &self.rad
    }

    pub fn is_positive(&self) -> bool {
        self.mid.is_positive() && self.mid.magnitude() > &self.rad
    }

    pub fn is_negative(&self) -> bool {
        self.mid.is_negative() && self.mid.magnitude() > &self.rad
    }

    /// Whether the two balls share a point.
    pub fn overlaps(&self, other: &BigFloat) -> bool {
        (self - other).contains_zero()
    }

    /// Widens the ball by an absolute amount given in grid units.
    pub fn add_error_ulps(&mut self, ulps: &BigUint) {
        self.rad += ulps;
    }

    /// Widens the ball by `2^log2_bound`.
    pub fn add_error_log2(&mut self, log2_bound: f64) {
        if log2_bound == f64::NEG_INFINITY {
            return;
        }
        self.rad += ulps_from_log2(log2_bound, self.bits);
    }

    /// Widens the ball by an absolute f64 amount.
    pub fn add_error(&mut self, bound: f64) {
        assert!(bound >= 0.0 && bound.is_finite());
        if bound > 0.0 {
            self.add_error_log2(bound.log2());
        }
    }

    /// Nearest integer to the midpoint, and an upper bound on the distance from
    /// any point of the ball to that integer.
    pub fn nearest_integer(&self) -> (BigInt, f64) {
        let (n, _) = shr_round(&self.mid, self.bits);
        let back = &n << self.bits;
        let gap = (&self.mid - back).magnitude() + &self.rad;
        (n, scaled_f64(&gap, self.bits as i64) * (1.0 + 1e-12))
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mid: self.mid.abs(),
            rad: self.rad.clone(),
            bits: self.bits,
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Exact multiplication by an integer.
    pub fn mul_int(&self, k: &BigInt) -> Self {
        BigFloat {
            mid: &self.mid * k,
            rad: &self.rad * k.magnitude(),
            bits: self.bits,
        }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul_int(&BigInt::from(k))
    }

    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        let kb = BigInt::from(k);
        let (mid, exact) = div_round(&self.mid, &kb);
        let mut rad = (&self.rad).div_ceil(&BigUint::from(k.unsigned_abs()));
        if !exact {
            rad += 1u32;
        }
        BigFloat {
            mid,
            rad,
            bits: self.bits,
        }
    }

    /// Multiplies by `2^-s` exactly by refining the grid.
    pub fn shr_exact(&self, s: u32) -> Self {
        BigFloat {
            mid: self.mid.clone(),
            rad: self.rad.clone(),
            bits: self.bits + s,
        }
    }

    pub fn div(&self, other: &BigFloat) -> Result<Self> {
        let (x, y) = Self::aligned(self, other);
        if y.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = x.bits;
        let scaled = &x.mid << p;
        let (q, exact) = div_round(&scaled, &y.mid);
        let ym = y.mid.magnitude();
        let denom = ym - &y.rad;
        // |x/y - xm/ym| ≤ (xr + |xm/ym|·yr) / (|ym| - yr), in ulps.
        let cross = (x.mid.magnitude() << p as u64) * &y.rad;
        let cross = cross.div_ceil(ym);
        let num = (&x.rad << p as u64) + cross;
        let mut rad = num.div_ceil(&denom);
        if !exact {
            rad += 1u32;
        }
        Ok(BigFloat { mid: q, rad, bits: p })
    }

    pub fn recip(&self) -> Result<Self> {
        BigFloat::from_int(1, self.bits).div(self)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if !self.mid.is_positive() || self.mid.magnitude() <= &self.rad {
            if self.mid.is_zero() && self.rad.is_zero() {
                return Ok(BigFloat::zero(self.bits));
            }
            return Err(Error::Domain("square root of a ball that reaches zero or below".into()));
        }
        let p = self.bits as u64;
        let m = self.mid.magnitude();
        let scaled = m << p;
        let s = scaled.sqrt();
        let exact = &s * &s == scaled;
        let lo = ((m - &self.rad) << p).sqrt();
        let mut rad = if self.rad.is_zero() {
            BigUint::zero()
        } else {
            (&self.rad << p).div_ceil(&(lo << 1u32).max(BigUint::one()))
        };
        if !exact {
            rad += 1u32;
        }
        Ok(BigFloat {
            mid: BigInt::from(s),
            rad,
            bits: self.bits,
        })
    }

    /// π on a grid with `bits` fractional bits (Machin's formula).
    pub fn pi(bits: u32) -> Self {
        let w = bits + 24;
        let (a5, r5) = atan_inv(5, w);
        let (a239, r239) = atan_inv(239, w);
        let mid = (a5 << 4) - (a239 << 2);
        let rad = BigUint::from(16 * r5 + 4 * r239);
        BigFloat { mid, rad, bits: w }.with_bits(bits)
    }

    /// `e^x`.
    pub fn exp(&self) -> Self {
        let p = self.bits;
        let log2_mag = self.log2_upper();
        let s: u32 = if log2_mag > -8.0 {
            (log2_mag.ceil() + 8.0) as u32
        } else {
            0
        };
        let growth: u32 = if self.mid.is_positive() {
            (self.abs_upper_f64() * std::f64::consts::LOG2_E).ceil() as u32 + 2
        } else {
            0
        };
        let w = p + s + growth + 32;
        let r = self.with_bits(w).shr_exact(s).with_bits(w);
        let mut sum = BigFloat::from_int(1, w);
        let mut term = BigFloat::from_int(1, w);
        let one_ulp = BigUint::one();
        let stop = BigUint::from(8u32);
        let mut k = 1i64;
        loop {
            term = (&term * &r).div_int(k);
            sum = &sum + &term;
            // |r| ≤ 2^-8, so the remaining tail is below |term|·2^-7 < 1 ulp.
            if term.mag_upper() <= stop {
                sum.add_error_ulps(&one_ulp);
                break;
            }
            k += 1;
        }
        for _ in 0..s {
            sum = sum.square();
        }
        sum.with_bits(p)
    }

    /// `e^{iθ}` as a complex ball `(cos θ, sin θ)`.
    pub fn expi(&self) -> super::ComplexBall {
        let p = self.bits;
        let log2_mag = self.log2_upper();
        let s: u32 = if log2_mag > -8.0 {
            (log2_mag.ceil() + 8.0) as u32
        } else {
            0
        };
        let w = p + s + 32;
        let r = self.with_bits(w).shr_exact(s).with_bits(w);
        let mut re = BigFloat::from_int(1, w);
        let mut im = BigFloat::zero(w);
        let mut t_re = BigFloat::from_int(1, w);
        let mut t_im = BigFloat::zero(w);
        let one_ulp = BigUint::one();
        let stop = BigUint::from(8u32);
        let mut k = 1i64;
        loop {
            // t ← t · (i r) / k
            let nre = (-(&t_im * &r)).div_int(k);
            let nim = (&t_re * &r).div_int(k);
            t_re = nre;
            t_im = nim;
            re = &re + &t_re;
            im = &im + &t_im;
            if t_re.mag_upper() <= stop && t_im.mag_upper() <= stop {
                re.add_error_ulps(&one_ulp);
                im.add_error_ulps(&one_ulp);
                break;
            }
            k += 1;
        }
        let mut z = super::ComplexBall::new(re, im);
        for _ in 0..s {
            z = z.square();
        }
        z.with_bits(p)
    }

    /// Decimal rendering of the midpoint with `digits` digits after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scaled = &self.mid * BigInt::from(10u32).pow(digits as u32);
        let (n, _) = shr_round(&scaled, self.bits);
        let neg = n.is_negative();
        let s = n.magnitude().to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

/// `round(num / den)` and whether the division was exact.
fn div_round(num: &BigInt, den: &BigInt) -> (BigInt, bool) {
    let (q, r) = num.div_mod_floor(den);
    if r.is_zero() {
        return (q, true);
    }
    // r has the sign of den; round half away from the floor.
    let twice = &r << 1u32;
    let up = if den.is_positive() {
        twice >= *den
    } else {
        twice <= *den
    };
    (if up { q + 1 } else { q }, false)
}

/// `atan(1/k) · 2^w` truncated, with an error bound in ulps.
fn atan_inv(k: u64, w: u32) -> (BigInt, u64) {
    let k2 = BigUint::from(k * k);
    let mut pow = (BigUint::one() << w) / BigUint::from(k);
    let mut sum = BigInt::zero();
    let mut j = 0u64;
    while !pow.is_zero() {
        let term = BigInt::from(&pow / BigUint::from(2 * j + 1));
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        pow /= &k2;
        j += 1;
    }
    (sum, 3 * j + 2)
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mid: -&self.mid,
            rad: self.rad.clone(),
            bits: self.bits,
        }
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -&self
    }
}

impl Add for &BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: &BigFloat) -> BigFloat {
        if self.bits == rhs.bits {
            return BigFloat {
                mid: &self.mid + &rhs.mid,
                rad: &self.rad + &rhs.rad,
                bits: self.bits,
            };
        }
        let (a, b) = BigFloat::aligned(self, rhs);
        &a + &b
    }
}

impl Sub for &BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        self + &(-rhs)
    }
}

impl Mul for &BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: &BigFloat) -> BigFloat {
        if self.bits != rhs.bits {
            let (a, b) = BigFloat::aligned(self, rhs);
            return &a * &b;
        }
        let p = self.bits;
        let (mid, exact) = shr_round(&(&self.mid * &rhs.mid), p);
        let spread = self.mid.magnitude() * &rhs.rad
            + rhs.mid.magnitude() * &self.rad
            + &self.rad * &rhs.rad;
        let mut rad = shr_ceil(&spread, p);
        if !exact {
            rad += 1u32;
        }
        BigFloat { mid, rad, bits: p }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &BigFloat) -> BigFloat {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or_else(|| (self.precision_digits() as usize).min(30));
        write!(f, "{}", self.to_decimal(digits))?;
        if !self.rad.is_zero() {
            write!(f, " ± {:.2e}", self.error_bound())?;
        }
        Ok(())
    }
}

impl From<&BigFloat> for f64 {
    fn from(x: &BigFloat) -> f64 {
        x.to_f64()
    }
}
