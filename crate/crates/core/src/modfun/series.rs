use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A truncated Laurent series `Σ coeffs[k] q^(valuation + k) + O(q^order)` over ℤ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    valuation: i64,
    coeffs: Vec<BigInt>,
    order: i64,
}

impl PowerSeries {
    /// Builds a series from coefficients starting at `q^valuation`, known up to `O(q^order)`.
    pub fn new(valuation: i64, coeffs: Vec<BigInt>, order: i64) -> Self {
        let mut s = PowerSeries {
            valuation,
            coeffs,
            order,
        };
        s.truncate();
        s
    }

    pub fn from_fn(valuation: i64, order: i64, f: impl Fn(i64) -> BigInt) -> Self {
        let coeffs = (valuation..order).map(f).collect();
        PowerSeries::new(valuation, coeffs, order)
    }

    /// `1 + O(q^order)`.
    pub fn one(order: i64) -> Self {
        PowerSeries::new(0, vec![BigInt::one()], order)
    }

    fn truncate(&mut self) {
        let keep = (self.order - self.valuation).max(0) as usize;
        self.coeffs.truncate(keep);
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// Exponent bound: terms from `q^order` on are unknown.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Coefficient of `q^n` (zero outside the stored range, panics beyond the order).
    pub fn coefficient(&self, n: i64) -> BigInt {
        assert!(n < self.order, "coefficient q^{n} lies beyond O(q^{})", self.order);
        if n < self.valuation {
            return BigInt::zero();
        }
        self.coeffs
            .get((n - self.valuation) as usize)
            .cloned()
            .unwrap_or_default()
    }

    /// Coefficients from `q^valuation` up to `q^(order-1)`.
    pub fn coefficients(&self) -> Vec<BigInt> {
        (self.valuation..self.order).map(|n| self.coefficient(n)).collect()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        PowerSeries::new(
            self.valuation,
            self.coeffs.iter().map(|c| c * k).collect(),
            self.order,
        )
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        PowerSeries::new(self.valuation + k, self.coeffs.clone(), self.order + k)
    }

    /// In-place multiplication by `(1 - q^n)` for a series with valuation 0.
    pub fn mul_one_minus_q_pow(&mut self, n: usize) {
        assert!(n >= 1);
        let len = self.coeffs.len();
        for k in (n..len).rev() {
            let t = self.coeffs[k - n].clone();
            self.coeffs[k] -= t;
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = PowerSeries::new(0, vec![BigInt::one()], i64::MAX / 4);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse; the leading coefficient must be ±1.
    pub fn inverse(&self) -> Result<Self> {
        let lead = self
            .coeffs
            .first()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::Domain("inverse of a series with zero leading term".into()))?;
        if lead.abs() != BigInt::one() {
            return Err(Error::Domain(format!("leading coefficient {lead} is not a unit")));
        }
        let n = (self.order - self.valuation) as usize;
        let mut inv: Vec<BigInt> = Vec::with_capacity(n);
        for k in 0..n {
            let mut s = if k == 0 { BigInt::one() } else { BigInt::zero() };
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                s -= &self.coeffs[j] * &inv[k - j];
            }
            inv.push(s * lead);
        }
        Ok(PowerSeries::new(
            -self.valuation,
            inv,
            self.order - 2 * self.valuation,
        ))
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let v = self.valuation.min(rhs.valuation);
        let o = self.order.min(rhs.order);
        PowerSeries::from_fn(v, o, |n| self.coefficient(n) + rhs.coefficient(n))
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let v = self.valuation.min(rhs.valuation);
        let o = self.order.min(rhs.order);
        PowerSeries::from_fn(v, o, |n| self.coefficient(n) - rhs.coefficient(n))
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let v = self.valuation + rhs.valuation;
        let o = (self.order + rhs.valuation).min(rhs.order + self.valuation);
        let n = (o - v).max(0) as usize;
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        PowerSeries::new(v, out, o)
    }
}

/// `σ₃(n)`.
fn sigma3(n: i64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            s += BigInt::from(d).pow(3);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(3);
            }
        }
        d += 1;
    }
    s
}

/// `E₄ = 1 + 240 Σ σ₃(n) qⁿ + O(q^order)`.
pub fn eisenstein_e4(order: i64) -> PowerSeries {
    PowerSeries::from_fn(0, order, |n| {
        if n == 0 {
            BigInt::one()
        } else {
            sigma3(n) * 240
        }
    })
}

/// `Δ = q Π (1 − qⁿ)²⁴ + O(q^order)`.
pub fn discriminant_delta(order: i64) -> PowerSeries {
    let m = order - 1;
    let mut coeffs = vec![BigInt::zero(); m.max(1) as usize];
    coeffs[0] = BigInt::one();
    let mut eta = PowerSeries::new(0, coeffs, m);
    for n in 1..m.max(1) {
        eta.mul_one_minus_q_pow(n as usize);
    }
    eta.pow(24).shift(1)
}

/// Exact coefficients of `J = j − 744 = q⁻¹ + 196884 q + …` through `q^n_max`.
///
/// Computed as `E₄³ / Δ − 744` in exact integer series arithmetic.
pub fn j_coefficients(n_max: usize) -> PowerSeries {
    let order = n_max as i64 + 1;
    // E₄³ to O(q^(order+1)) and Δ to O(q^(order+2)) give j to O(q^order).
    let e4 = eisenstein_e4(order + 1);
    let e4_cubed = &(&e4 * &e4) * &e4;
    let delta = discriminant_delta(order + 2);
    let inv = delta.inverse().expect("Δ has leading coefficient 1");
    let j = &e4_cubed * &inv;
    let j = PowerSeries::new(j.valuation, j.coeffs, order);
    &j - &PowerSeries::new(0, vec![BigInt::from(744)], order)
}

/// Renders `(n, c(n))` rows for `n = -1..=n_max` as CSV.
pub fn j_coefficients_csv(series: &PowerSeries) -> String {
    let mut out = String::from("n,c\n");
    for n in series.valuation()..series.order() {
        out.push_str(&format!("{},{}\n", n, series.coefficient(n)));
    }
    out
}
