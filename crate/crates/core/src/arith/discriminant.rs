use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated negative discriminant together with its fundamental flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Discriminant {
    value: i64,
    fundamental: bool,
}

impl Discriminant {
    /// Accepts `value < 0` with `value ≡ 0, 1 (mod 4)`.
    pub fn new(value: i64) -> Result<Self> {
        if value >= 0 || !matches!(value.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidDiscriminant(value));
        }
        Ok(Discriminant {
            value,
            fundamental: is_fundamental(value),
        })
    }

    /// Like [`Discriminant::new`] but additionally requires a fundamental discriminant.
    pub fn fundamental(value: i64) -> Result<Self> {
        let d = Self::new(value)?;
        if !d.fundamental {
            return Err(Error::NotFundamental(value));
        }
        Ok(d)
    }

    pub fn value(self) -> i64 {
        self.value
    }

    pub fn abs(self) -> u64 {
        self.value.unsigned_abs()
    }

    pub fn is_fundamental(self) -> bool {
        self.fundamental
    }

    pub fn is_even(self) -> bool {
        self.value % 2 == 0
    }

    /// All valid discriminants in `[lo, hi]`, in descending order (closest to zero first).
    pub fn range_desc(lo: i64, hi: i64) -> impl Iterator<Item = Discriminant> {
        let hi = hi.min(-1);
        (lo..=hi).rev().filter_map(|d| Discriminant::new(d).ok())
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Trial-division squarefree test.
pub fn is_squarefree(m: u64) -> bool {
    if m == 0 {
        return false;
    }
    let mut m = m;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

/// Fundamental discriminant test; total over the integers.
pub fn is_fundamental(d: i64) -> bool {
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut i = 5u64;
    while i * i <= n {
        if n % i == 0 || n % (i + 2) == 0 {
            return false;
        }
        i += 6;
    }
    true
}

fn jacobi(a: i64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(d | n)` for `n ≥ 1`.
pub fn kronecker(d: i64, n: u64) -> i8 {
    assert!(n >= 1, "kronecker symbol needs n >= 1");
    let mut n = n;
    let mut result = 1i8;
    let twos = n.trailing_zeros();
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        // (d|2) = 1 for d ≡ ±1 (mod 8), -1 for d ≡ ±3 (mod 8)
        if twos % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            result = -result;
        }
        n >>= twos;
    }
    if n == 1 {
        return result;
    }
    result * jacobi(d, n)
}

/// The character `χ_D(p)` at a prime `p`.
pub fn kronecker_chi(d: Discriminant, p: u64) -> Result<i8> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(kronecker(d.value(), p))
}

/// Whether `d` is congruent to a square modulo the prime `p` (zero counts as a square).
pub fn is_square_mod(d: i64, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let r = d.rem_euclid(p as i64) as u64;
    if r == 0 || p == 2 {
        return Ok(true);
    }
    Ok(jacobi(r as i64, p) == 1)
}
