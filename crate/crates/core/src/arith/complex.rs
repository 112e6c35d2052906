use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::BigFloat;

/// A rectangular complex ball: independent real and imaginary enclosures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    re: BigFloat,
    im: BigFloat,
}

impl ComplexBall {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        ComplexBall { re, im }
    }

    pub fn real(re: BigFloat) -> Self {
        let bits = re.bits();
        ComplexBall {
            re,
            im: BigFloat::zero(bits),
        }
    }

    pub fn zero(bits: u32) -> Self {
        ComplexBall::real(BigFloat::zero(bits))
    }

    pub fn from_int<T: Into<BigInt>>(v: T, bits: u32) -> Self {
        ComplexBall::real(BigFloat::from_int(v, bits))
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn into_parts(self) -> (BigFloat, BigFloat) {
        (self.re, self.im)
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        ComplexBall {
            re: self.re.with_bits(bits),
            im: self.im.with_bits(bits),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexBall {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn square(&self) -> Self {
        let re = &self.re.square() - &self.im.square();
        let im = (&self.re * &self.im).mul_i64(2);
        ComplexBall { re, im }
    }

    pub fn scale(&self, k: &BigFloat) -> Self {
        ComplexBall {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        ComplexBall {
            re: self.re.mul_int(k),
            im: self.im.mul_int(k),
        }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul_int(&BigInt::from(k))
    }

    /// Whether both components' balls contain the corresponding components of `other`'s midpoint region.
    pub fn overlaps(&self, other: &ComplexBall) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }
}

impl Add for &ComplexBall {
    type Output = ComplexBall;
    fn add(self, rhs: &ComplexBall) -> ComplexBall {
        ComplexBall {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &ComplexBall {
    type Output = ComplexBall;
    fn sub(self, rhs: &ComplexBall) -> ComplexBall {
        ComplexBall {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Neg for &ComplexBall {
    type Output = ComplexBall;
    fn neg(self) -> ComplexBall {
        ComplexBall {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Mul for &ComplexBall {
    type Output = ComplexBall;
    fn mul(self, rhs: &ComplexBall) -> ComplexBall {
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        ComplexBall { re, im }
    }
}
