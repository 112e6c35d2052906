//! Positive definite binary quadratic forms `Ax² + Bxy + Cy²`.
//!
//! Reduction, enumeration of reduced representatives, the weights `w_Q`,
//! CM points `z_Q`, and class numbers for the restricted group `Γ₀(p)`.

use std::fmt;

use num_integer::Roots;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, Discriminant};
use crate::error::{Error, Result};

/// The form `a·x² + b·xy + c·y²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// A 2×2 integer matrix `[[a, b], [c, d]]` acting by `Q(x, y) ↦ Q(ax + by, cx + dy)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Mat2 {
        debug_assert_eq!(self.det(), 1);
        Mat2 {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadraticForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    fn check_definite(&self) -> Result<()> {
        if self.discriminant() >= 0 || self.a <= 0 {
            return Err(Error::NotPositiveDefinite {
                a: self.a,
                b: self.b,
                c: self.c,
            });
        }
        Ok(())
    }

    /// `Q(m.a·x + m.b·y, m.c·x + m.d·y)`.
    pub fn transform(&self, m: &Mat2) -> QuadraticForm {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (p, q, r, s) = (m.a as i128, m.b as i128, m.c as i128, m.d as i128);
        let na = a * p * p + b * p * r + c * r * r;
        let nb = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
        let nc = a * q * q + b * q * s + c * s * s;
        QuadraticForm {
            a: na as i64,
            b: nb as i64,
            c: nc as i64,
        }
    }

    /// `|B| ≤ A ≤ C`, with `B ≥ 0` whenever `|B| = A` or `A = C`.
    pub fn is_reduced(&self) -> bool {
        let QuadraticForm { a, b, c } = *self;
        a > 0 && b.abs() <= a && a <= c && !(b < 0 && (b == -a || a == c))
    }

    /// gcd(A, B, C) = 1.
    pub fn is_primitive(&self) -> bool {
        num_integer::gcd(num_integer::gcd(self.a, self.b), self.c) == 1
    }

    /// The unique reduced form equivalent to `self` under SL₂(ℤ).
    pub fn reduce(&self) -> Result<QuadraticForm> {
        self.check_definite()?;
        Ok(self.reduce_with_matrix().0)
    }

    /// Reduces and returns the accumulated transformation `m` with `self.transform(m) = reduced`.
    pub fn reduce_with_matrix(&self) -> (QuadraticForm, Mat2) {
        let mut q = *self;
        let mut m = Mat2::IDENTITY;
        loop {
            // translate B into (-A, A]
            if q.b <= -q.a || q.b > q.a {
                let k = (q.a - q.b).div_euclid(2 * q.a);
                let t = Mat2::new(1, k, 0, 1);
                q = q.transform(&t);
                m = m.mul(&t);
            }
            if q.a > q.c {
                let s = Mat2::new(0, -1, 1, 0);
                q = q.transform(&s);
                m = m.mul(&s);
                continue;
            }
            if q.a == q.c && q.b < 0 {
                let s = Mat2::new(0, -1, 1, 0);
                q = q.transform(&s);
                m = m.mul(&s);
            }
            return (q, m);
        }
    }

    /// The CM point `z_Q = (-B + i√|D|) / 2A`.
    pub fn cm_point(&self) -> Result<CMPoint> {
        self.check_definite()?;
        Ok(CMPoint {
            re: Ratio::new(-self.b, 2 * self.a),
            radicand: self.discriminant().unsigned_abs(),
            im_den: 2 * self.a,
        })
    }

    /// `w_Q ∈ {2, 4, 6}`: 6 for the class of `A'(x² + xy + y²)`, 4 for `A'(x² + y²)`.
    pub fn weight(&self) -> Result<u32> {
        let r = self.reduce()?;
        Ok(if r.a == r.b && r.b == r.c {
            6
        } else if r.b == 0 && r.a == r.c {
            4
        } else {
            2
        })
    }

    /// Matrices in SL₂(ℤ) fixing the reduced form `self` (entries in {-1, 0, 1} suffice).
    pub fn automorphisms(&self) -> Vec<Mat2> {
        debug_assert!(self.is_reduced());
        let r = [-1i64, 0, 1];
        let mut out = Vec::new();
        for &a in &r {
            for &b in &r {
                for &c in &r {
                    for &d in &r {
                        let m = Mat2::new(a, b, c, d);
                        if m.det() == 1 && self.transform(&m) == *self {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// A CM point `re + i·√radicand / im_den`, kept exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMPoint {
    pub re: Ratio<i64>,
    pub radicand: u64,
    pub im_den: i64,
}

impl CMPoint {
    /// The point `i`.
    pub fn i() -> Self {
        CMPoint {
            re: Ratio::from_integer(0),
            radicand: 4,
            im_den: 2,
        }
    }

    /// Imaginary part as an f64.
    pub fn im_f64(&self) -> f64 {
        (self.radicand as f64).sqrt() / self.im_den as f64
    }

    /// `Im z ≥ √3/2`, i.e. `4·radicand ≥ 3·im_den²`.
    pub fn in_fundamental_strip(&self) -> bool {
        4 * self.radicand as i128 >= 3 * (self.im_den as i128) * (self.im_den as i128)
    }
}

impl fmt::Display for CMPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + i·√{}/{}", self.re, self.radicand, self.im_den)
    }
}

/// All reduced forms of discriminant `d`, including imprimitive ones, ordered by `(A, B)`.
pub fn class_representatives(d: Discriminant) -> Vec<QuadraticForm> {
    let dv = d.value();
    let n = d.abs();
    let a_max = (n / 3).sqrt() as i64;
    let mut out = Vec::new();
    for a in 1..=a_max {
        for b in (1 - a)..=a {
            if (b - dv).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - dv;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let q = QuadraticForm { a, b, c };
            if q.is_reduced() {
                out.push(q);
            }
        }
    }
    out
}

/// `h(D)` for a fundamental discriminant.
pub fn class_number(d: Discriminant) -> Result<usize> {
    if !d.is_fundamental() {
        return Err(Error::NotFundamental(d.value()));
    }
    Ok(class_representatives(d).len())
}

/// Left coset representatives of `Γ₀(p)` in SL₂(ℤ): first columns `(1, k)` and `(0, 1)`.
pub fn gamma0_coset_reps(p: u64) -> Vec<Mat2> {
    let mut reps: Vec<Mat2> = (0..p as i64).map(|k| Mat2::new(1, 0, k, 1)).collect();
    reps.push(Mat2::new(0, -1, 1, 0));
    reps
}

/// Lower-left entry divisible by `p`.
fn in_gamma0(m: &Mat2, p: i64) -> bool {
    m.c.rem_euclid(p) == 0
}

/// Number of `Γ₀(p)`-orbits on the SL₂(ℤ)-class of the reduced form `q`.
///
/// The forms `q∘M` for coset representatives `M` meet every orbit; `q∘Mᵢ` and
/// `q∘Mⱼ` lie in one orbit exactly when `Mᵢ⁻¹ σ Mⱼ ∈ Γ₀(p)` for some automorphism
/// `σ` of `q`. Orbits are merged with a union-find over the representatives.
pub fn gamma0_orbits_of_class(q: &QuadraticForm, p: u64) -> Vec<Vec<QuadraticForm>> {
    let reps = gamma0_coset_reps(p);
    let auts = q.automorphisms();
    let n = reps.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        let inv = reps[i].inverse();
        for j in (i + 1)..n {
            let linked = auts
                .iter()
                .any(|s| in_gamma0(&inv.mul(s).mul(&reps[j]), p as i64));
            if linked {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<QuadraticForm>> = Default::default();
    for (i, m) in reps.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(q.transform(m));
    }
    groups.into_values().collect()
}

/// `h⁽ᵖ⁾(D)`: the number of `Γ₀(p)`-classes of positive definite forms of discriminant `D`.
///
/// Counts over all reduced forms (imprimitive ones included, as in
/// [`class_representatives`]).
pub fn gamma0_class_number(d: Discriminant, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(class_representatives(d)
        .iter()
        .map(|q| gamma0_orbits_of_class(q, p).len())
        .sum())
}
