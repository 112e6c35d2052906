use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{is_prime, Discriminant};
use crate::error::{Error, Result};

/// Largest prime accepted by the naive point counter.
pub const MAX_PRIME: u64 = 100_000;

/// The families `E_N(D): y² = x³ + A₀D²x + B₀D³`, keyed by `N`, with `(A₀, B₀)`.
pub const FAMILIES: [(u32, i64, i64); 4] = [
    (11, -13392, -1_080_432),
    (14, 5805, -285_714),
    (15, -12987, -263_466),
    (19, -12096, -544_752),
];

/// `y² = x³ + ax + b` together with its conductor and, when one was found,
/// an integral model minimal at 2 and 3 in long Weierstrass form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    pub a: BigInt,
    pub b: BigInt,
    pub family: Option<u32>,
    pub d: Option<Discriminant>,
    pub conductor: u64,
    /// Set when the conductor comes from the twist rule outside its range of validity.
    pub conductor_heuristic: bool,
    /// `[a1, a2, a3, a4, a6]`.
    pub model_23: Option<[BigInt; 5]>,
}

/// `E_N(D)` for `N ∈ {11, 14, 15, 19}` and fundamental `D < 0`.
pub fn curve(family: u32, d: Discriminant) -> Result<CurveSpec> {
    let &(n0, a0, b0) = FAMILIES
        .iter()
        .find(|f| f.0 == family)
        .ok_or_else(|| Error::Domain(format!("unknown curve family {family}")))?;
    if !d.is_fundamental() {
        return Err(Error::NotFundamental(d.value()));
    }
    let dv = BigInt::from(d.value());
    let a = BigInt::from(a0) * dv.pow(2);
    let b = BigInt::from(b0) * dv.pow(3);
    let heuristic = (d.abs()).gcd(&(6 * n0 as u64)) != 1;
    let conductor = n0 as u64 * d.abs() * d.abs();
    let mut spec = CurveSpec::new(a, b, conductor)?;
    spec.family = Some(family);
    spec.d = Some(d);
    spec.conductor_heuristic = heuristic;
    Ok(spec)
}

impl CurveSpec {
    /// A curve with a caller-supplied conductor.
    pub fn new(a: BigInt, b: BigInt, conductor: u64) -> Result<Self> {
        let disc: BigInt = BigInt::from(4) * a.pow(3) + BigInt::from(27) * b.pow(2);
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        if conductor == 0 {
            return Err(Error::Domain("conductor must be positive".into()));
        }
        let model_23 = minimal_model_23(&a, &b);
        Ok(CurveSpec {
            a,
            b,
            family: None,
            d: None,
            conductor,
            conductor_heuristic: false,
            model_23,
        })
    }

    pub fn from_i64(a: i64, b: i64, conductor: u64) -> Result<Self> {
        CurveSpec::new(a.into(), b.into(), conductor)
    }

    /// `ε(p)`: 0 at primes dividing the conductor, 1 elsewhere.
    pub fn epsilon(&self, p: u64) -> u8 {
        u8::from(self.conductor % p != 0)
    }

    /// Whether the short model has good reduction at `p ≥ 5`, or the 2,3-model at `p ∈ {2, 3}`.
    pub fn has_good_reduction(&self, p: u64) -> bool {
        let pb = BigInt::from(p);
        match (p, &self.model_23) {
            (2 | 3, Some(m)) => !model_discriminant(m).is_multiple_of(&pb),
            (2 | 3, None) => false,
            _ => {
                let disc: BigInt = BigInt::from(4) * self.a.pow(3) + BigInt::from(27) * self.b.pow(2);
                !disc.is_multiple_of(&pb)
            }
        }
    }

    /// `a_p` as used in the L-series: point counts for `p ≥ 5`, the 2,3-model for `p ∈ {2, 3}`
    /// (or 0 when no such model was found).
    pub fn local_ap(&self, p: u64) -> Result<i64> {
        match p {
            2 | 3 => Ok(match &self.model_23 {
                Some(m) => p as i64 + 1 - count_long_model(m, p),
                None => 0,
            }),
            _ => count_points(self, p),
        }
    }
}

fn residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

/// `a_p = p + 1 − #E(F_p)` for the short model, by exhaustive count.
///
/// At primes of bad reduction the count on the singular cubic yields
/// `a_p ∈ {−1, 0, 1}`.
pub fn count_points(curve: &CurveSpec, p: u64) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::Domain(format!("naive point count needs p ≥ 5, got {p}")));
    }
    if p > MAX_PRIME {
        return Err(Error::Domain(format!("p = {p} exceeds the point-count cap {MAX_PRIME}")));
    }
    let (a, b) = (residue(&curve.a, p), residue(&curve.b, p));
    // roots[r] = #{y : y² = r}
    let mut roots = vec![0u8; p as usize];
    for y in 0..p {
        roots[(y * y % p) as usize] += 1;
    }
    let mut count: u64 = 1;
    for x in 0..p {
        let f = ((x * x % p + a) % p * x % p + b) % p;
        count += roots[f as usize] as u64;
    }
    Ok(p as i64 + 1 - count as i64)
}

/// Affine points plus infinity on `y² + a1xy + a3y = x³ + a2x² + a4x + a6` over `F_p`.
fn count_long_model(m: &[BigInt; 5], p: u64) -> i64 {
    let r: Vec<i64> = m.iter().map(|c| residue(c, p) as i64).collect();
    let (a1, a2, a3, a4, a6) = (r[0], r[1], r[2], r[3], r[4]);
    let p = p as i64;
    let mut count = 1;
    for x in 0..p {
        for y in 0..p {
            let lhs = y * y + a1 * x * y + a3 * y;
            let rhs = x * x * x + a2 * x * x + a4 * x + a6;
            if (lhs - rhs).rem_euclid(p) == 0 {
                count += 1;
            }
        }
    }
    count
}

fn c_invariants(m: &[BigInt; 5]) -> (BigInt, BigInt) {
    let [a1, a2, a3, a4, a6] = m;
    let b2 = a1 * a1 + a2 * 4;
    let b4 = a4 * 2 + a1 * a3;
    let b6 = a3 * a3 + a6 * 4;
    let c4 = &b2 * &b2 - &b4 * 24;
    let cube: BigInt = &b2 * &b2 * &b2;
    let c6: BigInt = -cube + &b2 * &b4 * 36 - &b6 * 216;
    (c4, c6)
}

fn model_discriminant(m: &[BigInt; 5]) -> BigInt {
    let (c4, c6) = c_invariants(m);
    (c4.pow(3) - c6.pow(2)) / 1728
}

fn exact_div(x: &BigInt, k: i64) -> Option<BigInt> {
    let (q, r) = x.div_rem(&BigInt::from(k));
    r.is_zero().then_some(q)
}

/// An integral model with invariants `(c4, c6)`, if one exists.
fn integral_model(c4: &BigInt, c6: &BigInt) -> Option<[BigInt; 5]> {
    let mut b2 = (-c6).mod_floor(&BigInt::from(12));
    if b2 > BigInt::from(6) {
        b2 -= 12;
    }
    let b4 = exact_div(&(&b2 * &b2 - c4), 24)?;
    let b6 = exact_div(&(-(&b2 * &b2 * &b2) as BigInt + &b2 * &b4 * 36 - c6), 216)?;
    let a1 = b2.mod_floor(&BigInt::from(2));
    let a3 = b6.mod_floor(&BigInt::from(2));
    let a2 = exact_div(&(&b2 - &a1), 4)?;
    let a4 = exact_div(&(&b4 - &a1 * &a3), 2)?;
    let a6 = exact_div(&(&b6 - &a3), 4)?;
    let m = [a1, a2, a3, a4, a6];
    (c_invariants(&m) == (c4.clone(), c6.clone())).then_some(m)
}

/// Scales the short model by `u ∈ {6, 3, 2, 1}` (largest first) and returns the
/// first integral long model. Only 2- and 3-adic scalings are tried, so the
/// result is minimal at 2 and 3 when the short model is minimal elsewhere.
fn minimal_model_23(a: &BigInt, b: &BigInt) -> Option<[BigInt; 5]> {
    let c4: BigInt = a * -48;
    let c6: BigInt = b * -864;
    [6i64, 3, 2, 1].iter().find_map(|&u| {
        let c4u = exact_div(&c4, u.pow(4))?;
        let c6u = exact_div(&c6, u.pow(6))?;
        integral_model(&c4u, &c6u)
    })
}

/// `|a_p| ≤ 2√p`.
pub fn within_hasse(ap: i64, p: u64) -> bool {
    (ap.abs() as u128).pow(2) <= 4 * p as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    fn big(v: &[i64; 5]) -> [BigInt; 5] {
        v.map(BigInt::from)
    }

    #[test]
    fn family_coefficients() {
        let e = curve(14, disc(-15)).unwrap();
        assert_eq!(e.a, BigInt::from(5805 * 225));
        assert_eq!(e.b, BigInt::from(-285714i64 * -3375));
        let e = curve(15, disc(-20)).unwrap();
        assert_eq!(e.a, BigInt::from(-12987 * 400));
        let e = curve(11, disc(-3)).unwrap();
        assert_eq!(e.a, BigInt::from(-13392 * 9));
        assert_eq!(e.b, BigInt::from(-1080432i64 * -27));
        assert!(e.conductor_heuristic);
        let e = curve(11, disc(-7)).unwrap();
        assert!(!e.conductor_heuristic);
        assert_eq!(e.conductor, 11 * 49);
        assert!(curve(13, disc(-7)).is_err());
        assert!(curve(11, disc(-12)).is_err());
    }

    #[test]
    fn point_count_examples() {
        let e = CurveSpec::from_i64(1, 1, 31).unwrap();
        assert_eq!(count_points(&e, 5).unwrap(), -3);
        let e = CurveSpec::from_i64(-1, 0, 32).unwrap();
        assert_eq!(count_points(&e, 5).unwrap(), -2);
        assert!(count_points(&e, 3).is_err());
        assert!(count_points(&e, 9).is_err());
        assert!(count_points(&e, 100_003).is_err());
    }

    #[test]
    fn singular_reduction_conventions() {
        // y² = x³ − x has discriminant 64; y² = x³ + 5²·x: cusp mod 5
        let e = CurveSpec::from_i64(25, 125, 1).unwrap();
        assert_eq!(count_points(&e, 5).unwrap(), 0);
        // y² = x³ − 3x + 2 = (x − 1)²(x + 2) mod 7: split node, a = 1
        let e = CurveSpec::from_i64(-3, 2 + 7, 1).unwrap();
        let ap = count_points(&e, 7).unwrap();
        assert!(ap.abs() <= 1);
    }

    #[test]
    fn family_models_at_two_and_three() {
        // E₁₁(D) is the quadratic twist of [0,-1,1,-10,-20] by D; at D = -3 the
        // u = 6 scaling gives invariants (496·9, 20008·(−27)).
        let e = CurveSpec::from_i64(-13392, -1_080_432, 11).unwrap();
        assert_eq!(e.model_23, Some(big(&[0, -1, 1, -10, -20])));
        assert_eq!(e.local_ap(2).unwrap(), -2);
        assert_eq!(e.local_ap(3).unwrap(), -1);
        let e = CurveSpec::from_i64(5805, -285_714, 14).unwrap();
        let (c4, c6) = c_invariants(e.model_23.as_ref().unwrap());
        assert_eq!((c4, c6), (BigInt::from(-215), BigInt::from(5291)));
        let e = CurveSpec::from_i64(-1, 0, 32).unwrap();
        assert_eq!(e.model_23, Some(big(&[0, 0, 0, -1, 0])));
    }

    #[test]
    fn hasse_for_family_members() {
        for f in [11, 14, 15, 19] {
            let e = curve(f, disc(-7)).unwrap();
            for p in (5..400).filter(|&p| is_prime(p)) {
                let ap = count_points(&e, p).unwrap();
                if e.has_good_reduction(p) {
                    assert!(within_hasse(ap, p), "family {f}, p = {p}, a_p = {ap}");
                }
            }
        }
    }
}
