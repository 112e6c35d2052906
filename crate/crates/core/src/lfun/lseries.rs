use std::collections::BTreeMap;

use rayon::prelude::*;

use super::curve::{within_hasse, CurveSpec, MAX_PRIME};
use crate::arith::{digits_to_bits, is_prime, BigFloat};
use crate::error::{Error, Result};

/// Largest tolerated `| |w| − 1 |` in the two-point solve.
pub const ROOT_NUMBER_TOLERANCE: f64 = 0.05;

/// Smoothing points: `S(A)` is evaluated at `A = 1`, `6/5` and `5/6`.
const A_NUM: i64 = 6;
const A_DEN: i64 = 5;

/// Data behind an `L_E(1)` estimate.
#[derive(Clone, Debug)]
pub struct LSeriesData {
    pub ap: BTreeMap<u64, i64>,
    pub epsilon: BTreeMap<u64, u8>,
    pub cutoff: usize,
    pub l1: BigFloat,
    pub root_number_estimate: f64,
    /// Modeling caveats attached to this value (heuristic conductor, missing 2,3-model).
    pub caveats: Vec<String>,
}

/// Dirichlet coefficients `a_1..=a_n` from the local data.
pub fn dirichlet_coefficients(
    n: usize,
    ap: &BTreeMap<u64, i64>,
    eps: &BTreeMap<u64, u8>,
) -> Vec<i64> {
    let mut spf = vec![0usize; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for j in (i..=n).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i;
                }
            }
        }
    }
    let mut a = vec![0i64; n + 1];
    if n >= 1 {
        a[1] = 1;
    }
    for m in 2..=n {
        let p = spf[m];
        let mut pk = p;
        let mut k = 1;
        while (m / pk) % p == 0 {
            pk *= p;
            k += 1;
        }
        let rest = m / pk;
        if rest > 1 {
            a[m] = a[pk] * a[rest];
        } else {
            let app = ap[&(p as u64)];
            a[m] = if k == 1 {
                app
            } else {
                // a_{p^k} = a_p a_{p^{k−1}} − ε(p) p a_{p^{k−2}}
                app * a[pk / p] - eps[&(p as u64)] as i64 * p as i64 * a[pk / p / p]
            };
        }
    }
    a
}

/// Smallest cutoff whose tail `2x^{C+1}/(1−x)` is below `2^-bits`, for `x = e^{−2π·(5/6)/√N}`.
fn cutoff_for(conductor: u64, bits: u32) -> usize {
    let rate = 2.0 * std::f64::consts::PI * (A_DEN as f64 / A_NUM as f64) / (conductor as f64).sqrt();
    let target = -(bits as f64) * std::f64::consts::LN_2;
    let c = (std::f64::consts::LN_2 - (-(-rate).exp()).ln_1p() - target) / rate;
    c.ceil().max(1.0) as usize
}

/// `S(A) = Σ_{n≤C} (a_n/n) e^{−2πnA/√N}` plus the tail bound, for `A = num/den`.
fn smoothed_sum(a: &[i64], conductor: u64, num: i64, den: i64, bits: u32) -> BigFloat {
    let w = bits + 32;
    let arg = (&BigFloat::pi(w).mul_i64(2 * num).div_int(den))
        .div(&BigFloat::sqrt_int(conductor, w))
        .expect("√N > 0");
    let x = (-arg).exp();
    let mut pw = x.clone();
    let mut s = BigFloat::zero(w);
    for (n, &an) in a.iter().enumerate().skip(1) {
        if an != 0 {
            s = &s + &pw.mul_i64(an).div_int(n as i64);
        }
        pw = &pw * &x;
    }
    let c = (a.len() - 1) as f64;
    let xf = x.to_f64();
    s.add_error(2.0 * xf.powf(c + 1.0) / (1.0 - xf));
    s
}

/// `L_E(1)` from the smoothed sums at `A = 1` and `A = 6/5`:
/// `L(1) = S(A) + w·S(1/A)` at both points determines `w` and `L(1)`.
pub fn l_value_at_1(curve: &CurveSpec, target: f64) -> Result<LSeriesData> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::Domain(format!("precision target {target} not in (0, 1)")));
    }
    let digits = (-target.log10()).ceil() as u32 + 8;
    let bits = digits_to_bits(digits);
    let cutoff = cutoff_for(curve.conductor, bits + 8);
    if cutoff as u64 > MAX_PRIME {
        return Err(Error::Domain(format!(
            "cutoff {cutoff} for conductor {} exceeds {MAX_PRIME}",
            curve.conductor
        )));
    }
    let primes: Vec<u64> = (2..=cutoff as u64).filter(|&p| is_prime(p)).collect();
    let local: Vec<(u64, i64)> = primes
        .par_iter()
        .map(|&p| curve.local_ap(p).map(|a| (p, a)))
        .collect::<Result<_>>()?;
    let ap: BTreeMap<u64, i64> = local.into_iter().collect();
    let epsilon: BTreeMap<u64, u8> = primes.iter().map(|&p| (p, curve.epsilon(p))).collect();
    for (&p, &a) in &ap {
        if curve.has_good_reduction(p) && !within_hasse(a, p) {
            return Err(Error::Domain(format!("a_{p} = {a} violates the Hasse bound")));
        }
    }
    let a = dirichlet_coefficients(cutoff, &ap, &epsilon);

    let n = curve.conductor;
    let s1 = smoothed_sum(&a, n, 1, 1, bits);
    let s_hi = smoothed_sum(&a, n, A_NUM, A_DEN, bits);
    let s_lo = smoothed_sum(&a, n, A_DEN, A_NUM, bits);
    let w = (&s_hi - &s1).div(&(&s1 - &s_lo));
    let w = match w {
        Ok(w) => w,
        Err(_) => return Err(Error::IllConditioned { w: f64::NAN }),
    };
    let wf = w.to_f64();
    if (wf.abs() - 1.0).abs() > ROOT_NUMBER_TOLERANCE {
        return Err(Error::IllConditioned { w: wf });
    }
    let l1 = &s1 * &(&BigFloat::from_int(1, w.bits()) + &w);

    let mut caveats = Vec::new();
    if curve.conductor_heuristic {
        caveats.push("conductor from the twist rule is heuristic for this D".to_string());
    }
    if curve.model_23.is_none() {
        caveats.push("no integral model minimal at 2 and 3; a_2 = a_3 = 0 used".to_string());
    }
    Ok(LSeriesData {
        ap,
        epsilon,
        cutoff,
        l1: l1.with_bits(bits),
        root_number_estimate: wf,
        caveats,
    })
}
