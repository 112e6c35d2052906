use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::curve::{curve, CurveSpec};
use super::lseries::l_value_at_1;
use crate::arith::{is_square_mod, Discriminant};
use crate::error::{Error, Result};
use crate::traces::{trace, weighted_class_term};

/// Attached to every Selmer prediction: the indicator assumes the strong BSD conjecture.
pub const BSD_LABEL: &str = "conditional on BSD";

/// Precision target for the `L_E(1)` diagnostic.
const L_TARGET: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LValueSummary {
    pub l1: String,
    pub error_bound: f64,
    pub root_number_estimate: f64,
    pub cutoff: usize,
    pub caveats: Vec<String>,
}

fn l_summary(e: &CurveSpec) -> (Option<LValueSummary>, Option<String>) {
    match l_value_at_1(e, L_TARGET) {
        Ok(data) => (
            Some(LValueSummary {
                l1: data.l1.to_decimal(12),
                error_bound: data.l1.error_bound(),
                root_number_estimate: data.root_number_estimate,
                cutoff: data.cutoff,
                caveats: data.caveats,
            }),
            None,
        ),
        Err(err) => (None, Some(err.to_string())),
    }
}

/// The `p ∈ {11, 19}` Selmer indicator: `Sel_p(E_p(D))` is predicted non-trivial
/// iff `a(D) ≡ −24h(D) (mod p)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelmerIndicator {
    pub p: u32,
    pub d: i64,
    pub applicable: bool,
    /// Why the indicator does not apply, when it doesn't.
    pub reason: Option<String>,
    pub a: Option<String>,
    pub weighted_term: Option<i64>,
    pub a_residue: Option<u32>,
    pub term_residue: Option<u32>,
    pub congruent: Option<bool>,
    pub prediction: Option<String>,
    pub label: String,
    pub conductor: Option<u64>,
    pub conductor_heuristic: Option<bool>,
    pub l_value: Option<LValueSummary>,
    /// Set when the L-value diagnostic could not be produced.
    pub l_value_error: Option<String>,
}

impl SelmerIndicator {
    /// One-line human summary.
    pub fn summary(&self) -> String {
        match (&self.reason, self.congruent) {
            (Some(r), _) => format!("not applicable: {r}"),
            (None, Some(c)) => format!(
                "{}; predicted Sel_{} {} ({})",
                if c { "congruent" } else { "not congruent" },
                self.p,
                self.prediction.as_deref().unwrap_or("?"),
                self.label
            ),
            _ => String::from("indicator unavailable"),
        }
    }
}

/// Evaluates the indicator for `p ∈ {11, 19}` and fundamental `D < 0`.
///
/// When `D` is a square mod `p` the record is returned with `applicable = false`.
pub fn selmer_indicator(p: u32, d: Discriminant, with_l_value: bool) -> Result<SelmerIndicator> {
    if p != 11 && p != 19 {
        return Err(Error::Domain(format!("Selmer indicator is defined for p = 11, 19, not {p}")));
    }
    if !d.is_fundamental() {
        return Err(Error::NotFundamental(d.value()));
    }
    let mut out = SelmerIndicator {
        p,
        d: d.value(),
        applicable: false,
        reason: None,
        a: None,
        weighted_term: None,
        a_residue: None,
        term_residue: None,
        congruent: None,
        prediction: None,
        label: BSD_LABEL.to_string(),
        conductor: None,
        conductor_heuristic: None,
        l_value: None,
        l_value_error: None,
    };
    if is_square_mod(d.value(), p as u64)? {
        out.reason = Some(format!("{} is a square mod {p}", d.value()));
        return Ok(out);
    }
    out.applicable = true;
    let t = trace(d, None)?;
    let term = weighted_class_term(d)?;
    let m = BigInt::from(p);
    let a_res = t.a.mod_floor(&m).to_u32().expect("residue");
    let t_res = term.rem_euclid(p as i64) as u32;
    let congruent = a_res == t_res;
    out.a = Some(t.a.to_string());
    out.weighted_term = Some(term);
    out.a_residue = Some(a_res);
    out.term_residue = Some(t_res);
    out.congruent = Some(congruent);
    out.prediction = Some(if congruent { "non-trivial" } else { "trivial" }.to_string());

    let e = curve(p, d)?;
    out.conductor = Some(e.conductor);
    out.conductor_heuristic = Some(e.conductor_heuristic);
    if with_l_value {
        (out.l_value, out.l_value_error) = l_summary(&e);
    }
    Ok(out)
}

/// `a_p` at one prime, with its reduction type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApEntry {
    pub p: u64,
    pub a_p: i64,
    pub good: bool,
}

/// What `ec` reports about `E_N(D)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub family: u32,
    pub d: i64,
    pub a: String,
    pub b: String,
    pub conductor: u64,
    pub conductor_heuristic: bool,
    /// `[a1, a2, a3, a4, a6]` of the integral model used at 2 and 3.
    pub model_23: Option<Vec<String>>,
    pub ap: Vec<ApEntry>,
    /// The congruence involving the weight-3/2 coefficients `a_g(D)` needs data this engine does not have.
    pub ag_congruence: String,
    pub l_value: Option<LValueSummary>,
    pub l_value_error: Option<String>,
    pub indicator: Option<SelmerIndicator>,
}

/// Curve data, `a_p` for `p ≤ max_p`, the `L_E(1)` diagnostic and, on request, the indicator.
pub fn curve_report(family: u32, d: Discriminant, max_p: u64, indicator: bool) -> Result<CurveReport> {
    let e = curve(family, d)?;
    let ap = (2..=max_p)
        .filter(|&p| crate::arith::is_prime(p))
        .map(|p| {
            e.local_ap(p).map(|a_p| ApEntry {
                p,
                a_p,
                good: e.has_good_reduction(p),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (l_value, l_value_error) = l_summary(&e);
    let indicator = if indicator {
        Some(selmer_indicator(family, d, false)?)
    } else {
        None
    };
    Ok(CurveReport {
        family,
        d: d.value(),
        a: e.a.to_string(),
        b: e.b.to_string(),
        conductor: e.conductor,
        conductor_heuristic: e.conductor_heuristic,
        model_23: e.model_23.as_ref().map(|m| m.iter().map(|c| c.to_string()).collect()),
        ap,
        ag_congruence: "unavailable: a_g(D) is not computable here".into(),
        l_value,
        l_value_error,
        indicator,
    })
}
