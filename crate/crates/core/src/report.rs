//! Versioned scan reports. Field order is fixed by declaration order, and
//! nothing run-dependent (timestamps, thread counts, cache state) is recorded,
//! so identical inputs give byte-identical JSON.

use serde::{Deserialize, Serialize};

use crate::traces::{CongruenceCheck, CERTIFICATION_THRESHOLD, MAX_RETRIES};

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub unit: String,
    pub default_digits: String,
    pub certification_threshold: f64,
    pub max_retries: u32,
    pub retry_rule: String,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            unit: "decimal digits after the point (absolute)".into(),
            default_digits: "ceil(pi*sqrt(|D|)/ln(10)) + 40".into(),
            certification_threshold: CERTIFICATION_THRESHOLD,
            max_retries: MAX_RETRIES,
            retry_rule: "double the digits while dist(12*sum, Z) or |Im| >= threshold".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Na,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Na => "na",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub modulus: u32,
    pub status: CheckStatus,
    pub a_residue: u32,
    pub term_residue: u32,
}

impl From<&CongruenceCheck> for CheckEntry {
    fn from(c: &CongruenceCheck) -> Self {
        let status = match c.outcome() {
            Some(true) => CheckStatus::Pass,
            Some(false) => CheckStatus::Fail,
            None => CheckStatus::Na,
        };
        CheckEntry {
            modulus: c.modulus,
            status,
            a_residue: c.a_residue,
            term_residue: c.term_residue,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub d: i64,
    pub fundamental: bool,
    /// `h(D)`; absent for non-fundamental `D`.
    pub h: Option<usize>,
    /// Reduced forms summed, imprimitive ones included.
    pub forms: usize,
    pub imprimitive: bool,
    pub a: String,
    /// `−24h(D)` with the `D = −3, −4` weights; absent for non-fundamental `D`.
    pub weighted_term: Option<i64>,
    pub precision_digits: u32,
    pub attempts: u32,
    pub residual: f64,
    pub checks: Vec<CheckEntry>,
}

impl ScanRecord {
    pub fn failed_moduli(&self) -> Vec<u32> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| c.modulus)
            .collect()
    }

    fn status(&self, modulus: u32) -> &'static str {
        self.checks
            .iter()
            .find(|c| c.modulus == modulus)
            .map_or("na", |c| c.status.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub d_min: i64,
    pub d_max: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub records: usize,
    pub fundamental: usize,
    pub checks_applicable: usize,
    pub checks_passed: usize,
    pub checks_failed: usize,
    /// Discriminants with at least one failed check.
    pub failures: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub format_version: u32,
    pub engine_version: String,
    pub range: Range,
    pub all_discriminants: bool,
    pub check: Option<String>,
    pub precision_policy: PrecisionPolicy,
    pub summary: Summary,
    pub records: Vec<ScanRecord>,
}

impl ScanReport {
    pub fn new(range: Range, all_discriminants: bool, check: Option<String>, records: Vec<ScanRecord>) -> Self {
        let mut summary = Summary {
            records: records.len(),
            ..Summary::default()
        };
        for r in &records {
            summary.fundamental += usize::from(r.fundamental);
            for c in &r.checks {
                match c.status {
                    CheckStatus::Pass => {
                        summary.checks_applicable += 1;
                        summary.checks_passed += 1;
                    }
                    CheckStatus::Fail => {
                        summary.checks_applicable += 1;
                        summary.checks_failed += 1;
                    }
                    CheckStatus::Na => {}
                }
            }
            if !r.failed_moduli().is_empty() {
                summary.failures.push(r.d);
            }
        }
        ScanReport {
            format_version: REPORT_FORMAT_VERSION,
            engine_version: crate::ENGINE_VERSION.to_string(),
            range,
            all_discriminants,
            check,
            precision_policy: PrecisionPolicy::default(),
            summary,
            records,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// CSV export: `D,fundamental,h,a,t,mod16,mod9,mod5,mod7`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("D,fundamental,h,a,t,mod16,mod9,mod5,mod7\n");
        for r in &self.records {
            let opt = |x: Option<String>| x.unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.d,
                r.fundamental,
                opt(r.h.map(|h| h.to_string())),
                r.a,
                opt(r.weighted_term.map(|t| t.to_string())),
                r.status(16),
                r.status(9),
                r.status(5),
                r.status(7),
            ));
        }
        out
    }
}
