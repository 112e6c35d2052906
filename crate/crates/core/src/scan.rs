//! Range scans over discriminants: certified traces, class numbers and the
//! congruence checks, optionally backed by the trace cache.

use std::path::PathBuf;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::arith::Discriminant;
use crate::cache::{CacheRecord, TraceCache, SPOT_CHECKS};
use crate::error::{Error, Result};
use crate::qforms::{class_number, class_representatives};
use crate::report::{CheckEntry, Range, ScanRecord, ScanReport};
use crate::traces::{congruence_checks, trace, weighted_class_term};

/// Discriminants per checkpoint.
pub const CHUNK: usize = 64;

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub d_min: i64,
    pub d_max: i64,
    pub all_discriminants: bool,
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
    /// Cache directory; `None` disables the cache.
    pub cache_dir: Option<PathBuf>,
    /// Reuse cached traces instead of recomputing them.
    pub resume: bool,
    pub check: Option<String>,
}

impl ScanOptions {
    pub fn new(d_min: i64, d_max: i64) -> Self {
        ScanOptions {
            d_min,
            d_max,
            all_discriminants: false,
            threads: None,
            cache_dir: None,
            resume: false,
            check: Some("thm2".into()),
        }
    }
}

fn scan_record(c: &CacheRecord) -> Result<ScanRecord> {
    let d = Discriminant::new(c.d)?;
    let a: BigInt = c
        .a
        .parse()
        .map_err(|_| Error::Cache(format!("bad integer for D = {}", c.d)))?;
    let forms = class_representatives(d);
    let imprimitive = forms.iter().any(|q| !q.is_primitive());
    let (h, term, checks) = if d.is_fundamental() {
        let term = weighted_class_term(d)?;
        let checks = congruence_checks(d, &a, term).iter().map(CheckEntry::from).collect();
        (Some(class_number(d)?), Some(term), checks)
    } else {
        (None, None, Vec::new())
    };
    Ok(ScanRecord {
        d: c.d,
        fundamental: d.is_fundamental(),
        h,
        forms: forms.len(),
        imprimitive,
        a: c.a.clone(),
        weighted_term: term,
        precision_digits: c.precision_digits,
        attempts: c.attempts,
        residual: c.residual,
        checks,
    })
}

fn compute(ds: &[Discriminant]) -> Result<Vec<CacheRecord>> {
    ds.par_iter()
        .map(|&d| {
            trace(d, None)
                .map(|t| CacheRecord::from(&t))
                .map_err(|e| Error::at(d.value(), e))
        })
        .collect()
}

/// Runs a scan. Records are ordered by descending `D` whatever the thread count.
pub fn run_scan(opts: &ScanOptions) -> Result<ScanReport> {
    if opts.d_min > opts.d_max || opts.d_max >= 0 {
        return Err(Error::Domain(format!("invalid range [{}, {}]", opts.d_min, opts.d_max)));
    }
    let ds: Vec<Discriminant> = Discriminant::range_desc(opts.d_min, opts.d_max)
        .filter(|d| opts.all_discriminants || d.is_fundamental())
        .collect();

    let mut cache = match &opts.cache_dir {
        Some(dir) => {
            let c = TraceCache::open(dir)?;
            if opts.resume {
                c.spot_check(SPOT_CHECKS)?;
            }
            Some(c)
        }
        None => None,
    };

    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = opts.threads {
            b = b.num_threads(n);
        }
        b.build().map_err(|e| Error::Domain(format!("thread pool: {e}")))?
    };

    let mut traces: Vec<CacheRecord> = Vec::with_capacity(ds.len());
    for chunk in ds.chunks(CHUNK) {
        let cached = |d: &Discriminant| {
            cache
                .as_ref()
                .filter(|_| opts.resume)
                .and_then(|c| c.get(d.value()).cloned())
        };
        let missing: Vec<Discriminant> = chunk.iter().filter(|d| cached(d).is_none()).copied().collect();
        let fresh = pool.install(|| compute(&missing))?;
        let mut fresh = fresh.into_iter();
        let mut done = Vec::with_capacity(chunk.len());
        for d in chunk {
            match cached(d) {
                Some(r) => done.push(r),
                None => done.push(fresh.next().expect("one result per missing D")),
            }
        }
        if let Some(c) = cache.as_mut() {
            for r in &done {
                c.insert(r.clone());
            }
            c.save()?;
        }
        traces.extend(done);
    }

    let records = pool.install(|| traces.par_iter().map(scan_record).collect::<Result<Vec<_>>>())?;
    Ok(ScanReport::new(
        Range {
            d_min: opts.d_min,
            d_max: opts.d_max,
        },
        opts.all_discriminants,
        opts.check.clone(),
        records,
    ))
}
