//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero on any failure.

mod oracle;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use onan_core::arith::{digits_to_bits, is_fundamental, is_prime, BigFloat, Discriminant};
use onan_core::lfun::{class_number_from_l, count_points, curve, within_hasse, CurveSpec};
use onan_core::modfun::{j_coefficients, theta};
use onan_core::qforms::class_number;
use onan_core::scan::{run_scan, ScanOptions};
use onan_core::traces::{trace, trace_table, CERTIFICATION_THRESHOLD};

const TRACE_TIME: Duration = Duration::from_secs(5);
const JCOEFF_TIME: Duration = Duration::from_secs(10);
const SCAN_TIME: Duration = Duration::from_secs(30 * 60);
const CLOSURE_TOLERANCE: f64 = 0.1;
const THETA_TOLERANCE: f64 = 1e-30;
const SAMPLE_FRACTION: f64 = 0.01;

fn disc(d: i64) -> Discriminant {
    Discriminant::new(d).unwrap()
}

type Outcome = Result<String, String>;

fn golden_traces() -> Outcome {
    let mut worst = Duration::ZERO;
    for (d, a) in [(-3, 26752u64), (-4, 143376), (-7, 8288256)] {
        let start = Instant::now();
        let t = trace(disc(d), None).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        worst = worst.max(took);
        if t.a != BigInt::from(a) {
            return Err(format!("a({d}) = {}, expected {a}", t.a));
        }
        if took >= TRACE_TIME {
            return Err(format!("a({d}) took {took:?}"));
        }
    }
    Ok(format!("a(-3), a(-4), a(-7) exact; slowest {worst:?} < {TRACE_TIME:?}"))
}

fn j_expansion() -> Outcome {
    let start = Instant::now();
    let j = j_coefficients(500);
    let took = start.elapsed();
    let expected = [(1, 196884u64), (2, 21493760), (3, 864299970)];
    for (n, c) in expected {
        if j.coefficient(n) != BigInt::from(c) {
            return Err(format!("c({n}) = {}", j.coefficient(n)));
        }
    }
    if took >= JCOEFF_TIME {
        return Err(format!("500 coefficients took {took:?}"));
    }
    Ok(format!("c(1..3) exact; c(500) has {} digits; {took:?} < {JCOEFF_TIME:?}", j.coefficient(500).to_string().len()))
}

fn theorem2_scan() -> Outcome {
    let start = Instant::now();
    let r = run_scan(&ScanOptions::new(-2000, -3)).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let s = &r.summary;
    let expected = (-2000i64..=-3).filter(|&d| is_fundamental(d)).count();
    if s.records != expected {
        return Err(format!("{} records, expected {expected}", s.records));
    }
    if s.checks_failed > 0 {
        return Err(format!("{} failed checks at D = {:?}", s.checks_failed, s.failures));
    }
    if took >= SCAN_TIME {
        return Err(format!("scan took {took:?}"));
    }
    Ok(format!("{} fundamental D, {} applicable checks, 0 failures, {took:?}", s.records, s.checks_applicable))
}

fn closure() -> Outcome {
    let ds: Vec<i64> = (-4999i64..-4).filter(|&d| is_fundamental(d)).collect();
    let results: Vec<(i64, Result<(u64, f64), String>)> = ds
        .par_iter()
        .map(|&d| (d, class_number_from_l(disc(d)).map_err(|e| e.to_string())))
        .collect();
    let mut worst: f64 = 0.0;
    for (d, r) in results {
        let (h, dist) = r?;
        let enumerated = class_number(disc(d)).map_err(|e| e.to_string())? as u64;
        if h != enumerated || dist >= CLOSURE_TOLERANCE {
            return Err(format!("D = {d}: formula {h} (dist {dist:e}), enumeration {enumerated}"));
        }
        worst = worst.max(dist);
    }
    Ok(format!("{} fundamental D; worst certified distance {worst:.1e} < {CLOSURE_TOLERANCE}", ds.len()))
}

fn certified_integers() -> Outcome {
    let table = trace_table(-2000, -3).map_err(|e| e.to_string())?;
    if let Some(t) = table.iter().find(|t| t.attempts > 2) {
        return Err(format!("D = {} needed {} attempts", t.d, t.attempts));
    }
    let worst = table.iter().map(|t| t.residual * 12.0).fold(0.0, f64::max);
    let mut rng = StdRng::seed_from_u64(2000);
    let sample: Vec<_> = table.iter().filter(|_| rng.gen_bool(SAMPLE_FRACTION)).collect();
    for t in &sample {
        let fine = trace(t.d, Some(2 * t.precision_digits)).map_err(|e| e.to_string())?;
        if fine.a != t.a || !fine.raw.overlaps(&t.raw) {
            return Err(format!("D = {}: doubled precision disagrees", t.d));
        }
    }
    Ok(format!(
        "{} discriminants within {CERTIFICATION_THRESHOLD} by attempt 2 (worst 12·dist {worst:.1e}); {} sampled at doubled precision agree",
        table.len(),
        sample.len()
    ))
}

fn theta_functional_equation() -> Outcome {
    let bits = digits_to_bits(50);
    let mut worst: f64 = 0.0;
    for (num, den) in [(1, 3), (1, 2), (1, 1), (2, 1), (3, 1), (15, 2)] {
        let v = BigFloat::from_ratio(num, den, bits);
        let inv = BigFloat::from_ratio(den, num, bits);
        let lhs = theta(&inv, 40)
            .map_err(|e| e.to_string())?
            .div(&v.sqrt().map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let rhs = theta(&v, 40).map_err(|e| e.to_string())?;
        let diff = (&lhs - &rhs).abs_upper_f64();
        if diff >= THETA_TOLERANCE {
            return Err(format!("v = {num}/{den}: difference {diff:e}"));
        }
        worst = worst.max(diff);
    }
    Ok(format!("max |v^(-1/2)θ(1/v) − θ(v)| ≤ {worst:.1e} < {THETA_TOLERANCE:e} at 40 digits"))
}

fn elliptic_curves() -> Outcome {
    let primes: Vec<u64> = (2..=10_000).filter(|&p| is_prime(p)).collect();
    let mut checked = 0usize;
    for f in [11, 14, 15, 19] {
        for d in [-3, -15, -23] {
            let e = curve(f, disc(d)).map_err(|e| e.to_string())?;
            let bad: Vec<u64> = primes
                .par_iter()
                .filter(|&&p| e.has_good_reduction(p))
                .filter(|&&p| !e.local_ap(p).map(|a| within_hasse(a, p)).unwrap_or(false))
                .copied()
                .collect();
            if !bad.is_empty() {
                return Err(format!("E_{f}({d}) violates Hasse at p = {bad:?}"));
            }
            checked += primes.iter().filter(|&&p| e.has_good_reduction(p)).count();
        }
    }
    let small: Vec<u64> = (5..=500).filter(|&p| is_prime(p)).collect();
    let mut rng = StdRng::seed_from_u64(500);
    let mut agreed = 0;
    while agreed < 200 {
        let (a, b) = (rng.gen_range(-10_000i64..10_000), rng.gen_range(-10_000i64..10_000));
        let p = small[rng.gen_range(0..small.len())];
        let Ok(e) = CurveSpec::from_i64(a, b, 1) else { continue };
        let ap = count_points(&e, p).map_err(|e| e.to_string())?;
        let oracle = oracle::oracle_point_count(a, b, p as i64);
        if p as i64 + 1 - ap != oracle {
            return Err(format!("count mismatch for ({a}, {b}, {p})"));
        }
        agreed += 1;
    }
    Ok(format!("Hasse holds at {checked} good (curve, p ≤ 10⁴) pairs; 200/200 random counts match the oracle"))
}

fn selmer_indicator() -> Outcome {
    let run = |d: &str| {
        Command::new(env!("CARGO_BIN_EXE_onan"))
            .args(["ec", "--family", "11", "--D", d, "--indicator"])
            .output()
            .map_err(|e| e.to_string())
    };
    let out = run("-3")?;
    let text = String::from_utf8_lossy(&out.stdout);
    let wanted = [
        "≡ 0 (mod 11)",
        "≡ 3 (mod 11)",
        "not congruent",
        "(conditional on BSD)",
    ];
    if !out.status.success() || wanted.iter().any(|w| !text.contains(w)) {
        return Err(format!("unexpected output: {text}"));
    }
    let gate = run("-7")?;
    let gate_text = String::from_utf8_lossy(&gate.stdout);
    if !gate_text.contains("not applicable: -7 is a square mod 11") {
        return Err(format!("gate not applied: {gate_text}"));
    }
    Ok("residues 0 and 3 mod 11, not congruent, conditional-on-BSD label; (11, -7) gated".into())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut opts = ScanOptions::new(-2000, -3);
    opts.cache_dir = Some(dir.path().to_path_buf());
    opts.threads = Some(1);
    let cold = run_scan(&opts).map_err(|e| e.to_string())?.to_json();
    opts.resume = true;
    opts.threads = Some(4);
    let warm = run_scan(&opts).map_err(|e| e.to_string())?.to_json();
    if cold != warm {
        return Err("cold and warm reports differ".into());
    }
    Ok(format!("cold (1 thread) and warm (4 threads) reports identical, {} bytes", cold.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("golden traces", golden_traces),
        ("J q-expansion", j_expansion),
        ("congruence scan -2000..-3", theorem2_scan),
        ("class-number closure -5000 < D < -4", closure),
        ("certified integers |D| <= 2000", certified_integers),
        ("theta functional equation", theta_functional_equation),
        ("elliptic-curve suite", elliptic_curves),
        ("Selmer indicator", selmer_indicator),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
