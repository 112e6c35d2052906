use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use onan_core::arith::Discriminant;
use onan_core::cache::TraceCache;
use onan_core::lfun::curve_report;
use onan_core::modfun::{j_coefficients, j_coefficients_csv};
use onan_core::qforms::{class_representatives, gamma0_class_number};
use onan_core::scan::{run_scan, ScanOptions};
use onan_core::traces::{trace, TraceRecord};
use onan_core::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_COMPUTATION: u8 = 2;
const EXIT_CONGRUENCE: u8 = 3;

/// Largest `n` accepted by `jcoeffs`.
const MAX_JCOEFFS: usize = 20_000;

#[derive(Parser)]
#[command(name = "onan", version, about = "Traces of singular moduli and class-number congruences for O'Nan moonshine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Thm2,
    None,
}

#[derive(Subcommand)]
enum Command {
    /// Class number and reduced forms of discriminant D.
    Classnum {
        #[arg(allow_negative_numbers = true)]
        d: i64,
        /// Also count classes under Γ₀(p).
        #[arg(long)]
        level: Option<u64>,
    },
    /// Certified a(D).
    Trace {
        #[arg(allow_negative_numbers = true)]
        d: i64,
        /// Starting precision in decimal digits after the point.
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Scan a range of discriminants and check the congruences.
    Scan {
        #[arg(long, allow_negative_numbers = true)]
        dmin: i64,
        #[arg(long, allow_negative_numbers = true)]
        dmax: i64,
        #[arg(long, value_enum, default_value = "thm2")]
        check: Check,
        /// JSON report path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Reuse traces from the cache.
        #[arg(long)]
        resume: bool,
        #[arg(long, conflicts_with = "resume")]
        no_cache: bool,
        /// Include non-fundamental discriminants.
        #[arg(long)]
        all_discriminants: bool,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// The curve E_N(D), its a_p and L(1) diagnostic, and the Selmer indicator.
    Ec {
        #[arg(long)]
        family: u32,
        #[arg(long = "D", allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        indicator: bool,
        /// Largest prime in the a_p table.
        #[arg(long, default_value_t = 50)]
        max_p: u64,
        #[arg(long)]
        json: bool,
    },
    /// Coefficients c(n) of J = q^-1 + 196884q + ….
    Jcoeffs {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        csv: bool,
    },
}

enum Failure {
    Usage(String),
    Computation(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Computation(e)
    }
}

fn discriminant(d: i64) -> Result<Discriminant, Failure> {
    Discriminant::new(d).map_err(|e| Failure::Usage(e.to_string()))
}

fn classnum(d: i64, level: Option<u64>) -> Result<u8, Failure> {
    let d = discriminant(d)?;
    let forms = class_representatives(d);
    if d.is_fundamental() {
        println!("h({}) = {}", d, forms.len());
    } else {
        eprintln!(
            "warning: {} is not fundamental; listing all {} reduced forms",
            d,
            forms.len()
        );
        println!("forms({}) = {}", d, forms.len());
    }
    for q in &forms {
        if q.is_primitive() {
            println!("{q}");
        } else {
            println!("{q} imprimitive");
        }
    }
    if let Some(p) = level {
        println!("h^({p})({d}) = {}", gamma0_class_number(d, p)?);
    }
    Ok(0)
}

fn trace_cmd(d: i64, precision: Option<u32>, json: bool) -> Result<u8, Failure> {
    let d = discriminant(d)?;
    let t = trace(d, precision)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&TraceRecord::from(&t)).map_err(Error::from)?);
    } else {
        println!("a({}) = {}", d, t.a);
        println!(
            "residual {:.3e}, {} digits, attempt {}, {} forms",
            t.residual, t.precision_digits, t.attempts, t.class_count
        );
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn scan_cmd(
    dmin: i64,
    dmax: i64,
    check: Check,
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
    resume: bool,
    no_cache: bool,
    all_discriminants: bool,
    threads: Option<usize>,
) -> Result<u8, Failure> {
    if dmin > dmax || dmax >= 0 {
        return Err(Failure::Usage(format!("invalid range [{dmin}, {dmax}]")));
    }
    if threads == Some(0) {
        return Err(Failure::Usage("--threads must be positive".into()));
    }
    let mut opts = ScanOptions::new(dmin, dmax);
    opts.all_discriminants = all_discriminants;
    opts.threads = threads;
    opts.resume = resume;
    opts.cache_dir = (!no_cache).then(TraceCache::default_dir);
    opts.check = match check {
        Check::Thm2 => Some("thm2".into()),
        Check::None => None,
    };
    let report = run_scan(&opts)?;
    let json = report.to_json();
    match out {
        Some(path) => fs::write(path, json).map_err(Error::from)?,
        None => print!("{json}"),
    }
    if let Some(path) = csv {
        fs::write(path, report.to_csv()).map_err(Error::from)?;
    }
    let s = &report.summary;
    eprintln!(
        "{} records, {} checks applicable, {} passed, {} failed",
        s.records, s.checks_applicable, s.checks_passed, s.checks_failed
    );
    if opts.check.is_some() && s.checks_failed > 0 {
        eprintln!("congruence failures at D = {:?}", s.failures);
        return Ok(EXIT_CONGRUENCE);
    }
    Ok(0)
}

fn ec_cmd(family: u32, d: i64, indicator: bool, max_p: u64, json: bool) -> Result<u8, Failure> {
    let d = discriminant(d)?;
    if indicator && family != 11 && family != 19 {
        return Err(Failure::Usage("--indicator is defined for families 11 and 19".into()));
    }
    let r = curve_report(family, d, max_p, indicator)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&r).map_err(Error::from)?);
        return Ok(0);
    }
    println!("E_{}({}): y^2 = x^3 + ({})x + ({})", r.family, r.d, r.a, r.b);
    println!(
        "conductor {}{}",
        r.conductor,
        if r.conductor_heuristic { " (heuristic)" } else { "" }
    );
    let ap: Vec<String> = r
        .ap
        .iter()
        .map(|e| format!("{}:{}{}", e.p, e.a_p, if e.good { "" } else { "*" }))
        .collect();
    println!("a_p (* bad): {}", ap.join(" "));
    match (&r.l_value, &r.l_value_error) {
        (Some(l), _) => {
            println!(
                "L(1) ≈ {} ± {:.1e}, root number estimate {:.6}",
                l.l1, l.error_bound, l.root_number_estimate
            );
            for c in &l.caveats {
                println!("  caveat: {c}");
            }
        }
        (None, Some(e)) => println!("L(1) unavailable: {e}"),
        _ => {}
    }
    println!("a_g(D) congruence: {}", r.ag_congruence);
    if let Some(s) = &r.indicator {
        if s.applicable {
            println!(
                "a({}) = {} ≡ {} (mod {})",
                s.d,
                s.a.as_deref().unwrap_or("?"),
                s.a_residue.unwrap_or_default(),
                s.p
            );
            println!(
                "weighted class term {} ≡ {} (mod {})",
                s.weighted_term.unwrap_or_default(),
                s.term_residue.unwrap_or_default(),
                s.p
            );
        }
        println!("{}", s.summary());
    }
    Ok(0)
}

fn jcoeffs_cmd(n: usize, csv: bool) -> Result<u8, Failure> {
    if n > MAX_JCOEFFS {
        return Err(Failure::Usage(format!("--n must be at most {MAX_JCOEFFS}")));
    }
    let j = j_coefficients(n);
    if csv {
        print!("{}", j_coefficients_csv(&j));
    } else {
        for k in j.valuation()..j.order() {
            println!("{k} {}", j.coefficient(k));
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Classnum { d, level } => classnum(d, level),
        Command::Trace { d, precision, json } => trace_cmd(d, precision, json),
        Command::Scan {
            dmin,
            dmax,
            check,
            out,
            csv,
            resume,
            no_cache,
            all_discriminants,
            threads,
        } => scan_cmd(dmin, dmax, check, out, csv, resume, no_cache, all_discriminants, threads),
        Command::Ec {
            family,
            d,
            indicator,
            max_p,
            json,
        } => ec_cmd(family, d, indicator, max_p, json),
        Command::Jcoeffs { n, csv } => jcoeffs_cmd(n, csv),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Computation(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_COMPUTATION)
        }
    }
}
