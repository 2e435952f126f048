//! `stirl-interp` command-line frontend.

mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use stirl_interp::coeff::{exact_row, row_product};
use stirl_interp::limits::{approx_stirling, clt_check, kolmogorov_distance_with, llt_check};
use stirl_interp::moments::{harmonic, moment_summary};
use stirl_interp::modes::{darroch_check, find_modes, find_modes_exact, solve_s_for_mean};
use stirl_interp::{grid, Error, ScaleParam};

use output::{emit, Envelope, Format};

const THREADS_ENV: &str = "STIRL_INTERP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "stirl-interp", version, about = "Coefficients between binomial and Stirling numbers of the first kind")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalized coefficient row p[k] = A_{n,k}(s) / P_n(1).
    Row {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        /// Exact big-integer row (integer s only).
        #[arg(long)]
        exact: bool,
    },
    /// Mean, variance, s-derivatives and third-moment sum.
    Moments {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
    },
    /// Berry-Esseen certificate; exits 3 if it fails.
    Clt {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: f64,
        /// Also report the half-integer corrected lattice discrepancy.
        #[arg(long)]
        continuity_correction: bool,
    },
    /// Local-limit deviation and empirical constant.
    Llt {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
    },
    /// Modes and the Darroch distance check; exits 4 on violation.
    Modes {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        /// Use the exact row (integer s only).
        #[arg(long)]
        exact: bool,
    },
    /// Solve mu_n(s) = k0 for s in (0, 1).
    FindS {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k0: usize,
    },
    /// Gaussian approximation of c(n, k) / (n-1)!.
    Approx {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// H_n, the unique mode of the Stirling row, and (n+1)/2.
    Table1 {
        /// Comma-separated values or inclusive ranges `a..b`.
        #[arg(long, default_value = "1..10,100,1000")]
        n_list: String,
        /// Full precision instead of two decimals for H_n.
        #[arg(long)]
        full: bool,
    },
    /// Exact and approximate c(100, 5) / 99!.
    Table2 {
        #[arg(long)]
        full: bool,
    },
}

/// A failure carrying its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Integrity(_) | Error::AmbiguousModes(_) => 4,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn scale(s: f64) -> Result<ScaleParam, Failure> {
    ScaleParam::new(s).map_err(Failure::from)
}

/// Parses `1..10,100,1000`.
fn parse_n_list(list: &str) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || usage(format!("invalid --n-list entry `{part}`"));
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                if a == 0 || b < a {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => {
                let v: usize = part.parse().map_err(|_| bad())?;
                if v == 0 {
                    return Err(bad());
                }
                out.push(v);
            }
        }
    }
    if out.is_empty() {
        return Err(usage("--n-list is empty"));
    }
    Ok(out)
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn run(cli: Cli) -> Result<(Envelope, u8), Failure> {
    let env = match cli.command {
        Command::Row { n, s, exact } => {
            let sp = scale(s)?;
            let results = if exact {
                if !sp.is_integer() {
                    return Err(usage("--exact requires an integer --s"));
                }
                let row = exact_row(n, sp)?;
                let total = row.total();
                let p = row.probabilities();
                let rows: Vec<Value> = row
                    .numerators
                    .iter()
                    .enumerate()
                    .map(|(k, c)| json!({"k": k, "p": p[k], "numerator": c.to_string(), "denominator": total.to_string()}))
                    .collect();
                json!({"n": n, "s": s, "kind": to_value(&row.kind), "rows": rows})
            } else {
                let row = row_product(n, sp)?;
                let rows: Vec<Value> = row.p.iter().enumerate().map(|(k, p)| json!({"k": k, "p": p})).collect();
                json!({"n": n, "s": s, "rows": rows})
            };
            Envelope::new("row", params(&[("n", json!(n)), ("s", json!(s)), ("exact", json!(exact))]), results)
        }
        Command::Moments { n, s } => {
            scale(s)?;
            let m = moment_summary(n, s)?;
            let mut results = to_value(&m);
            results["sigma"] = json!(m.sigma());
            Envelope::new("moments", params(&[("n", json!(n)), ("s", json!(s))]), results)
        }
        Command::Clt { n, s, continuity_correction } => {
            let r = clt_check(n, s)?;
            let mut results = to_value(&r);
            if continuity_correction {
                let row = row_product(n, scale(s)?)?;
                results["corrected_distance"] = json!(kolmogorov_distance_with(&row, r.mu, r.sigma, true)?);
            }
            let code = if r.passed { 0 } else { 3 };
            let p = params(&[("n", json!(n)), ("s", json!(s)), ("continuity_correction", json!(continuity_correction))]);
            return Ok((Envelope::new("clt", p, results), code));
        }
        Command::Llt { n, s } => {
            scale(s)?;
            let r = llt_check(n, s)?;
            Envelope::new("llt", params(&[("n", json!(n)), ("s", json!(s))]), to_value(&r))
        }
        Command::Modes { n, s, exact } => {
            let sp = scale(s)?;
            let report = if exact {
                if !sp.is_integer() {
                    return Err(usage("--exact requires an integer --s"));
                }
                find_modes_exact(&exact_row(n, sp)?)?
            } else {
                darroch_check(n, s)?
            };
            if !report.darroch_ok {
                return Err(Failure { code: 4, message: format!("Darroch check failed: {report:?}") });
            }
            Envelope::new("modes", params(&[("n", json!(n)), ("s", json!(s)), ("exact", json!(exact))]), to_value(&report))
        }
        Command::FindS { n, k0 } => {
            let sol = solve_s_for_mean(n, k0)?;
            let modes = find_modes(&row_product(n, scale(sol.s_star)?)?)?;
            let mut results = to_value(&sol);
            results["modes"] = json!(modes.modes);
            Envelope::new("find-s", params(&[("n", json!(n)), ("k0", json!(k0))]), results)
        }
        Command::Approx { n, k } => {
            let r = approx_stirling(n, k)?;
            Envelope::new("approx", params(&[("n", json!(n)), ("k", json!(k))]), to_value(&r))
        }
        Command::Table1 { n_list, full } => {
            let ns = parse_n_list(&n_list)?;
            let rows = grid::try_map(&ns, grid::Execution::default(), |&n| -> Result<Value, Error> {
                let h = harmonic(n, 1);
                let mode = if n >= 3 {
                    json!(find_modes_exact(&exact_row(n, ScaleParam::new(1.0)?)?)?.modes[0])
                } else {
                    json!("-")
                };
                Ok(json!({
                    "n": n,
                    "H_n": if full { h } else { round2(h) },
                    "m_n(1)": mode,
                    "(n+1)/2": (n as f64 + 1.0) / 2.0,
                }))
            })?;
            Envelope::new("table1", params(&[("n_list", json!(n_list)), ("full", json!(full))]), Value::Array(rows))
        }
        Command::Table2 { full } => {
            let r = approx_stirling(100, 5)?;
            let shown = |x: f64, digits: i32| if full { x } else { (x * 10f64.powi(digits)).trunc() / 10f64.powi(digits) };
            let rows = vec![
                json!({"method": "exact", "value": shown(r.exact_value, 7), "error_percent": Value::Null}),
                json!({
                    "method": "gaussian local limit",
                    "value": shown(r.approx_value, 6),
                    "error_percent": if full { r.relative_error_percent } else { round2(r.relative_error_percent) },
                }),
            ];
            Envelope::new("table2", params(&[("n", json!(100)), ("k", json!(5)), ("full", json!(full))]), Value::Array(rows))
        }
    };
    Ok((env, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok());
    grid::init_thread_pool(threads);
    let format = cli.format;
    match run(cli) {
        Ok((env, code)) => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            if let Err(e) = emit(&env, format, &mut lock).and_then(|_| lock.flush()) {
                eprintln!("error: failed to write output: {e}");
                return ExitCode::from(1);
            }
            if code == 3 {
                eprintln!("error: Berry-Esseen certificate failed");
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            if f.code == 2 {
                eprintln!("usage: stirl-interp <COMMAND> [OPTIONS]; see --help");
            }
            ExitCode::from(f.code)
        }
    }
}
