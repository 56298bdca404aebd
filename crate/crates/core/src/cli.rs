//! The `truncbin` command line. [`run`] takes the argument list and output
//! streams explicitly so it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use crate::certify::{Certifier, CertifyOptions};
use crate::error::Error;
use crate::modp::DEFAULT_PRIME_BUDGET;
use crate::newton::polygon_of;
use crate::poly::{run_identity_suites, shifted_coeffs, IntPoly, Multipliers};
use crate::primes::{gap_stats, PrimeTable, DEFAULT_FACTOR_BOUND};
use crate::roots::pairwise_distinct_check;
use crate::survey::{counting_chain, run_survey, write_csv, write_jsonl, SurveyOptions};
use crate::thue::scan_all;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "truncbin",
    version,
    about = "Irreducibility certificates for truncated binomial expansions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CertifyFlags {
    /// Usable primes tried by the mod-p fallback
    #[arg(long, default_value_t = DEFAULT_PRIME_BUDGET)]
    prime_budget: usize,

    /// Largest integer handed to trial division
    #[arg(long, default_value_t = DEFAULT_FACTOR_BOUND)]
    factor_bound: u128,
}

impl CertifyFlags {
    fn options(&self) -> CertifyOptions {
        CertifyOptions {
            prime_budget: self.prime_budget,
            factor_bound: self.factor_bound,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Jsonl,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify one F_{n,k} and print the certificate as JSON
    Certify {
        n: u64,
        k: u64,
        /// Multipliers: ones, factorial, or csv:<a_0,...,a_k>
        #[arg(long, default_value = "ones", value_parser = parse_multipliers)]
        a: Multipliers,
        #[command(flatten)]
        flags: CertifyFlags,
    },
    /// Certify every (n, k) with 3 <= n <= N, 1 <= k <= n-2
    Survey {
        #[arg(long)]
        max_n: u64,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
        /// Worker threads (0 = one per core)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Multiplier preset: ones or factorial
        #[arg(long, default_value = "ones", value_parser = parse_multipliers)]
        a: Multipliers,
        /// Fill the micros column with wall-clock time
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        flags: CertifyFlags,
    },
    /// Newton polygon of a polynomial ("3,-8,6") or of P_{n,k}(x-1)
    Polygon {
        #[arg(long, conflicts_with_all = ["n", "k"], required_unless_present_all = ["n", "k"])]
        poly: Option<String>,
        #[arg(long, requires = "k")]
        n: Option<u64>,
        #[arg(long, requires = "n")]
        k: Option<u64>,
        #[arg(long)]
        p: u64,
    },
    /// Prime gap statistics and window counts up to N
    Gaps {
        #[arg(long)]
        max_n: u64,
    },
    /// Pairwise root disjointness of P_{n,1}, ..., P_{n,n-1} for 2 <= n <= N
    DistinctRoots {
        #[arg(long)]
        n: u64,
    },
    /// Brute-force scans of the Thue equations attached to k
    ThueScan {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        bound: Option<u64>,
        /// Only print scans that found solutions
        #[arg(long)]
        nonempty: bool,
    },
    /// Exact identity suites; reports the first failure
    Identities {
        #[arg(long, default_value_t = 200)]
        max_b: u64,
        #[arg(long, default_value_t = 60)]
        max_n: u64,
    },
}

/// Parses `ones`, `factorial` or `csv:<a_0,...,a_k>`.
pub fn parse_multipliers(s: &str) -> Result<Multipliers, String> {
    match s {
        "ones" => Ok(Multipliers::Ones),
        "factorial" => Ok(Multipliers::Factorial),
        _ => {
            let list = s
                .strip_prefix("csv:")
                .ok_or_else(|| format!("expected ones, factorial or csv:<list>, got {s:?}"))?;
            list.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<BigInt>()
                        .map_err(|e| format!("{t:?}: {e}"))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Multipliers::Explicit)
        }
    }
}

fn preset_name(m: &Multipliers) -> &'static str {
    match m {
        Multipliers::Ones => "ones",
        Multipliers::Factorial => "factorial",
        Multipliers::Explicit(_) => "explicit",
    }
}

/// Input validation errors map to the usage exit code.
fn error_exit(e: &Error) -> i32 {
    match e {
        Error::OutOfRange { .. }
        | Error::NotSmooth { .. }
        | Error::ZeroMultiplier { .. }
        | Error::MultiplierCount { .. }
        | Error::NotPrime(_)
        | Error::Parse(_)
        | Error::ThueParams(_)
        | Error::Precondition(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

enum Failure {
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Runs the command line `args` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            error_exit(&e)
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Certify { n, k, a, flags } => {
            let start = Instant::now();
            let cert = Certifier::new(n, flags.options()).certify(n, k, &a)?;
            let elapsed = start.elapsed().as_micros() as u64;
            print_json(
                out,
                &json!({
                    "n": n,
                    "k": k,
                    "a": preset_name(&a),
                    "kind": cert.kind,
                    "scope": cert.scope,
                    "witnesses": cert.witnesses,
                    "detail": cert.detail,
                    "elapsed_micros": elapsed,
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Survey {
            max_n,
            out: format,
            jobs,
            a,
            timing,
            flags,
        } => {
            let options = SurveyOptions {
                multipliers: a,
                jobs,
                timing,
                certify: flags.options(),
            };
            let survey = run_survey(max_n, &options)?;
            match format {
                OutFormat::Csv => write_csv(out, &survey.records)?,
                OutFormat::Jsonl => write_jsonl(out, &survey.records)?,
            }
            print_json(err, &survey.summary)?;
            Ok(if survey.summary.chain.holds {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
        Command::Polygon { poly, n, k, p } => {
            if !PrimeTable::sieve(p).is_prime(p) {
                return Err(Error::NotPrime(p).into());
            }
            let f = match (poly, n, k) {
                (Some(text), _, _) => text.parse::<IntPoly>()?,
                (None, Some(n), Some(k)) => IntPoly::new(shifted_coeffs(n, k)?),
                _ => unreachable!("clap enforces --poly or --n/--k"),
            };
            print_json(out, &polygon_of(&f, p)?.report())?;
            Ok(EXIT_OK)
        }
        Command::Gaps { max_n } => {
            print_json(
                out,
                &json!({
                    "gaps": gap_stats(max_n)?,
                    "chain": counting_chain(max_n)?,
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::DistinctRoots { n } => {
            let mut ok = true;
            for m in 2..=n {
                let report = pairwise_distinct_check(m)?;
                ok &= report.all_distinct && report.non_simple.is_empty();
                print_json(out, &report)?;
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::ThueScan { k, bound, nonempty } => {
            let scans = scan_all(k, bound)?;
            let mut ok = true;
            for scan in &scans {
                if !scan.verify() {
                    ok = false;
                    writeln!(err, "solution fails re-substitution: {scan:?}")?;
                }
                if !nonempty || !scan.solutions.is_empty() {
                    print_json(out, scan)?;
                }
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Identities { max_b, max_n } => {
            let report = run_identity_suites(max_b, max_n)?;
            print_json(out, &report)?;
            Ok(if report.first_failure.is_none() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
    }
}
