//! `rfdual`: Ramanujan sums, identity verification, coefficient recovery and
//! the acceptance suite from the command line.
//!
//! Exit status: 0 on pass or smoke, 1 when an absolutely convergent case
//! misses its tolerance (or a suite criterion fails), 2 on usage errors.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rfdual_core::csum::{build_table, csum_gcd};
use rfdual_core::harness::{self, CoeffPath, VerifyRequest};
use rfdual_core::rfseries::phi_square_pairing;
use rfdual_core::{Grouping, Verdict};

use config::FileConfig;
use output::Format;

#[derive(Parser, Debug)]
#[command(name = "rfdual", version, about = "Ramanujan sums and dual Ramanujan-Fourier expansions")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// key=value file with default truncations (terms, tol, m, primes,
    /// grouping, format, seed, jobs, s).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Record wall time in `runtime_ms`.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print c_q(n), or export a table with --table Q N.
    Csum(CsumArgs),
    /// Run a catalog identity and report the truncated sum.
    Verify(VerifyArgs),
    /// Recover a coefficient by divisor sum, Euler product or closed form.
    Coeff(CoeffArgs),
    /// Evaluate both sides of the phi-expansion pairing.
    Pair(PairArgs),
    /// Run the acceptance checks.
    Suite(SuiteArgs),
    /// List case ids.
    Cases,
}

#[derive(Args, Debug)]
struct CsumArgs {
    q: Option<u64>,
    n: Option<u64>,
    /// Build the table for 1 <= q <= Q, 1 <= n <= N.
    #[arg(long, num_args = 2, value_names = ["Q", "N"])]
    table: Option<Vec<u32>>,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the binary dump (requires --out).
    #[arg(long, requires = "out")]
    binary: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GroupingArg {
    Natural,
    PeriodGrouped,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    case: String,
    /// Evaluation point: the modulus for dual cases, the argument n for
    /// classical ones.
    #[arg(long, default_value_t = 1)]
    q: u64,
    #[arg(long)]
    q2: Option<u64>,
    #[arg(long)]
    s: Option<f64>,
    /// Number of series terms N.
    #[arg(long)]
    terms: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    grouping: Option<GroupingArg>,
    /// Prime bound for Euler products.
    #[arg(long)]
    primes: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PathArg {
    Sum,
    Euler,
    Closed,
    All,
}

#[derive(Args, Debug)]
struct CoeffArgs {
    case: String,
    #[arg(long, conflicts_with = "n1")]
    n: Option<u64>,
    #[arg(long, requires = "n2")]
    n1: Option<u64>,
    #[arg(long)]
    n2: Option<u64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long, value_enum, default_value = "all")]
    path: PathArg,
    /// Truncation M of the divisor sum.
    #[arg(long)]
    m: Option<u64>,
    /// Prime bound P of the Euler product.
    #[arg(long)]
    primes: Option<u64>,
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Truncations N (argument side) and Q (modulus side).
    #[arg(long, num_args = 2, value_names = ["N", "Q"])]
    terms: Option<Vec<u64>>,
    #[arg(long)]
    primes: Option<u64>,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long)]
    jobs: Option<usize>,
}

const DEFAULT_TERMS: u64 = 100_000;
const DEFAULT_TOL: f64 = 1e-3;
const DEFAULT_VERIFY_PRIMES: u64 = 10_000;
const DEFAULT_COEFF_BOUND: u64 = 100_000;

/// Failure modes mapped to exit codes.
enum Failure {
    Usage(String),
    Verdict,
}

impl From<rfdual_core::Error> for Failure {
    fn from(e: rfdual_core::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Failure {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verdict) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn positive(name: &str, v: u64) -> Result<u64, Failure> {
    if v == 0 {
        Err(Failure::Usage(format!("{name} must be at least 1")))
    } else {
        Ok(v)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.global.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let format = match cli.global.format {
        Some(f) => f,
        None => file.get::<String>("format")?.map(|s| s.parse::<Format>()).transpose()?.unwrap_or(Format::Text),
    };
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Cases => {
            output::cases(&mut out, format, &harness::case_ids()).map_err(io_err)?;
            Ok(())
        }
        Command::Csum(a) => run_csum(a, format, &mut out),
        Command::Verify(a) => {
            if !harness::is_known_case(&a.case) {
                return Err(Failure::Usage(format!("unknown case id `{}`", a.case)));
            }
            let grouping = match a.grouping {
                Some(GroupingArg::Natural) => Grouping::Natural,
                Some(GroupingArg::PeriodGrouped) => Grouping::PeriodGrouped,
                None => file.get::<Grouping>("grouping")?.unwrap_or_default(),
            };
            let tol = pick(a.tol, file.get("tol")?, DEFAULT_TOL);
            if !(tol > 0.0) {
                return Err(Failure::Usage("tolerance must be positive".into()));
            }
            let req = VerifyRequest {
                case: a.case,
                q: positive("--q", a.q)?,
                q2: a.q2,
                s: a.s.or(file.get("s")?),
                n_terms: positive("--terms", pick(a.terms, file.get("terms")?, DEFAULT_TERMS))?,
                prime_bound: positive("--primes", pick(a.primes, file.get("primes")?, DEFAULT_VERIFY_PRIMES))?,
                grouping,
                tol,
            };
            let start = Instant::now();
            let mut report = harness::verify(&req)?;
            if cli.global.timings {
                report = report.with_runtime(start.elapsed().as_secs_f64() * 1e3);
            }
            output::report(&mut out, format, &report).map_err(io_err)?;
            if report.verdict == Verdict::Fail {
                return Err(Failure::Verdict);
            }
            Ok(())
        }
        Command::Coeff(a) => {
            if !harness::is_known_case(&a.case) {
                return Err(Failure::Usage(format!("unknown case id `{}`", a.case)));
            }
            let (n, n2) = match (a.n, a.n1, a.n2) {
                (Some(n), None, None) => (n, None),
                (None, Some(n1), Some(n2)) => (n1, Some(positive("--n2", n2)?)),
                _ => return Err(Failure::Usage("give --n, or --n1 and --n2".into())),
            };
            let path = match a.path {
                PathArg::Sum => CoeffPath::Sum,
                PathArg::Euler => CoeffPath::Euler,
                PathArg::Closed => CoeffPath::Closed,
                PathArg::All => CoeffPath::All,
            };
            let m = positive("--m", pick(a.m, file.get("m")?, DEFAULT_COEFF_BOUND))?;
            let p = positive("--primes", pick(a.primes, file.get("primes")?, DEFAULT_COEFF_BOUND))?;
            let r = harness::coefficient(&a.case, positive("--n", n)?, n2, a.s.or(file.get("s")?), path, m, p)?;
            output::coeff(&mut out, format, &r).map_err(io_err)?;
            Ok(())
        }
        Command::Pair(a) => {
            let terms = a.terms.unwrap_or_else(|| {
                let t = file.get("terms").ok().flatten().unwrap_or(DEFAULT_TERMS);
                vec![t, t]
            });
            let (n, q) = (positive("N", terms[0])?, positive("Q", terms[1])?);
            let p = positive("--primes", pick(a.primes, file.get("primes")?, DEFAULT_COEFF_BOUND))?;
            let r = phi_square_pairing(n, q, p)?;
            output::pairing(&mut out, format, &r).map_err(io_err)?;
            Ok(())
        }
        Command::Suite(a) => {
            let seed = pick(a.seed, file.get("seed")?, 42);
            let jobs = pick(a.jobs, file.get("jobs")?, 0);
            let r = harness::suite(seed, jobs)?;
            output::suite(&mut out, format, &r).map_err(io_err)?;
            if !r.all_passed() {
                return Err(Failure::Verdict);
            }
            Ok(())
        }
    }
}

fn io_err(e: std::io::Error) -> Failure {
    Failure::Usage(format!("write failed: {e}"))
}

fn run_csum(a: CsumArgs, format: Format, out: &mut impl std::io::Write) -> Result<(), Failure> {
    if let Some(t) = a.table {
        if a.q.is_some() || a.n.is_some() {
            return Err(Failure::Usage("give either q n or --table Q N".into()));
        }
        let table = build_table(t[0], t[1])?;
        match (&a.out, a.binary) {
            (Some(path), true) => {
                let f = std::fs::File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
                table.write_binary(std::io::BufWriter::new(f)).map_err(io_err)?;
            }
            (Some(path), false) => {
                let f = std::fs::File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
                table.write_csv(std::io::BufWriter::new(f)).map_err(io_err)?;
            }
            (None, _) => table.write_csv(out).map_err(io_err)?,
        }
        return Ok(());
    }
    match (a.q, a.n) {
        (Some(q), Some(n)) => {
            let q = positive("q", q)?;
            let n = positive("n", n)?;
            output::csum(out, format, q, n, csum_gcd(q, n)).map_err(io_err)?;
            Ok(())
        }
        _ => Err(Failure::Usage("csum needs q and n, or --table Q N".into())),
    }
}
