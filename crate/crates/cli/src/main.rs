//! `eulercc`: count and classify Euler configurations from the command line.
//!
//! Exit status: 0 on success, 2 on usage or parse errors, 3 when a sign
//! cannot be certified, 4 when a cross-check or verification fails.

mod json;
mod parse;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use eulercc::classifier::{grid_scan, write_csv, Axis};
use eulercc::euler::{solve, MassTriple};
use eulercc::qps::{khovanskii_bound, straight_bound};
use eulercc::signomial::DEFAULT_TOL;
use eulercc::verify::{run_all, run_one, DEFAULT_SEED};
use eulercc::{count_and_isolate, Error, RootCount, RootRecord, Signomial};

/// Worker threads for `grid`; sequential when unset.
const WORKERS_VAR: &str = "EULERCC_WORKERS";

#[derive(Parser)]
#[command(
    name = "eulercc",
    version,
    about = "Certified counts of three-body Euler configurations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Count and isolate the configurations in every cell.
    Solve {
        /// Masses `m1,m2,m3`.
        #[arg(short, long, value_parser = parse::triple, allow_hyphen_values = true)]
        masses: [f64; 3],
        /// Interaction exponent.
        #[arg(short, value_parser = parse::real, allow_hyphen_values = true)]
        b: f64,
        /// Relative width of each isolating interval.
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = parse::positive)]
        tol: f64,
        /// Indent the JSON document.
        #[arg(long)]
        pretty: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Classify a grid of the (m2, b) plane for masses (1, m2, 1).
    Grid {
        /// Range `lo:hi` of m2.
        #[arg(long, value_parser = parse::range, allow_hyphen_values = true)]
        m2: (f64, f64),
        /// Range `lo:hi` of b.
        #[arg(long, value_parser = parse::range, allow_hyphen_values = true)]
        b: (f64, f64),
        /// Samples `NXxNY` along m2 and b; a single sample sits at `lo`.
        #[arg(short = 'n', long, value_parser = parse::resolution)]
        resolution: (usize, usize),
        /// Recount points away from every frontier numerically.
        #[arg(long)]
        check: bool,
        /// Distance to the frontiers below which points are not recounted.
        #[arg(long, default_value_t = 0.05, value_parser = parse::real)]
        margin: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// Sign variations, bound and certified roots of a signomial.
    Signomial {
        /// JSON array of `[coefficient, exponent]` pairs, or `-` for standard input.
        terms: String,
        /// Left end of the interval.
        #[arg(long, default_value = "0", value_parser = parse::endpoint)]
        lo: f64,
        /// Right end of the interval, or `inf`.
        #[arg(long, default_value = "inf", value_parser = parse::endpoint)]
        hi: f64,
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = parse::positive)]
        tol: f64,
        #[arg(long)]
        pretty: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Root-count bounds for two-equation systems.
    Bounds {
        #[command(subcommand)]
        kind: Bound,
    },
    /// Run the acceptance property suites.
    Verify {
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u8>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Bound {
    /// `2^n − 2` for a trinomial and an `n`-term equation.
    Straight {
        #[arg(short)]
        n: u32,
    },
    /// The fewnomial bound for degrees `d1,d2` in `k` exponentials.
    Khovanskii {
        #[arg(short, value_parser = parse::degree_pair)]
        d: (u32, u32),
        #[arg(short)]
        k: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Serialize)]
struct SignomialReport {
    terms: Signomial,
    sign_variations: usize,
    /// `min(sign variations, n − 1)`; absent for the zero signomial.
    laguerre_bound: Option<usize>,
    count: RootCount,
    roots: Vec<RootRecord>,
}

/// A failed command and the exit status it maps to.
struct Failure {
    status: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Tolerance(_) => 3,
            _ => 2,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            status: 1,
            message: e.to_string(),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure { status: 2, message }
}

fn sink(out: &Output) -> Result<Box<dyn Write>, Failure> {
    Ok(match &out.output {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).map_err(|e| {
                usage(format!("cannot write {}: {e}", path.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn workers() -> Result<usize, Failure> {
    match std::env::var(WORKERS_VAR) {
        Err(_) => Ok(1),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(usage(format!(
                "{WORKERS_VAR} must be a positive integer, got `{v}`"
            ))),
        },
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve {
            masses,
            b,
            tol,
            pretty,
            out,
        } => {
            let census = solve(MassTriple::from(masses), b, tol)?;
            let mut w = sink(&out)?;
            json::write(&mut w, &census, pretty)?;
            w.flush()?;
        }
        Command::Grid {
            m2,
            b,
            resolution,
            check,
            margin,
            format,
            out,
        } => {
            let m2_axis = Axis::new(m2.0, m2.1, resolution.0)?;
            let b_axis = Axis::new(b.0, b.1, resolution.1)?;
            let scan = grid_scan(m2_axis, b_axis, check, margin, workers()?)?;
            let mut w = sink(&out)?;
            match format {
                Format::Csv => write_csv(&mut w, &scan.points)?,
                Format::Json => json::write(&mut w, &scan, false)?,
            }
            w.flush()?;
            if !scan.mismatches.is_empty() {
                let mut err = io::stderr().lock();
                for m in &scan.mismatches {
                    let numeric = m.numeric.map_or_else(
                        || m.error.clone().unwrap_or_default(),
                        |c| format!("({}, {}, {})", c.e1, c.e2, c.e3),
                    );
                    let c = m.classified;
                    writeln!(
                        err,
                        "mismatch at m2={:.16e}, b={:.16e}: classified ({}, {}, {}), numeric {numeric}",
                        m.m2, m.b, c.e1, c.e2, c.e3
                    )?;
                }
                return Err(Failure {
                    status: 4,
                    message: format!(
                        "{} of {} recounted points disagree with the classification",
                        scan.mismatches.len(),
                        scan.checked
                    ),
                });
            }
        }
        Command::Signomial {
            terms,
            lo,
            hi,
            tol,
            pretty,
            out,
        } => {
            let text = if terms == "-" {
                io::read_to_string(io::stdin())?
            } else {
                terms
            };
            let p: Signomial = serde_json::from_str(&text)
                .map_err(|e| usage(format!("invalid term list: {e}")))?;
            if p.terms()
                .iter()
                .any(|t| !(t.coefficient.is_finite() && t.exponent.is_finite()))
            {
                return Err(usage("terms must be finite".into()));
            }
            let iso = count_and_isolate(&p, lo, hi, tol)?;
            let v = p.sign_variations();
            let report = SignomialReport {
                sign_variations: v,
                laguerre_bound: p.len().checked_sub(1).map(|n| n.min(v)),
                count: iso.count,
                roots: iso.roots,
                terms: p,
            };
            let mut w = sink(&out)?;
            json::write(&mut w, &report, pretty)?;
            w.flush()?;
        }
        Command::Bounds { kind } => {
            let value = match kind {
                Bound::Straight { n } => straight_bound(n)?,
                Bound::Khovanskii { d: (d1, d2), k } => khovanskii_bound(d1, d2, k)?,
            };
            println!("{value}");
        }
        Command::Verify { criterion, seed } => {
            let reports = match criterion {
                Some(id) => vec![run_one(id, seed)
                    .ok_or_else(|| usage(format!("no criterion {id}; criteria are 1 to 11")))?],
                None => run_all(seed),
            };
            let mut w = io::stdout().lock();
            for r in &reports {
                writeln!(w, "{r}")?;
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            writeln!(w, "{passed}/{} criteria passed", reports.len())?;
            if passed != reports.len() {
                return Err(Failure {
                    status: 4,
                    message: format!("{} criteria failed", reports.len() - passed),
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap reports usage errors with status 2
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("eulercc: {}", f.message);
            ExitCode::from(f.status)
        }
    }
}
