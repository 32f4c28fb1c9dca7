use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cmeis::field::Setup;
use cmeis::oracle::singular_moduli_check;
use cmeis::record::{
    degree_record, holomorphic_records, nonholomorphic_records, parse_decimal, write_csv, write_json_lines, Display,
};
use cmeis::verify::{self, Options, Suite};
use cmeis::Error;

const EXIT_HELP: &str = "\
Exit codes:
  0  success, all checks passed
  1  verification failure
  2  usage or setup error
  3  precision failure

Environment:
  CMEIS_PRECISION_BITS  starting precision in bits for class polynomials";

#[derive(Parser)]
#[command(name = "cmeis", version, about = "Fourier coefficients of the central derivative of Hecke's weight-one Hilbert Eisenstein series and degrees of CM cycles", after_help = EXIT_HELP)]
struct Cli {
    /// Significant digits in decimal output.
    #[arg(long, global = true, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..=1000))]
    digits: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Discriminants {
    /// First fundamental discriminant (negative).
    #[arg(long, allow_negative_numbers = true)]
    d1: i64,
    /// Second fundamental discriminant, coprime to the first.
    #[arg(long, allow_negative_numbers = true)]
    d2: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Emit one record per totally positive alpha with trace up to M; with
    /// --v1/--v2 also the constant term and mixed-signature coefficients.
    Coeffs {
        #[command(flatten)]
        disc: Discriminants,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..=10_000))]
        trace_max: i64,
        /// Imaginary part at the first real place, decimal or p/q.
        #[arg(long, requires = "v2")]
        v1: Option<String>,
        /// Imaginary part at the second real place, decimal or p/q.
        #[arg(long, requires = "v1")]
        v2: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Degree of T_m as a log-linear map and a decimal value.
    Degree {
        #[command(flatten)]
        disc: Discriminants,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..=10_000))]
        m: i64,
    },
    /// Compare deg T_1 with the factorization of Res(H_d1, H_d2).
    SingularModuli {
        #[command(flatten)]
        disc: Discriminants,
        /// Starting precision in bits; overrides CMEIS_PRECISION_BITS.
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Run invariant suites; failures are reported on stderr as JSON lines.
    Verify {
        #[arg(long, default_value = "all", value_parser = ["arith", "field", "genus", "eisenstein", "oracle", "all"])]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

enum Failure {
    Verification(String),
    Usage(String),
    Precision(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InsufficientPrecision(_) => Failure::Precision(e.to_string()),
            Error::Inconsistent(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

fn setup(d: &Discriminants) -> Result<Setup, Failure> {
    Ok(Setup::new(d.d1, d.d2)?)
}

fn env_precision() -> Result<Option<u32>, Failure> {
    match std::env::var("CMEIS_PRECISION_BITS") {
        Ok(s) => s
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|&b| b >= 64)
            .map(Some)
            .ok_or_else(|| Failure::Usage(format!("CMEIS_PRECISION_BITS must be an integer >= 64, got {s:?}"))),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let display = Display { digits: cli.digits as usize };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Coeffs { disc, trace_max, v1, v2, format } => {
            let s = setup(&disc)?;
            let mut records = holomorphic_records(&s, trace_max, display)?;
            if let (Some(v1), Some(v2)) = (v1, v2) {
                let (v1, v2) = (parse_decimal(&v1)?, parse_decimal(&v2)?);
                records.extend(nonholomorphic_records(&s, trace_max, &v1, &v2, display)?);
            }
            match format {
                Format::Json => write_json_lines(&mut out, &records)?,
                Format::Csv => write_csv(&mut out, &records)?,
            }
        }
        Command::Degree { disc, m } => {
            let r = degree_record(&setup(&disc)?, m, display)?;
            write_json_lines(&mut out, &[r])?;
        }
        Command::SingularModuli { disc, precision } => {
            let s = setup(&disc)?;
            let precision = match precision {
                Some(p) => Some(p),
                None => env_precision()?,
            };
            let r = singular_moduli_check(&s, precision)?;
            write_json_lines(&mut out, std::slice::from_ref(&r))?;
            if !r.passed {
                out.flush()?;
                return Err(Failure::Verification(format!("deg T_1 = {} but 8/(w1 w2) log|Res| = {}", r.lhs, r.rhs)));
            }
        }
        Command::Verify { suite, seed, inject_fault } => {
            let suite: Suite = suite.parse()?;
            if let Some(f) = &inject_fault {
                if !verify::invariant_names().contains(&f.as_str()) {
                    return Err(Failure::Usage(format!("unknown invariant {f:?}")));
                }
            }
            let opts = Options { seed, fault: inject_fault, precision: env_precision()? };
            let report = verify::run(suite, &opts);
            for o in &report.outcomes {
                let status = if o.failure.is_none() { "ok" } else { "FAILED" };
                writeln!(out, "{status:6} {:10} {} ({} cases)", o.suite.to_string(), o.invariant, o.cases)?;
            }
            out.flush()?;
            if !report.passed() {
                let stderr = io::stderr();
                let mut err = stderr.lock();
                for o in report.failures() {
                    let line = serde_json::to_string(o).expect("outcome serializes");
                    writeln!(err, "{line}")?;
                }
                return Err(Failure::Verification(format!("{} invariant(s) failed", report.failures().count())));
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("cmeis: verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("cmeis: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Precision(m)) => {
            eprintln!("cmeis: {m}");
            ExitCode::from(3)
        }
    }
}
