//! Command-line driver: parameter sweeps, crossing detection, single-point
//! evaluation, and the built-in verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
//! 3 i/o failure.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use spinsqueeze::error::Error;
use spinsqueeze::sweep::{
    self, BasisConstants, OutputFormat, Quantity, SweepConfig,
};
use spinsqueeze::verify::{verify_with, InjectedFault, VerifySummary};

const EXIT_VERIFY_FAILURE: u8 = 1;
const EXIT_INVALID_CONFIG: u8 = 2;
const EXIT_IO_FAILURE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "spinsqueeze",
    about = "Uncertainties, entropies, and squeezing of entangled two-atom states",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep c1 over a grid and write the dataset to a file.
    Sweep(SweepArgs),
    /// Report intervals where a dataset column exceeds a level.
    Crossings(CrossingsArgs),
    /// Run the seeded random verification suite.
    Verify(VerifyArgs),
    /// Evaluate one parameter point and print the report as JSON.
    Point(PointArgs),
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    c1_start: Option<f64>,
    #[arg(long)]
    c1_end: Option<f64>,
    #[arg(long)]
    c1_step: Option<f64>,
    /// First basis constant; c4 defaults to +sqrt(1 - c3^2).
    #[arg(long, allow_negative_numbers = true)]
    c3: Option<f64>,
    /// Signed override for the derived c4.
    #[arg(long, allow_negative_numbers = true)]
    c4: Option<f64>,
    /// Second basis constant; c6 defaults to +sqrt(1 - c5^2).
    #[arg(long, allow_negative_numbers = true)]
    c5: Option<f64>,
    /// Signed override for the derived c6.
    #[arg(long, allow_negative_numbers = true)]
    c6: Option<f64>,
    /// Output file path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Comma-separated column subset (djx,djy,s_a,s_b,xi_s_x,xi_s_y,xi_r_x,xi_r_y,norm_j).
    #[arg(long)]
    quantities: Option<String>,
    /// Worker threads for row evaluation.
    #[arg(long)]
    threads: Option<usize>,
    /// Also write a gnuplot script plotting the dataset (squeezing
    /// parameters squared, matching the usual presentation).
    #[arg(long)]
    gnuplot: Option<PathBuf>,
    /// key=value file supplying defaults for any flag above.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct CrossingsArgs {
    /// CSV dataset produced by `sweep` (full schema).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Column to threshold.
    #[arg(long)]
    quantity: Option<String>,
    /// Threshold level.
    #[arg(long, allow_negative_numbers = true)]
    level: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    draws: Option<usize>,
    /// Plant a known defect to confirm the suite reports failure
    /// (supported: djy-cross-term).
    #[arg(long)]
    inject_fault: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c3: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c4: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c5: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c6: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

/// key=value file with one entry per line; `#` starts a comment.
struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    fn load(path: Option<&PathBuf>, known_keys: &[&str]) -> Result<Self, Error> {
        let mut values = HashMap::new();
        if let Some(path) = path {
            let text = fs::read_to_string(path)?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    Error::InvalidConfig(format!(
                        "{}:{}: expected key=value, got `{line}`",
                        path.display(),
                        lineno + 1
                    ))
                })?;
                let key = key.trim().to_string();
                if !known_keys.contains(&key.as_str()) {
                    return Err(Error::InvalidConfig(format!(
                        "{}:{}: unknown key `{key}`",
                        path.display(),
                        lineno + 1
                    )));
                }
                values.insert(key, value.trim().to_string());
            }
        }
        Ok(Self { values })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, Error> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::InvalidConfig(format!("config key `{key}`: cannot parse `{raw}`"))
            }),
        }
    }
}

/// Flag value if present, else config-file value, else error.
fn require<T: FromStr + Copy>(
    flag: Option<T>,
    config: &ConfigFile,
    key: &str,
) -> Result<T, Error> {
    if let Some(v) = flag {
        return Ok(v);
    }
    config
        .get::<T>(key)?
        .ok_or_else(|| Error::InvalidConfig(format!("missing required option `{key}`")))
}

fn basis_from(
    c3: f64,
    c4: Option<f64>,
    c5: f64,
    c6: Option<f64>,
) -> Result<BasisConstants, Error> {
    match (c4, c6) {
        (None, None) => BasisConstants::from_c3_c5(c3, c5),
        (c4, c6) => {
            let c4 = c4.unwrap_or_else(|| (1.0 - c3 * c3).max(0.0).sqrt());
            let c6 = c6.unwrap_or_else(|| (1.0 - c5 * c5).max(0.0).sqrt());
            BasisConstants::new(c3, c4, c5, c6)
        }
    }
}

fn run_sweep_command(args: SweepArgs) -> Result<(), Error> {
    const KEYS: [&str; 12] = [
        "c1_start", "c1_end", "c1_step", "c3", "c4", "c5", "c6", "out", "format", "quantities",
        "threads", "gnuplot",
    ];
    let config = ConfigFile::load(args.config.as_ref(), &KEYS)?;

    let c1_start = require(args.c1_start, &config, "c1_start")?;
    let c1_end = require(args.c1_end, &config, "c1_end")?;
    let c1_step = require(args.c1_step, &config, "c1_step")?;
    let c3 = require(args.c3, &config, "c3")?;
    let c5 = require(args.c5, &config, "c5")?;
    let c4 = optional(args.c4, &config, "c4")?;
    let c6 = optional(args.c6, &config, "c6")?;
    let out: PathBuf = match args.out {
        Some(p) => p,
        None => config
            .get::<PathBuf>("out")?
            .ok_or_else(|| Error::InvalidConfig("missing required option `out`".into()))?,
    };
    let format = match optional(args.format, &config, "format")? {
        Some(raw) => raw.parse::<OutputFormat>()?,
        None => OutputFormat::Csv,
    };
    let quantities = match optional(args.quantities, &config, "quantities")? {
        Some(raw) => Some(parse_quantities(&raw)?),
        None => None,
    };
    let threads = optional(args.threads, &config, "threads")?.unwrap_or(1);
    let gnuplot: Option<PathBuf> = match args.gnuplot {
        Some(p) => Some(p),
        None => config.get::<PathBuf>("gnuplot")?,
    };

    let mut sweep_config = SweepConfig::new(c1_start, c1_end, c1_step, basis_from(c3, c4, c5, c6)?);
    sweep_config.output = Some(out.clone());
    sweep_config.format = format;
    sweep_config.quantities = quantities;
    sweep_config.threads = threads;

    let rows = sweep::run_sweep(&sweep_config)?;
    if let Some(script) = gnuplot {
        sweep::write_gnuplot_stub(&script, &out)?;
    }
    eprintln!("wrote {} rows to {}", rows.len(), out.display());
    Ok(())
}

fn optional<T>(flag: Option<T>, config: &ConfigFile, key: &str) -> Result<Option<T>, Error>
where
    T: FromStr,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => config.get::<T>(key),
    }
}

fn parse_quantities(raw: &str) -> Result<Vec<Quantity>, Error> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Quantity::from_str)
        .collect()
}

fn run_crossings_command(args: CrossingsArgs) -> Result<(), Error> {
    const KEYS: [&str; 3] = ["in", "quantity", "level"];
    let config = ConfigFile::load(args.config.as_ref(), &KEYS)?;
    let input: PathBuf = match args.input {
        Some(p) => p,
        None => config
            .get::<PathBuf>("in")?
            .ok_or_else(|| Error::InvalidConfig("missing required option `in`".into()))?,
    };
    let quantity_name = match args.quantity {
        Some(q) => q,
        None => config
            .get::<String>("quantity")?
            .ok_or_else(|| Error::InvalidConfig("missing required option `quantity`".into()))?,
    };
    let level = require(args.level, &config, "level")?;

    let quantity = quantity_name.parse::<Quantity>()?;
    let mut rows = sweep::read_csv(&input)?;
    rows.sort_by(|a, b| a.c1.total_cmp(&b.c1));
    for (start, end) in sweep::find_crossings(&rows, quantity, level) {
        println!("{start:.16e} {end:.16e}");
    }
    Ok(())
}

fn run_verify_command(args: VerifyArgs) -> Result<VerifySummary, Error> {
    const KEYS: [&str; 2] = ["seed", "draws"];
    let config = ConfigFile::load(args.config.as_ref(), &KEYS)?;
    let seed = optional(args.seed, &config, "seed")?.unwrap_or(42);
    let draws = optional(args.draws, &config, "draws")?.unwrap_or(1000);
    if draws < 1 {
        return Err(Error::InvalidConfig("draws must be ≥ 1".into()));
    }
    let fault = match args.inject_fault.as_deref() {
        None => InjectedFault::None,
        Some("djy-cross-term") => InjectedFault::NegateDjyCrossTerm,
        Some(other) => {
            return Err(Error::InvalidConfig(format!(
                "unknown fault `{other}` (supported: djy-cross-term)"
            )))
        }
    };

    let summary = verify_with(seed, draws, fault);
    println!("verification: seed {seed}, {draws} draws");
    for r in &summary.results {
        println!(
            "{status} {name:<42} max deviation {dev:10.3e}  tolerance {tol:8.1e}  ({n} checks)",
            status = if r.pass { "PASS" } else { "FAIL" },
            name = r.name,
            dev = r.max_deviation,
            tol = r.tolerance,
            n = r.draws,
        );
    }
    let failed = summary.results.iter().filter(|r| !r.pass).count();
    if failed == 0 {
        println!("all {} properties pass", summary.results.len());
    } else {
        println!("{failed} of {} properties FAILED", summary.results.len());
    }
    Ok(summary)
}

fn run_point_command(args: PointArgs) -> Result<(), Error> {
    const KEYS: [&str; 5] = ["c1", "c3", "c4", "c5", "c6"];
    let config = ConfigFile::load(args.config.as_ref(), &KEYS)?;
    let c1 = require(args.c1, &config, "c1")?;
    let c3 = require(args.c3, &config, "c3")?;
    let c5 = require(args.c5, &config, "c5")?;
    let c4 = optional(args.c4, &config, "c4")?;
    let c6 = optional(args.c6, &config, "c6")?;

    let basis = basis_from(c3, c4, c5, c6)?;
    let report = sweep::evaluate_point(c1, &basis)?;
    println!("{}", sweep::json_row_string(&report, None));
    Ok(())
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::MalformedFile(_) => EXIT_IO_FAILURE,
        _ => EXIT_INVALID_CONFIG,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<u8, Error> = match cli.command {
        Command::Sweep(args) => run_sweep_command(args).map(|()| 0),
        Command::Crossings(args) => run_crossings_command(args).map(|()| 0),
        Command::Verify(args) => run_verify_command(args).map(|summary| {
            if summary.all_pass() {
                0
            } else {
                EXIT_VERIFY_FAILURE
            }
        }),
        Command::Point(args) => run_point_command(args).map(|()| 0),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
