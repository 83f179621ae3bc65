//! Support code of the `qgraf` command-line tool.
//!
//! A run goes through three phases. The configuration is parsed and every
//! grid point is turned into a typed task, so any configuration error stops
//! the run before evaluation. The tasks are then evaluated in parallel and
//! collected in grid order. Finally the report is written in one piece.
//!
//! Exit codes: 0 when every point passes, 1 on a numerical failure, 2 on a
//! usage or configuration error. Configuration errors leave no report file.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complex;
pub mod config;
pub mod error;
pub mod grid;
pub mod ops;
pub mod params;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use qgraf_core::qseries::Truncation;
use rayon::prelude::*;

use config::{Command, Format, RunConfig};
use error::{config as config_err, CliError};
use report::{Metadata, Report, Row, Summary};

/// Environment variable overriding the default term cap.
pub const MAX_TERMS_ENV: &str = "QGRAF_MAX_TERMS";

#[derive(Debug, Parser)]
#[command(name = "qgraf", version, about = "Hahn-Exton q-Bessel evaluations, identity checks and limit scans")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Evaluate a function on a grid.
    Eval(RunArgs),
    /// Check an identity on a grid.
    Verify(RunArgs),
    /// Run a limit scan.
    Scan(RunArgs),
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Command-line overrides of a configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub threshold: Option<f64>,
    pub seed: Option<u64>,
}

fn truncation(cfg: &RunConfig) -> Result<Truncation, CliError> {
    let mut t = Truncation::default();
    if let Ok(v) = std::env::var(MAX_TERMS_ENV) {
        t.max_terms = v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{} must be a positive integer, got {:?}", MAX_TERMS_ENV, v)))?;
    }
    let o = &cfg.tolerance;
    if let Some(r) = o.rel_tol {
        t.rel_tol = r;
    }
    if let Some(a) = o.abs_tol {
        t.abs_tol = a;
    }
    if let Some(m) = o.max_terms {
        t.max_terms = m;
    }
    t.validated().map_err(|e| CliError::Config(e.to_string()))
}

/// Parses, evaluates and summarises a configuration without writing
/// anything. `Err` is always a configuration error.
pub fn execute(cfg: &RunConfig, command: Command, ov: Overrides) -> Result<Report, CliError> {
    if let Some(c) = cfg.command {
        if c != command {
            return config_err(format!(
                "config is for {} but {} was requested",
                c.as_str(),
                command.as_str()
            ));
        }
    }
    if !ops::known(command, &cfg.name) {
        return config_err(format!("unknown operation {:?} for {}", cfg.name, command.as_str()));
    }
    let threshold = ov.threshold.or(cfg.threshold);
    if let Some(t) = threshold {
        if !(t > 0.0) {
            return config_err(format!("threshold must be positive, got {}", t));
        }
    }
    let trunc = truncation(cfg)?;
    let points = grid::build_grid(cfg, command, ov.seed)?;
    let tasks = points
        .iter()
        .enumerate()
        .map(|(i, p)| ops::build_task(command, &cfg.name, p, threshold).map_err(|e| e.at_point(i)))
        .collect::<Result<Vec<_>, _>>()?;

    let outcomes: Vec<_> = tasks.par_iter().map(|t| t(&trunc)).collect();

    if let Some((i, msg)) = outcomes
        .iter()
        .enumerate()
        .find_map(|(i, o)| o.fatal.as_ref().map(|m| (i, m)))
    {
        return config_err(format!("grid point {}: {}", i, msg));
    }

    let mut warnings = Vec::new();
    let mut rows = Vec::new();
    let mut summary = Summary {
        points: points.len(),
        passed: 0,
        failed: 0,
        skipped: 0,
        max_rel_residual: None,
        max_abs_residual: None,
    };
    for (i, (p, o)) in points.into_iter().zip(outcomes).enumerate() {
        if o.skipped {
            summary.skipped += 1;
        } else if o.passed {
            summary.passed += 1;
        } else {
            summary.failed += 1;
        }
        fold_max(&mut summary.max_rel_residual, o.rel_residual);
        fold_max(&mut summary.max_abs_residual, o.abs_residual);
        warnings.extend(o.warnings.into_iter().map(|w| format!("point {}: {}", i, w)));
        rows.extend(o.rows.into_iter().map(|out| Row {
            index: i,
            inputs: p.clone(),
            out,
        }));
    }
    let effective = match command {
        Command::Verify => Some(threshold.unwrap_or(ops::DEFAULT_VERIFY_THRESHOLD)),
        _ => threshold,
    };
    let seed = cfg.random.as_ref().and_then(|r| ov.seed.or(cfg.seed).or(r.seed));
    Ok(Report {
        metadata: Metadata {
            command,
            name: cfg.name.clone(),
            rel_tol: trunc.rel_tol,
            abs_tol: trunc.abs_tol,
            max_terms: trunc.max_terms,
            threshold: effective,
            seed,
            warnings,
        },
        rows,
        summary,
    })
}

/// Running maximum in which NaN dominates.
fn fold_max(acc: &mut Option<f64>, x: Option<f64>) {
    if let Some(r) = x {
        let m = acc.get_or_insert(r);
        if r.is_nan() || *m < r {
            *m = r;
        }
    }
}

/// Runs one subcommand end to end and returns the exit code.
pub fn run_command(command: Command, args: &RunArgs) -> i32 {
    let outcome = (|| -> Result<i32, CliError> {
        let cfg = RunConfig::load(&args.config)?;
        let ov = Overrides {
            threshold: args.threshold,
            seed: args.seed,
        };
        let report = execute(&cfg, command, ov)?;
        let format = args.format.or(cfg.format).unwrap_or_default();
        let text = match format {
            Format::Json => report.to_json(),
            Format::Csv => report.to_csv(),
        };
        match args.out.as_ref().or(cfg.out.as_ref()) {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::Io(format!("cannot write {}: {}", path.display(), e)))?,
            None => std::io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))?,
        }
        Ok(if report.summary.all_passed() { 0 } else { 1 })
    })();
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qgraf: {}", e);
            e.exit_code()
        }
    }
}

/// Entry point of the binary; never panics on bad input.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (command, args) = match &cli.command {
        Sub::Eval(a) => (Command::Eval, a),
        Sub::Verify(a) => (Command::Verify, a),
        Sub::Scan(a) => (Command::Scan, a),
    };
    std::panic::catch_unwind(|| run_command(command, args)).unwrap_or_else(|_| {
        eprintln!("qgraf: internal error");
        1
    })
}
