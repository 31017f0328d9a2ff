//! Command-line verification runner: loads a JSON config, evaluates the checks of one suite on
//! a grid of base points and fibre samples, and writes a JSON report plus CSV tables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod grid;
pub mod report;
pub mod suites;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::report::VerificationReport;
use crate::suites::{Context, SuiteOutput};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ffhk", version, about = "Verify the focus-focus hyperkahler construction numerically")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON config; built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Number of base points (overrides grid.n_c).
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Multiplies every residual tolerance.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub tol_scale: f64,
    /// Output directory (overrides output_dir).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Local model: gluing, action-angle coordinates, monodromy, holomorphic data.
    CheckModel,
    /// Semi-flat metric: coefficients, identities, positivity. Writes semiflat.csv.
    Semiflat,
    /// Generalized Ooguri-Vafa space. Writes ov.csv.
    Ov,
    /// Instanton-corrected twistor family and the extracted metric. Writes gmn.csv.
    Gmn,
    /// Every suite.
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckModel => "check-model",
            Command::Semiflat => "semiflat",
            Command::Ov => "ov",
            Command::Gmn => "gmn",
            Command::All => "all",
        }
    }

    fn suites(self) -> Vec<fn(&Context) -> SuiteOutput> {
        match self {
            Command::CheckModel => vec![suites::check_model],
            Command::Semiflat => vec![suites::semiflat],
            Command::Ov => vec![suites::ov],
            Command::Gmn => vec![suites::gmn],
            Command::All => vec![suites::check_model, suites::semiflat, suites::ov, suites::gmn],
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(|e| e.to_string())?,
        None => RunConfig::default(),
    };
    if let Some(n) = cli.points {
        cfg.grid.n_c = n;
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    cfg.validate().map_err(|e| e.to_string())?;
    if !(cli.tol_scale > 0.0 && cli.tol_scale.is_finite()) {
        return Err(format!("--tol-scale must be positive, got {}", cli.tol_scale));
    }
    Ok(cfg)
}

/// Run one command and return the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let cfg = match resolve_config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let start = Instant::now();
    let ctx = Context::new(cfg.clone(), cli.tol_scale);
    let mut checks = Vec::new();
    let mut tables = Vec::new();
    for suite in cli.command.suites() {
        let out = suite(&ctx);
        checks.extend(out.checks);
        tables.extend(out.tables);
    }
    let report = VerificationReport::new(cli.command.name(), cfg, cli.tol_scale, checks, start.elapsed().as_secs_f64());

    if let Err(e) = write_outputs(&report, &tables) {
        eprintln!("error: cannot write outputs to {}: {e}", report.config.output_dir.display());
        return EXIT_CONFIG;
    }

    println!("ffhk {} {}", report.tool_version, report.command);
    for c in &report.checks {
        println!("{}", c.summary_line());
    }
    let verdict = match report.exit_code() {
        EXIT_PASS => "PASS",
        EXIT_NUMERICAL => "NUMERICAL FAILURE",
        _ => "FAIL",
    };
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    println!("{verdict}: {failed} of {} checks failed, {:.2} s", report.checks.len(), report.wall_time_s);
    report.exit_code()
}

fn write_outputs(report: &VerificationReport, tables: &[report::Table]) -> Result<(), Box<dyn std::error::Error>> {
    let dir = &report.config.output_dir;
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}_report.json", report.command));
    std::fs::write(&path, serde_json::to_string_pretty(report)? + "\n")?;
    for t in tables {
        t.write(dir)?;
    }
    Ok(())
}
