//! `softdress`: batch front end for the verification pipelines.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 on
//! malformed input or a numerical failure.

mod config;
mod pipelines;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use serde::Serialize;

use config::{Command, RunConfig};
use pipelines::Check;

#[derive(Debug, Parser)]
#[command(
    name = "softdress",
    version,
    about = "Dressed two-fermion state verification pipelines"
)]
struct Args {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Strict tolerance for the exact identities.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum)]
    command: Option<Command>,
}

#[derive(Serialize)]
struct Verdict<'a> {
    command: Command,
    seed: u64,
    tolerance: f64,
    pass: bool,
    checks: &'a [Check],
}

fn run(cfg: &RunConfig) -> Result<Vec<Check>> {
    let out = cfg.out.as_path();
    std::fs::create_dir_all(out).with_context(|| format!("creating output directory {}", out.display()))?;
    let mut checks = Vec::new();
    let wants = |c: Command| cfg.command == c || cfg.command == Command::All;
    if wants(Command::Phases) {
        checks.extend(pipelines::phases(cfg, out)?);
    }
    if wants(Command::Cancellation) {
        checks.extend(pipelines::cancellation(cfg, out)?);
    }
    if wants(Command::SpinRho) {
        checks.extend(pipelines::spin_rho(cfg, out)?);
    }
    if wants(Command::Softcount) {
        checks.extend(pipelines::softcount(cfg, out)?);
    }
    if wants(Command::Stationary) {
        checks.extend(pipelines::stationary(cfg, out)?);
    }
    Ok(checks)
}

fn configure(args: Args) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = args.out {
        cfg.out = out;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = args.tolerance {
        cfg.tolerance = tol;
    }
    if let Some(c) = args.command {
        cfg.command = c;
    }
    cfg.validate().context("invalid configuration")?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = configure(args).and_then(|cfg| {
        let checks = run(&cfg)?;
        let pass = checks.iter().all(|c| c.pass);
        let verdict = Verdict {
            command: cfg.command,
            seed: cfg.seed,
            tolerance: cfg.tolerance,
            pass,
            checks: &checks,
        };
        let path = cfg.out.join("verdict.json");
        let text = serde_json::to_string_pretty(&verdict)? + "\n";
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        for c in &checks {
            println!(
                "{}  {:<13} {} = {:.3e} (limit {:.1e})",
                if c.pass { "PASS" } else { "FAIL" },
                c.command,
                c.name,
                c.value,
                c.limit
            );
        }
        println!("{} -> {}", if pass { "PASS" } else { "FAIL" }, cfg.out.display());
        Ok(pass)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
