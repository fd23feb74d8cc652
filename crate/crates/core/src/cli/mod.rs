//! Command-line driver: JSON config in, CSV files and a JSON manifest out.
//!
//! Exit codes: 0 success, 1 configuration or I/O error, 2 blow-up.

mod commands;
mod config;

pub use commands::{
    converge, simulate, steady, wellbalance, OutDir, RunReport, SimulateReport, SnapshotSummary,
};
pub use config::{
    load_config, ConvergeConfig, RunSpec, SimulateConfig, SteadyConfig, Study, WellBalanceConfig,
};

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BLOW_UP: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "swfem", version, about = "Galerkin shallow water solvers over variable bottom")]
pub struct Cli {
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads for studies; 0 runs rows serially on the main thread.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Seed for perturbed meshes, overriding the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spatial or temporal convergence table against a manufactured solution.
    Converge { config: PathBuf },
    /// Time-dependent run with profile snapshots, or a Froude-number sweep.
    Simulate { config: PathBuf },
    /// Lake-at-rest drift table for the balance-law scheme.
    Wellbalance { config: PathBuf },
    /// Preservation of an exact steady flow.
    Steady { config: PathBuf },
}

/// Contents of `manifest.json`; re-running a manifest file as the config
/// reproduces the CSV outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config_path: String,
    pub config: serde_json::Value,
    pub out_dir: String,
    pub threads: usize,
    pub seed: Option<u64>,
    pub status: String,
    pub exit_code: i32,
    pub message: Option<String>,
    pub outputs: Vec<String>,
    pub wall_seconds: f64,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BlowUp { .. } => EXIT_BLOW_UP,
        _ => EXIT_CONFIG,
    }
}

/// Result of a command: the exit code it maps to and an optional message.
struct Finished {
    code: i32,
    message: Option<String>,
    summary: String,
}

fn seeded<T>(mut cfg: T, seed: Option<u64>, set: impl FnOnce(&mut T, u64)) -> T {
    if let Some(s) = seed {
        set(&mut cfg, s);
    }
    cfg
}

fn dispatch(cli: &Cli, out: &mut OutDir) -> Result<(serde_json::Value, Finished)> {
    let ok = |summary: String| Finished { code: EXIT_OK, message: None, summary };
    let blown = |m: String| Finished { code: EXIT_BLOW_UP, message: Some(m.clone()), summary: m };
    match &cli.command {
        Command::Converge { config } => {
            let cfg = seeded(load_config::<ConvergeConfig>(config)?, cli.seed, |c, s| {
                if let Study::Spatial(sp) = &mut c.study {
                    sp.seed = s
                }
            });
            let table = converge(&cfg, cli.threads, out)?;
            let fin = match table.rows.iter().find_map(|r| r.failure.clone()) {
                Some(m) => blown(m),
                None => ok(table.to_csv()),
            };
            Ok((serde_json::to_value(&cfg)?, fin))
        }
        Command::Simulate { config } => {
            let cfg = seeded(load_config::<SimulateConfig>(config)?, cli.seed, |c, s| {
                if let SimulateConfig::Run(r) = c {
                    r.mesh.seed = s
                }
            });
            let fin = match simulate(&cfg, cli.threads, out)? {
                SimulateReport::Run(r) => match r.blow_up {
                    Some(m) => blown(m),
                    None => ok(format!(
                        "{} steps, {} profiles{}",
                        r.steps,
                        r.snapshots.len(),
                        r.steady_at.map(|t| format!(", steady at t = {t}")).unwrap_or_default()
                    )),
                },
                SimulateReport::Sweep(s) => ok(s.to_csv()),
            };
            Ok((serde_json::to_value(&cfg)?, fin))
        }
        Command::Wellbalance { config } => {
            let cfg = load_config::<WellBalanceConfig>(config)?;
            let table = wellbalance(&cfg, cli.threads, out)?;
            let fin = match table.rows.iter().find_map(|r| r.failure.clone()) {
                Some(m) => blown(m),
                None => ok(table.to_csv()),
            };
            Ok((serde_json::to_value(&cfg)?, fin))
        }
        Command::Steady { config } => {
            let cfg = load_config::<SteadyConfig>(config)?;
            let r = steady(&cfg, out)?;
            let summary = format!("drift eta {:.3e}, u {:.3e} after {} steps", r.drift[0], r.drift[1], r.steps);
            Ok((serde_json::to_value(&cfg)?, ok(summary)))
        }
    }
}

fn config_path(c: &Command) -> &Path {
    match c {
        Command::Converge { config }
        | Command::Simulate { config }
        | Command::Wellbalance { config }
        | Command::Steady { config } => config,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Converge { .. } => "converge",
        Command::Simulate { .. } => "simulate",
        Command::Wellbalance { .. } => "wellbalance",
        Command::Steady { .. } => "steady",
    }
}

/// Runs one parsed invocation and returns its exit code.
pub fn execute(cli: &Cli) -> i32 {
    let start = Instant::now();
    let mut out = match OutDir::new(Some(&cli.out)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let (config, fin) = match dispatch(cli, &mut out) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let manifest = RunManifest {
        tool: "swfem",
        version: env!("CARGO_PKG_VERSION"),
        command: command_name(&cli.command).into(),
        config_path: config_path(&cli.command).display().to_string(),
        config,
        out_dir: cli.out.display().to_string(),
        threads: cli.threads,
        seed: cli.seed,
        status: if fin.code == EXIT_OK { "ok" } else { "blow_up" }.into(),
        exit_code: fin.code,
        message: fin.message,
        outputs: out.written().to_vec(),
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    if let Err(e) = out.write("manifest.json", &text) {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    if fin.code == EXIT_OK {
        print!("{}", fin.summary);
        if !fin.summary.ends_with('\n') {
            println!();
        }
    } else {
        eprintln!("error: {}", fin.summary);
    }
    fin.code
}

/// Parses arguments (including the program name) and runs.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_OK
            }
        }
    }
}
