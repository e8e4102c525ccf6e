//! `levy-ou run --config exp.toml [--seed N] [--threads N] [--out DIR]`
//! `levy-ou list`
//!
//! Exit status: 0 all checks pass, 1 a check failed, 2 configuration
//! error, 3 numerical failure.

mod config;
mod experiments;

use clap::{Parser, Subcommand};
use config::{ExperimentConfig, Kind};
use experiments::{Check, Outcome, Table};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "levy-ou", version, about = "Experiments on subordinated Lévy noise and OU fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `master_seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory (default: `output.dir` or `out`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the experiment kinds and the result each one exercises.
    List,
}

#[derive(Serialize)]
#[serde(rename_all = "kebab-case")]
enum Status {
    Pass,
    Fail,
    ConfigError,
    NumericError,
}

#[derive(Serialize)]
struct Report<'a> {
    kind: &'static str,
    result: &'static str,
    master_seed: u64,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    config: &'a config::Experiment,
    checks: Vec<Check>,
    summary: serde_json::Value,
    artifacts: Vec<String>,
}

fn write_table(dir: &Path, t: &Table) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(dir.join(&t.name))?;
    w.write_record(&t.header)?;
    for row in &t.rows {
        w.write_record(row)?;
    }
    w.flush()
}

fn write_report(dir: &Path, report: &Report, tables: &[Table]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for t in tables {
        write_table(dir, t)?;
    }
    let mut text = serde_json::to_string_pretty(report).map_err(std::io::Error::other)?;
    text.push('\n');
    std::fs::write(dir.join("report.json"), text)
}

fn list() {
    println!("{:<20} {:<9} summary", "kind", "result");
    for k in Kind::ALL {
        println!("{:<20} {:<9} {}", k.name(), k.result_tag(), k.summary());
    }
}

fn run(cfg: ExperimentConfig, out: PathBuf) -> ExitCode {
    let kind = cfg.experiment.kind();
    let outcome = experiments::run(&cfg.experiment, cfg.master_seed);
    let (status, error, code, Outcome { checks, summary, tables }) = match outcome {
        Ok(o) => {
            let pass = o.checks.iter().all(|c| c.pass);
            let (s, c) = if pass { (Status::Pass, 0) } else { (Status::Fail, 1) };
            (s, None, c, o)
        }
        Err(e) => {
            let (s, c) = match e {
                levy_ou::Error::Config(_) => (Status::ConfigError, 2),
                _ => (Status::NumericError, 3),
            };
            eprintln!("error: {e}");
            (s, Some(e.to_string()), c, Outcome { checks: Vec::new(), summary: serde_json::Value::Null, tables: Vec::new() })
        }
    };
    for c in &checks {
        println!("{}: {} {} {} [{}]", c.name, c.value, c.relation, c.limit, if c.pass { "PASS" } else { "FAIL" });
    }
    let report = Report {
        kind: kind.name(),
        result: kind.result_tag(),
        master_seed: cfg.master_seed,
        status,
        error,
        config: &cfg.experiment,
        checks,
        summary,
        artifacts: tables.iter().map(|t| t.name.clone()).collect(),
    };
    if let Err(e) = write_report(&out, &report, &tables) {
        eprintln!("error: cannot write to {}: {e}", out.display());
        return ExitCode::from(3);
    }
    println!("{} -> {}", kind.name(), out.join("report.json").display());
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            list();
            ExitCode::SUCCESS
        }
        Command::Run { config, seed, threads, out } => {
            let mut cfg = match config::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(2);
                }
            };
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            if let Some(n) = threads {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("error: thread pool: {e}");
                    return ExitCode::from(2);
                }
            }
            let out = out.or_else(|| cfg.output.dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
            run(cfg, out)
        }
    }
}
