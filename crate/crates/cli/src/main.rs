//! `ortho-diffeq`: verify differential operators for generalized orthogonal
//! polynomials, search for new ones, check coefficient identities and emit
//! coefficient tables.
//!
//! Exit status: 0 pass, 1 mathematical failure (nonzero residual, mismatch,
//! inconsistent or under-determined search), 2 configuration or I/O error,
//! 3 numeric non-convergence.

mod commands;
mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use commands::{EmitTarget, IdentityTarget, SearchTarget, VerifyTarget};
use config::{CommandKind, RunConfig};

#[derive(Parser)]
#[command(name = "ortho-diffeq", version, about = "Exact differential operators for generalized orthogonal polynomials")]
struct Cli {
    /// TOML file with the same keys as the flags (plus `command`, `target`
    /// and, for `search custom`, a `[problem]` table). Flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    flags: RunConfig,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a known operator to a family and report exact residuals.
    Verify { target: Option<VerifyTarget> },
    /// Solve an ansatz for unknown operator coefficients.
    Search { target: Option<SearchTarget> },
    /// Check exact and numeric coefficient identities.
    Identities { target: Option<IdentityTarget> },
    /// Write a coefficient table as JSON, LaTeX or text.
    Emit { target: Option<EmitTarget> },
}

fn merged_config(cli: Cli) -> Result<RunConfig> {
    let base = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let mut flags = cli.flags;
    if let Some(cmd) = cli.command {
        let (kind, target) = match cmd {
            Command::Verify { target } => (CommandKind::Verify, target.map(|t| commands::target_name(&t))),
            Command::Search { target } => (CommandKind::Search, target.map(|t| commands::target_name(&t))),
            Command::Identities { target } => {
                (CommandKind::Identities, target.map(|t| commands::target_name(&t)))
            }
            Command::Emit { target } => (CommandKind::Emit, target.map(|t| commands::target_name(&t))),
        };
        flags.command = Some(kind);
        flags.target = target;
    }
    Ok(base.overlay(flags))
}

fn write_output(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let cfg = merged_config(cli)?;
    let command = cfg
        .command
        .ok_or_else(|| anyhow!("no command given (verify, search, identities or emit)"))?;
    let format = cfg.format.unwrap_or_default();
    let target = cfg
        .target
        .clone()
        .ok_or_else(|| anyhow!("no target given for {command:?}"))?;
    let report = match command {
        CommandKind::Verify => commands::verify(&cfg, commands::parse_target("verify", &target)?)?,
        CommandKind::Search => commands::search(&cfg, commands::parse_target("search", &target)?)?,
        CommandKind::Identities => {
            commands::identities(&cfg, commands::parse_target("identities", &target)?)?
        }
        CommandKind::Emit => {
            let text = commands::emit(&cfg, commands::parse_target("emit", &target)?, format)?;
            write_output(&cfg, &text)?;
            return Ok(0);
        }
    };
    write_output(&cfg, &report.render(format))?;
    Ok(report.status.exit_code())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
