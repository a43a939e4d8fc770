//! Front end for the `nearfield` binary: config-driven flux scans, exact
//! Wronskian coefficient tables and identity checks.

pub mod commands;
pub mod config;
pub mod error;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::CheckKind;
pub use config::{OutputFormat, RunConfig};
pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "nearfield",
    version,
    about = "Scattered flux through spheres of finite radius"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Run configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output format; overrides the config.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Total and differential flux over the configured distances.
    Flux,
    /// Exact coefficients A_n(l, j) of the half-Wronskian series.
    Coeffs {
        #[arg(long, default_value_t = 3)]
        l: u32,
        #[arg(long, required_unless_present = "table")]
        j: Option<u32>,
        /// All j = 0..=l, one column each.
        #[arg(long, conflicts_with = "j")]
        table: bool,
    },
    /// Checks identities against their tolerances; exits 1 on any failure.
    Check {
        #[arg(value_enum, default_value_t = CheckKind::All)]
        which: CheckKind,
    },
}

/// Outcome of a command that ran to completion.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

fn load_config(cli: &Cli, required: bool) -> Result<Option<RunConfig>> {
    match &cli.config {
        Some(path) => RunConfig::load(path).map(Some),
        None if required => Err(CliError::Config("this command needs --config".into())),
        None => Ok(None),
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let config = load_config(cli, matches!(cli.command, Command::Flux))?;
    let format = cli
        .format
        .or(config.as_ref().map(|c| c.format))
        .unwrap_or_default();
    let (text, pass) = match &cli.command {
        Command::Flux => (
            commands::cmd_flux(config.as_ref().expect("required"), format)?,
            true,
        ),
        Command::Coeffs { l, j, table } => {
            let text = match (table, j) {
                (true, _) | (false, None) => commands::cmd_coeff_table(*l, format)?,
                (false, Some(j)) => commands::cmd_coeffs(*l, *j, format)?,
            };
            (text, true)
        }
        Command::Check { which } => {
            let config = config.unwrap_or_else(RunConfig::default_model);
            commands::cmd_check(*which, &config, format)?
        }
    };
    Ok(Outcome { text, pass })
}

/// Runs `cli`, writes its output and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let outcome = match execute(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &outcome.text),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        let e = CliError::from(e);
        eprintln!("error: {e}");
        return e.exit_code();
    }
    if outcome.pass {
        0
    } else {
        1
    }
}
