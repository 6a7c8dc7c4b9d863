//! Command-line front end for `nimkerr`: config loading, sweeps, protocol
//! runs and deterministic CSV/JSON output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use nimkerr::Execution;

pub use config::{load_config, Format, Overrides, RunConfig};
pub use error::CliError;
pub use output::Report;

#[derive(Debug, Parser)]
#[command(
    name = "nimkerr",
    version,
    about = "Surface-polariton cross-Kerr model: dispersion, Kerr sweeps, entanglement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frequency where Im K(ω) vanishes.
    ZeroLoss(CommonArgs),
    /// K, k⊥, ξ and v_g over the frequency grid.
    Dispersion(CommonArgs),
    /// χ and φ over the frequency grid.
    Fig3(CommonArgs),
    /// Cross-Kerr evolution of two coherent states.
    EntangleCoherent(CommonArgs),
    /// Seeded qubit entangling protocol with homodyne detection.
    NemotoMunro(CommonArgs),
}

impl Command {
    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::ZeroLoss(a)
            | Command::Dispersion(a)
            | Command::Fig3(a)
            | Command::EntangleCoherent(a)
            | Command::NemotoMunro(a) => a,
        }
    }
}

/// Quantities accept a unit suffix: `440THz`, `1MHz`, `2um`, `pi`.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega_max: Option<String>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub bracket_lo: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub bracket_hi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Qubit a amplitudes as `c0,c1`.
    #[arg(long, allow_hyphen_values = true)]
    pub qubit_a: Option<String>,
    /// Qubit b amplitudes as `d0,d1`.
    #[arg(long, allow_hyphen_values = true)]
    pub qubit_b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub length: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub shots: Option<usize>,
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Disable the thread pool.
    #[arg(long)]
    pub sequential: bool,
}

impl CommonArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            preset: self.preset.clone(),
            omega_min: self.omega_min.clone(),
            omega_max: self.omega_max.clone(),
            points: self.points,
            bracket_lo: self.bracket_lo.clone(),
            bracket_hi: self.bracket_hi.clone(),
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            phi: self.phi.clone(),
            qubit_a: self.qubit_a.clone(),
            qubit_b: self.qubit_b.clone(),
            eta: self.eta.clone(),
            length: self.length.clone(),
            dim: self.dim,
            seed: self.seed,
            shots: self.shots,
            out: self.out.clone(),
            format: self.format,
        }
    }

    pub fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

pub fn build_report(command: &Command, config: &RunConfig) -> Result<Report, CliError> {
    let exec = command.args().execution();
    match command {
        Command::ZeroLoss(_) => commands::cmd_zero_loss(config),
        Command::Dispersion(_) => commands::cmd_dispersion(config, exec),
        Command::Fig3(_) => commands::cmd_fig3(config, exec),
        Command::EntangleCoherent(_) => commands::cmd_entangle_coherent(config),
        Command::NemotoMunro(_) => commands::cmd_nemoto_munro(config, exec),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
/// Errors go to `stderr` as one line of JSON.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };
    match run(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            1
        }
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let args = cli.command.args();
    let config = load_config(args.config.as_deref(), &args.overrides())?;
    let report = build_report(&cli.command, &config)?;
    output::emit(&report, config.format, config.out.as_deref().map(std::path::Path::new), stdout)
}

#[cfg(test)]
mod tests;
