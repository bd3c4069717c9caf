//! `iqoap` runs the lattice experiments and writes their tables as CSV.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use iqoap_cli::config::{self, Experiment, ExperimentConfig};
use iqoap_cli::commands;
use iqoap_cli::error::CliError;

#[derive(Parser)]
#[command(name = "iqoap", version, about = "Iterative QAOA lattice reduction experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Truncated energy spectra of the built-in bases.
    Spectrum(Common),
    /// Lowest nonzero energy against qubits per dimension.
    Scaling(Common),
    /// Repeated adaptive runs on one basis.
    Converge(Common),
    /// One adaptive run on each of many random lattices.
    Ensemble(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment manifest.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated qubits-per-dimension values.
    #[arg(long)]
    k: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("iqoap: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    let (experiment, common) = match command {
        Command::Spectrum(c) => (Experiment::Spectrum, c),
        Command::Scaling(c) => (Experiment::Scaling, c),
        Command::Converge(c) => (Experiment::Converge, c),
        Command::Ensemble(c) => (Experiment::Ensemble, c),
    };
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    config.check_experiment(experiment)?;
    if let Some(seed) = common.seed {
        config.seed = Some(seed);
    }
    if let Some(out) = common.out {
        config.out = Some(out);
    }
    if let Some(k) = &common.k {
        config.k = Some(config::parse_k_list(k)?);
    }

    let report = match experiment {
        Experiment::Spectrum => commands::spectrum(&config)?,
        Experiment::Scaling => commands::scaling(&config)?,
        Experiment::Converge => commands::converge(&config)?,
        Experiment::Ensemble => commands::ensemble(&config)?,
    };
    let out_dir = config.out_dir();
    report.outputs.write_all(&out_dir)?;
    for line in &report.summary {
        println!("{line}");
    }
    println!("wrote {} file(s) to {}", report.outputs.paths().count(), out_dir.display());
    Ok(())
}
