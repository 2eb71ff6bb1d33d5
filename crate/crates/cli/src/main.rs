//! `afvlasov` command line driver.
//!
//! ```text
//! afvlasov [--output-dir DIR] [--histopolate] run --config FILE
//! afvlasov [--output-dir DIR] [--histopolate] convergence --config FILE --levels 16,32,64 --reference 256
//! ```
//!
//! Exit codes: 0 ok, 2 configuration error, 3 CFL violation, 4 I/O error.

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use afvlasov::SimConfig;
use clap::{Parser, Subcommand};

use crate::output::FileWriter;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] afvlasov::Error),
    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(afvlasov::Error::Cfl(_)) => 3,
            CliError::Core(afvlasov::Error::Io(_)) | CliError::Io { .. } => 4,
            CliError::Core(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "afvlasov", version, about = "Split-step Active Flux Vlasov-Poisson solver")]
struct Cli {
    /// Overrides `output_dir` from the config file.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Also write histopolated point-value snapshots.
    #[arg(long, global = true)]
    histopolate: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation, writing diagnostics and snapshots.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Self-convergence sweep against a finer reference run.
    Convergence {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated power-of-two resolutions, coarsest first.
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<usize>,
        #[arg(long)]
        reference: usize,
    },
}

fn load(path: &Path, output_dir: Option<PathBuf>) -> Result<SimConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut cfg = config::parse_config(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    if let Some(dir) = output_dir {
        cfg.output_dir = dir;
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config } => {
            let cfg = load(&config, cli.output_dir)?;
            let mut writer = FileWriter::create(&cfg, cli.histopolate)?;
            let sim = afvlasov::run(&cfg, &mut writer)?;
            writer.finish()?;
            eprintln!(
                "{} {} {}: {} steps to t = {}, output in {}",
                cfg.problem.kind.name(),
                cfg.scheme.name(),
                cfg.splitting.name(),
                sim.steps(),
                sim.time(),
                cfg.output_dir.display()
            );
        }
        Command::Convergence {
            config,
            levels,
            reference,
        } => {
            let cfg = load(&config, cli.output_dir)?;
            let rows = afvlasov::convergence(&cfg, &levels, reference)?;
            let table = output::convergence_table(&rows);
            print!("{table}");
            output::write_file(&cfg.output_dir, "convergence.csv", &table)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
