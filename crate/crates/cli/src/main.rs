use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ncofdm::exec::{with_workers, Exec};
use ncofdm::experiment::{run_ber, run_complexity, run_continuity_audit, run_psd, ExperimentConfig};
use ncofdm::Error;

#[derive(Parser)]
#[command(name = "ncofdm", version, about = "Sidelobe-suppressed OFDM experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Welch PSD of the selected scheme, plus the analytic PSD for the smoothed scheme
    Psd(Common),
    /// BER sweep over the configured SNR list
    Ber(Common),
    /// Per-junction derivative residuals
    Continuity(Common),
    /// Multiplication and addition counts for all schemes
    Complexity(Common),
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` config file; defaults are used for missing keys
    #[arg(long, short)]
    config: Option<PathBuf>,

    /// Override a config key, e.g. `--set n=3` (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    #[arg(long)]
    seed: Option<u64>,

    #[arg(long)]
    out_dir: Option<PathBuf>,

    /// Worker threads, 0 for one per core. Outputs do not depend on it.
    #[arg(long, default_value_t = 0)]
    workers: usize,

    /// Disable the thread pool entirely
    #[arg(long)]
    sequential: bool,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        for o in &self.overrides {
            cfg.apply_override(o)?;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(dir) = &self.out_dir {
            cfg.out_dir = dir.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        }
    }
}

type Runner = fn(Exec, &ExperimentConfig) -> ncofdm::Result<Vec<PathBuf>>;

fn run(command: &Command) -> Result<Vec<PathBuf>, Error> {
    let (common, f): (&Common, Runner) = match command {
        Command::Psd(c) => (c, run_psd),
        Command::Ber(c) => (c, run_ber),
        Command::Continuity(c) => (c, run_continuity_audit),
        Command::Complexity(c) => (c, |_, cfg| run_complexity(cfg)),
    };
    let cfg = common.resolve()?;
    let exec = common.exec();
    with_workers(common.workers, || f(exec, &cfg))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
