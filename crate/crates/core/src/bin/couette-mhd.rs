use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use couette_mhd::config::{Experiment, ExperimentConfig};
use couette_mhd::runner::{run, RunOptions};
use couette_mhd::{Error, Result};

/// Sheared-frame MHD experiments around Couette flow.
#[derive(Parser)]
#[command(name = "couette-mhd", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the seed of random initial data.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of evenly spaced state snapshots to write.
        #[arg(long, default_value_t = 0)]
        snapshots: usize,
    },
    /// Check a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the weight inequality audit (defaults unless a config is given).
    Audit {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &PathBuf) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    ExperimentConfig::from_json(&text)
}

fn main_inner(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Run { config, out, seed, snapshots } => {
            let cfg = load(&config)?;
            let o = run(&cfg, &RunOptions { out_dir: out, seed, snapshots })?;
            println!("{}", serde_json::to_string_pretty(&o.summary["results"])?);
            for f in &o.files {
                eprintln!("wrote {}", f.display());
            }
        }
        Cmd::Validate { config } => {
            let cfg = load(&config)?;
            println!("ok: {:?} config, sha256 {}", cfg.experiment, cfg.hash());
        }
        Cmd::Audit { config, out } => {
            let mut cfg = match config {
                Some(p) => load(&p)?,
                None => ExperimentConfig::new(Experiment::WeightsAudit),
            };
            cfg.experiment = Experiment::WeightsAudit;
            let o = run(&cfg, &RunOptions { out_dir: out, ..Default::default() })?;
            let res = &o.summary["results"];
            println!("hard_checks_pass={} constants_finite={}", res["hard_checks_pass"], res["constants_finite"]);
            for f in &o.files {
                eprintln!("wrote {}", f.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
