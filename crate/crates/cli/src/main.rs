use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use fair_hitl::harness::{self, RunConfig};

/// Reproduce the governor, mediator and comfort experiments from a config file.
#[derive(Debug, Parser)]
#[command(name = "fair-hitl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario and write its artifacts.
    Run {
        #[command(flatten)]
        common: Common,
        /// Run this many consecutive seeds, starting at the configured one, concurrently.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Compute the brute-force performance maps of a scenario only.
    Oracle {
        #[command(flatten)]
        common: Common,
    },
    /// Print the scenario names.
    ListScenarios,
}

/// Flags override the config file, which overrides the defaults.
#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = harness::load_config(&self.config)?;
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(s) = &self.scenario {
            cfg.scenario = s.clone();
        }
        if let Some(o) = &self.out {
            cfg.out_dir = o.clone();
        }
        harness::check_scenario(&cfg.scenario)?;
        Ok(cfg)
    }
}

fn print_dirs(dirs: &[PathBuf]) {
    for d in dirs {
        println!("{}", d.display());
    }
}

fn run(cmd: Command) -> anyhow::Result<()> {
    match cmd {
        Command::Run { common, parallel } => {
            let cfg = common.load()?;
            if parallel == 0 {
                bail!("--parallel must be at least 1");
            }
            let configs: Vec<RunConfig> = (0..parallel as u64)
                .map(|k| RunConfig {
                    seed: cfg.seed + k,
                    ..cfg.clone()
                })
                .collect();
            let results: Vec<_> = std::thread::scope(|s| {
                let handles: Vec<_> = configs
                    .iter()
                    .map(|c| s.spawn(move || harness::run(c)))
                    .collect();
                handles.into_iter().map(|h| h.join().expect("run thread panicked")).collect()
            });
            for (c, r) in configs.iter().zip(results) {
                let dirs = r.with_context(|| format!("seed {}", c.seed))?;
                print_dirs(&dirs);
            }
        }
        Command::Oracle { common } => {
            let cfg = common.load()?;
            print_dirs(&harness::run_oracle_only(&cfg)?);
        }
        Command::ListScenarios => {
            for (name, what) in harness::SCENARIOS {
                println!("{name}\t{what}");
            }
            println!("{}\tevery scenario above", harness::ALL);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
