use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cmab::harness::{
    grid_search, horizon_sweep, run_experiment, write_grid_search, write_run, write_sweep,
    RunConfig,
};

#[derive(Parser)]
#[command(name = "cmab", version, about = "Contextual bandit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured algorithm and write per-algorithm CSVs.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the repetition count.
        #[arg(long)]
        reps: Option<usize>,
    },
    /// Pick the best confidence multiplier per algorithm.
    GridSearch {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        multipliers: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the experiment at several horizons.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        horizons: Vec<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(path: &Path) -> cmab::Result<(String, RunConfig)> {
    let text = std::fs::read_to_string(path).map_err(|e| cmab::Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let config = RunConfig::from_toml_str(&text)?;
    Ok((text, config))
}

fn execute(cli: Cli) -> cmab::Result<Vec<PathBuf>> {
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            reps,
        } => {
            let (text, mut cfg) = load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(r) = reps {
                cfg.repetitions = r;
            }
            let results = run_experiment(&cfg)?;
            write_run(&out, &text, &cfg, &results)
        }
        Command::GridSearch {
            config,
            multipliers,
            out,
        } => {
            let (text, cfg) = load(&config)?;
            let report = grid_search(&cfg, &multipliers)?;
            write_grid_search(&out, &text, &cfg, &report)
        }
        Command::Sweep {
            config,
            horizons,
            out,
        } => {
            let (text, cfg) = load(&config)?;
            let points = horizon_sweep(&cfg, &horizons)?;
            write_sweep(&out, &text, &cfg, &points)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
