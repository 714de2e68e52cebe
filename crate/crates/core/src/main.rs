use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use fockcycle::cli::{self, ExperimentConfig, EXIT_CONFIG, SUITES};
use fockcycle::Error;

#[derive(Parser)]
#[command(name = "fockcycle", version, about = "Run numerical experiment suites on truncated Fock spaces")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite and write `<suite>.json` plus CSV tables.
    Run {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        /// JSON config; must name the same suite.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: the config's `out`, else `results`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Evaluate grid points concurrently.
        #[arg(long)]
        parallel: bool,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let Command::Run {
        suite,
        config,
        out,
        parallel,
        seed,
    } = Args::parse().command;
    let code = match run(&suite, &config, out, parallel, seed) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            cli::exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}

fn run(suite: &str, config: &PathBuf, out: Option<PathBuf>, parallel: bool, seed: Option<u64>) -> Result<i32, Error> {
    let text = std::fs::read_to_string(config)?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if cfg.suite.name() != suite {
        eprintln!("error: config is for suite {}, not {suite}", cfg.suite.name());
        return Ok(EXIT_CONFIG);
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let out = out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("results"));
    let start = Instant::now();
    let report = cli::run(&cfg, &out, parallel)?;
    for c in &report.checks {
        let status = if c.pass { "pass" } else { "FAIL" };
        eprintln!("{status} {} residual={:e} tolerance={:e}", c.name, c.residual, c.tolerance);
    }
    eprintln!("{suite}: {:.2}s, report in {}", start.elapsed().as_secs_f64(), out.display());
    Ok(report.exit_code())
}
