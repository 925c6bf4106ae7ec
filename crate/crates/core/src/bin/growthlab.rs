use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use growthlab::scenario::{self, ScenarioConfig, Target};
use growthlab::Result;

#[derive(Parser)]
#[command(name = "growthlab", version, about = "Explosive-growth model runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a model described by a TOML config.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerate a published exhibit and compare against it.
    Reproduce {
        target: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("growthlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run { config, out } => {
            let mut cfg = ScenarioConfig::load(&config)?;
            cfg.apply_seed_override()?;
            let manifest = scenario::run(&cfg, &out)?;
            println!("wrote {} files to {}", manifest.files.len() + 1, out.display());
        }
        Command::Reproduce { target, out } => {
            let target: Target = target.parse()?;
            scenario::reproduce(target, &out)?;
            let checks = scenario::parse_checks(&std::fs::read(out.join("comparison.csv"))?)?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            println!(
                "{target}: {} checks, {failed} outside tolerance; wrote {}",
                checks.len(),
                out.display()
            );
        }
    }
    Ok(())
}
