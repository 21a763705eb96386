use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fracdyn_cli::config::{self, Config};
use fracdyn_cli::error::Result;
use fracdyn_cli::{runner, scenarios};

/// Environment override for the output directory (lowest precedence after
/// the --output-dir flag, highest before the config's own output.dir).
const OUT_DIR_ENV: &str = "FRACDYN_OUT_DIR";

#[derive(Parser)]
#[command(name = "fracdyn", version, about = "Fractional hybrid dynamics experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single trajectory from a config file
    Run {
        config: PathBuf,
        /// Output directory (overrides FRACDYN_OUT_DIR and the config)
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Run an ensemble sweep from a config file with an [ensemble] block
    Sweep {
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Validate a config file without running it
    Validate { config: PathBuf },
    /// Inspect the shipped scenario configs
    Scenarios {
        #[command(subcommand)]
        action: ScenarioAction,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// List shipped scenario names
    List,
    /// Print a shipped scenario config to stdout
    Export { name: String },
}

fn load_config(path: &PathBuf) -> Result<(String, Config)> {
    let text = fs::read_to_string(path)?;
    let cfg = config::load(&text)?;
    Ok((text, cfg))
}

fn output_dir(flag: Option<PathBuf>, cfg: &Config) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run { config, output_dir: dir } => {
            let (text, cfg) = load_config(&config)?;
            let dir = output_dir(dir, &cfg);
            let manifest = runner::run(&text, &cfg, &dir)?;
            println!("wrote {} outputs to {}", manifest.outputs.len(), dir.display());
            Ok(())
        }
        Command::Sweep { config, output_dir: dir } => {
            let (text, cfg) = load_config(&config)?;
            let dir = output_dir(dir, &cfg);
            let manifest = runner::sweep(&text, &cfg, &dir)?;
            println!("wrote {} outputs to {}", manifest.outputs.len(), dir.display());
            Ok(())
        }
        Command::Validate { config } => {
            let (_, cfg) = load_config(&config)?;
            println!("ok: {} experiment on {} steps", cfg.kind.as_str(), cfg.grid.n_steps());
            Ok(())
        }
        Command::Scenarios { action } => match action {
            ScenarioAction::List => {
                for name in scenarios::names() {
                    println!("{name}");
                }
                Ok(())
            }
            ScenarioAction::Export { name } => {
                print!("{}", scenarios::text(&name)?);
                Ok(())
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
