use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ns_galerkin_cli::{emit_plots, run_experiment, RunOptions, EXIT_CONFIG};

#[derive(Parser)]
#[command(name = "ns-galerkin", version, about = "Spectral Navier-Stokes stability laboratory")]
struct Cli {
    #[command(subcommand)]
    action: Action,
}

#[derive(Subcommand)]
enum Action {
    /// Run the experiment described by a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Exit with status 4 if any verification check fails.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Write one SVG per trace found in a run directory.
    Plot { run_dir: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match cli.action {
        Action::Run { config, out_dir, strict, threads } => {
            match run_experiment(&config, &RunOptions { out_dir, strict, threads }) {
                Ok(outcome) => {
                    println!("{}: {} (exit {})", outcome.out_dir.display(), outcome.status, outcome.exit_code);
                    for name in &outcome.failed_checks {
                        println!("failed check: {name}");
                    }
                    outcome.exit_code
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Action::Plot { run_dir } => match emit_plots(&run_dir) {
            Ok(files) => {
                for f in files {
                    println!("{}", f.display());
                }
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_CONFIG
            }
        },
    };
    ExitCode::from(code as u8)
}
