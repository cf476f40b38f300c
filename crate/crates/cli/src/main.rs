use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zip3_cli::commands::{run_casewise, run_diagnose, run_fit, run_simulate, DiagnoseArgs};
use zip3_cli::error::CliResult;

/// Zero-inflated Poisson regression with a dispersion submodel.
#[derive(Debug, Parser)]
#[command(name = "zip3", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit the configured model and report estimates.
    Fit {
        #[arg(long)]
        config: PathBuf,
    },
    /// Quantile residuals, simulated envelope and likelihood displacement.
    Diagnose {
        #[arg(long)]
        config: PathBuf,
        /// Fit report to diagnose instead of refitting.
        #[arg(long)]
        fit: Option<PathBuf>,
        #[arg(long)]
        envelope: bool,
        #[arg(long)]
        ld: bool,
        #[arg(long = "nsim")]
        n_sim: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for the CSV and JSON outputs.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Monte Carlo bias/MSE study.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        /// CSV destination; overrides the scenario's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relative changes after deleting cases (1-based indices, or `none`).
    Casewise {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, required = true)]
        drop: Vec<String>,
        /// JSON destination for the full table.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Fit { config } => run_fit(&config, &mut out),
        Command::Diagnose {
            config,
            fit,
            envelope,
            ld,
            n_sim,
            seed,
            out: out_dir,
        } => run_diagnose(
            &DiagnoseArgs {
                config,
                fit,
                envelope,
                ld,
                n_sim,
                seed,
                out_dir,
            },
            &mut out,
        ),
        Command::Simulate { scenario, out: path } => run_simulate(&scenario, path.as_deref(), &mut out),
        Command::Casewise { config, drop, out: path } => {
            run_casewise(&config, &drop, path.as_deref(), &mut out)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
