mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Method, Suite};
use config::{CliConfig, ConfigArgs};
use error::CliError;

/// Geometric α-stable process toolkit.
#[derive(Debug, Parser)]
#[command(name = "geostable", version)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recurrent or transient.
    Classify,
    /// `ψ` and `Φ_t` on `[0, x_max]`.
    Symbol,
    /// Lévy density on a log grid plus its asymptotic constants.
    Levy,
    /// `t·k_θ(r)` along one direction.
    Kfun,
    /// Monotonicity certificate over several directions.
    Selfdecomp,
    /// Transition density on `[-x_max, x_max]`.
    Density {
        #[arg(long, value_enum, default_value = "inversion")]
        method: Method,
    },
    /// Draws `X_t`.
    Sample,
    /// Principal eigenpair of the weighted Schrödinger problem.
    Groundstate,
    /// Monte Carlo `E[e^{-A_t} f(X_t)]` with `f(x) = e^{-x²}`.
    FeynmanKac,
    /// `sup_x ∫₀^t (P_s ρ⁺)(x) ds`.
    Kato {
        #[arg(long, value_delimiter = ',', default_value = "1,0.5,0.1,0.01")]
        times: Vec<f64>,
    },
    /// Runs the acceptance checks and prints a PASS/FAIL table.
    Verify {
        #[arg(long, value_enum, default_value = "core")]
        suite: Suite,
        /// Restrict to these check ids.
        #[arg(long, value_delimiter = ',')]
        check: Vec<usize>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = CliConfig::resolve(&cli.config)?;
    match cli.command {
        Command::Classify => commands::classify(&cfg),
        Command::Symbol => commands::symbol(&cfg),
        Command::Levy => commands::levy(&cfg),
        Command::Kfun => commands::kfun(&cfg),
        Command::Selfdecomp => commands::selfdecomp(&cfg),
        Command::Density { method } => commands::density(&cfg, method),
        Command::Sample => commands::sample(&cfg),
        Command::Groundstate => commands::groundstate(&cfg),
        Command::FeynmanKac => commands::feynman_kac(&cfg),
        Command::Kato { times } => commands::kato(&cfg, &times),
        Command::Verify { suite, check } => commands::verify(&cfg, suite, &check),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
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
