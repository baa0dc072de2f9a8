mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use redswap::network::Metric;
use redswap::Error;

#[derive(Parser, Debug)]
#[command(
    name = "redswap",
    version,
    about = "Entanglement-swapping simulator, relation verifier and network router"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the randomized relation suites.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 1e-9, value_parser = positive)]
        tolerance: f64,
    },
    /// Swap two states from a file and tabulate every outcome.
    Swap(FileArgs),
    /// Swap along a chain of states from a file.
    Chain(FileArgs),
    /// Pick and simulate the best path between two nodes of a network file.
    Route {
        #[command(flatten)]
        file: FileArgs,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value_t = MetricArg::Fidelity)]
        metric: MetricArg,
    },
}

#[derive(Args, Debug)]
struct FileArgs {
    #[arg(long)]
    input: PathBuf,
    /// General-basis parameter `n` for every measured qubit node.
    #[arg(long, value_parser = unit_interval)]
    n: Option<f64>,
    /// General-basis parameter `m` for every measured qubit node.
    #[arg(long, value_parser = unit_interval)]
    m: Option<f64>,
    #[arg(long, default_value_t = 1e-9, value_parser = positive)]
    tolerance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Fidelity,
    Capacity,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

fn unit_interval(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if (0.0..=1.0).contains(&x) => Ok(x),
        _ => Err(format!("`{s}` is not in [0, 1]")),
    }
}

/// Ran cleanly but some relation exceeded its tolerance.
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_UNREACHABLE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify {
            seed,
            trials,
            tolerance,
        } => commands::verify(
            &redswap::suite::SuiteConfig {
                seed,
                trials: trials as usize,
                tolerance,
            },
            cli.format,
        ),
        Command::Swap(f) => commands::swap(&f.input, (f.n, f.m), f.tolerance, cli.format),
        Command::Chain(f) => commands::chain(&f.input, (f.n, f.m), f.tolerance, cli.format),
        Command::Route {
            file,
            source,
            target,
            metric,
        } => {
            let metric = match metric {
                MetricArg::Fidelity => Metric::Fidelity,
                MetricArg::Capacity => Metric::Capacity,
            };
            commands::route(
                &file.input,
                &source,
                &target,
                metric,
                (file.n, file.m),
                file.tolerance,
                cli.format,
            )
        }
    };
    match result {
        Ok(output) => {
            print!("{}", output.text);
            ExitCode::from(if output.violation { EXIT_VIOLATION } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Unreachable { .. } => EXIT_UNREACHABLE,
                _ => EXIT_INPUT,
            })
        }
    }
}
