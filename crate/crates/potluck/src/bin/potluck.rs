//! Thin CLI over [`potluck::commands`].
//!
//! Exit codes: 0 success, 1 runtime error, 2 validation rejection (also
//! used when a check-potential probe fails its threshold). Errors go to
//! standard error as one JSON object with a machine-readable `code`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use potluck::commands::{
    cmd_check_potential, cmd_kronecker, cmd_qstar, cmd_run, cmd_sweep, KroneckerPreset,
};
use potluck::error::Error;
use potluck::reward::{DEFAULT_REFINE_ITERS, DEFAULT_RESOLUTION};

#[derive(Parser)]
#[command(
    name = "potluck",
    version,
    about = "Simulate and verify empirical-frequency bandit games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write the trajectory CSV plus metadata sidecar.
    Run {
        /// Scenario JSON file.
        scenario: PathBuf,
        /// Trajectory CSV destination.
        #[arg(short, long)]
        out: PathBuf,
        /// Run even if the weight sequence fails validation.
        #[arg(long)]
        force: bool,
    },
    /// Maximize the scenario's mean payoff over the simplex.
    Qstar {
        scenario: PathBuf,
        /// Grid step per coordinate.
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: f64,
        /// Local refinement rounds (cell shrinks 10x each).
        #[arg(long, default_value_t = DEFAULT_REFINE_ITERS)]
        refine: usize,
    },
    /// Verify the gradient condition (d = 1) or probe integrability (d >= 2).
    CheckPotential {
        scenario: PathBuf,
        /// Quadrature nodes for the d = 1 construction.
        #[arg(long, default_value_t = potluck::potential::DEFAULT_NODES)]
        nodes: usize,
        /// Finite-difference step.
        #[arg(long, default_value_t = 1e-5)]
        h: f64,
    },
    /// Summation-by-parts identity and tail diagnostics on a series.
    Kronecker {
        /// alternating | harmonic | custom
        #[arg(long, default_value = "alternating")]
        preset: String,
        /// CSV of `a,b` rows (required for --preset custom).
        #[arg(long)]
        path: Option<PathBuf>,
        /// Series length for the presets.
        #[arg(short = 'n', long = "length", default_value_t = 100_000)]
        length: usize,
    },
    /// Run one scenario per grid value in parallel and summarize.
    Sweep {
        scenario: PathBuf,
        /// Parameter path: strategy.p or weights.kind.
        #[arg(long)]
        param: String,
        /// start:end:count for strategy.p; comma list for weights.kind.
        #[arg(long)]
        grid: String,
        /// Output directory for summary.csv.
        #[arg(short, long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!(
                "{}",
                serde_json::json!({
                    "error": { "code": err.code(), "message": err.to_string() }
                })
            );
            if err.is_validation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Run {
            scenario,
            out,
            force,
        } => {
            let outcome = cmd_run(&scenario, &out, force)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&outcome).expect("serializable")
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Qstar {
            scenario,
            resolution,
            refine,
        } => {
            let output = cmd_qstar(&scenario, resolution, refine)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&output).expect("serializable")
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckPotential { scenario, nodes, h } => {
            let output = cmd_check_potential(&scenario, nodes, h)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&output).expect("serializable")
            );
            Ok(if output.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Kronecker {
            preset,
            path,
            length,
        } => {
            let preset = match (preset.as_str(), path) {
                ("alternating", _) => KroneckerPreset::Alternating,
                ("harmonic", _) => KroneckerPreset::Harmonic,
                ("custom", Some(path)) => KroneckerPreset::Custom(path),
                ("custom", None) => {
                    return Err(Error::Cli {
                        message: "--preset custom requires --path".to_string(),
                    })
                }
                (other, _) => {
                    return Err(Error::Cli {
                        message: format!(
                            "unknown preset {other:?}; expected alternating, harmonic or custom"
                        ),
                    })
                }
            };
            let output = cmd_kronecker(&preset, length)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&output).expect("serializable")
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            scenario,
            param,
            grid,
            out,
        } => {
            let outcome = cmd_sweep(&scenario, &param, &grid, &out)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&outcome).expect("serializable")
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}
