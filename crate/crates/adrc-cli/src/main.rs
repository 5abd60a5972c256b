//! `adrc`: design, analyze, simulate and verify linear ADRC controllers.
//!
//! Exit codes: 0 ok, 1 verify failure, 2 invalid config/arguments,
//! 3 design degeneracy, 4 analysis degeneracy, 5 simulation divergence.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod analyze;
mod config;
mod design;
mod jsonout;
mod simulate;
mod verify;

pub struct CliError {
    pub code: u8,
    pub message: String,
}

#[derive(Parser)]
#[command(
    name = "adrc",
    about = "Linear ADRC design, frequency analysis and closed-loop simulation",
    after_help = "Plant syntax: --plant \"num0,num1,.../den0,den1,...\" with ascending \
                  coefficients, e.g. --plant \"1/1,2,1\" for 1/(1+2s+s^2)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    Bode,
    Gang,
    Pz,
    B0,
}

#[derive(Subcommand)]
enum Command {
    /// Compute gains and transfer-function coefficients from a JSON config.
    Design {
        /// Design configuration (JSON).
        config: PathBuf,
    },
    /// Emit frequency-domain data (CSV or JSON) for a design.
    Analyze {
        /// Design configuration (JSON).
        config: PathBuf,
        /// Analysis kind.
        #[arg(long, value_enum)]
        what: What,
        /// Plant as ascending num/den coefficients (required for gang, b0).
        #[arg(long)]
        plant: Option<String>,
        /// Log-spaced frequency grid lo:hi:points.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Run a closed-loop simulation; writes a trace CSV and metrics JSON.
    Simulate {
        /// Design configuration (JSON, must contain T).
        config: PathBuf,
        /// Scenario description (JSON).
        scenario: PathBuf,
        /// Trace CSV output path.
        #[arg(long, default_value = "trace.csv")]
        trace: PathBuf,
        /// Metrics JSON output path.
        #[arg(long, default_value = "metrics.json")]
        metrics: PathBuf,
    },
    /// Run randomized equivalence and table-agreement checks.
    Verify {
        /// Model order; both orders when omitted.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        n: Option<u8>,
        /// Random designs per equivalence check.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Corrupt one coefficient to demonstrate fault detection.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Design { config } => {
            let resolved = config::load_design(&config)?;
            print!("{}", design::render_design(&resolved));
            Ok(())
        }
        Command::Analyze { config, what, plant, grid } => {
            let resolved = config::load_design(&config)?;
            let grid = match grid {
                Some(spec) => analyze::Grid::parse(&spec)?,
                None => analyze::Grid::for_design(&resolved),
            };
            let need_plant = |plant: &Option<String>| -> Result<adrc_core::RationalTf, CliError> {
                let arg = plant.as_ref().ok_or(CliError {
                    code: config::EXIT_CONFIG,
                    message: "--plant is required for this analysis".into(),
                })?;
                config::parse_plant_arg(arg)
            };
            let output = match what {
                What::Bode => analyze::bode(&resolved, &grid)?,
                What::Gang => analyze::gang(&resolved, &need_plant(&plant)?, &grid)?,
                What::Pz => analyze::poles_zeros(&resolved)?,
                What::B0 => analyze::b0_estimate(&resolved, &need_plant(&plant)?)?,
            };
            print!("{output}");
            Ok(())
        }
        Command::Simulate { config, scenario, trace, metrics } => {
            let resolved = config::load_design(&config)?;
            let scenario_file = config::load_scenario(&scenario)?;
            simulate::run(&resolved, &scenario_file, &trace, &metrics)
        }
        Command::Verify { n, trials, seed, inject_fault } => {
            let orders: Vec<usize> = match n {
                Some(n) => vec![n as usize],
                None => vec![1, 2],
            };
            let mut failed = false;
            for order in orders {
                let report = verify::run(order, trials, seed, inject_fault);
                for line in &report.lines {
                    println!("{line}");
                }
                failed |= report.failed;
            }
            println!("RESULT {}", if failed { "fail" } else { "pass" });
            if failed {
                Err(CliError {
                    code: config::EXIT_VERIFY_FAIL,
                    message: "verification failed".into(),
                })
            } else {
                Ok(())
            }
        }
    }
}
