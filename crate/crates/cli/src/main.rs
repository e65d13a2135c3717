//! `cluster-mech`: run mutations, flows and periodicity checks from a JSON
//! plan file.
//!
//! Exit codes: 0 pass, 1 negative result, 2 input error, 3 resource limit
//! or overflow, 4 internal invariant violation.

mod commands;
mod plan;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cluster_mech::ErrorClass;

use commands::Overrides;
use plan::PlanFile;

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Resource(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Resource(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Resource(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<cluster_mech::Error> for Failure {
    fn from(e: cluster_mech::Error) -> Self {
        let m = e.to_string();
        match e.class() {
            ErrorClass::Input => Failure::Input(m),
            ErrorClass::Resource => Failure::Resource(m),
            ErrorClass::Internal => Failure::Internal(m),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "cluster-mech", version, about = "Seed mutations, Hamiltonian flows and periodicity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON plan file
    #[arg(long)]
    plan: PathBuf,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the seed after each mutation of the sequence
    Mutate {
        #[command(flatten)]
        common: Common,
        /// Stop after this many mutations
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Run the four periodicity checks; exit 1 if not periodic
    CheckPeriod {
        #[command(flatten)]
        common: Common,
        /// Random phase-space points for the signed check
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        rng_seed: Option<u64>,
    },
    /// Evaluate the dilogarithm identity of a periodic plan over a grid
    VerifyIdentity {
        #[command(flatten)]
        common: Common,
        /// Grid points per coordinate, log-spaced on [0.1, 10]
        #[arg(long)]
        grid: Option<usize>,
        /// Additional random points
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        rng_seed: Option<u64>,
    },
    /// Integrate the Hamiltonian flow along the sequence and report the action
    Flow {
        #[command(flatten)]
        common: Common,
        /// RK4 step within each unit span
        #[arg(long)]
        step: Option<f64>,
        /// Write the sampled trajectory to this file
        #[arg(long)]
        dump_trajectory: Option<PathBuf>,
    },
}

fn load(path: &PathBuf) -> Result<PlanFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    PlanFile::parse(&text)
}

fn run(cli: Cli) -> Result<(commands::Outcome, bool), Failure> {
    Ok(match cli.command {
        Command::Mutate { common, steps } => (commands::mutate(&load(&common.plan)?, steps)?, common.json),
        Command::CheckPeriod { common, samples, tol, rng_seed } => {
            (commands::check_period(&load(&common.plan)?, &Overrides { samples, tol, rng_seed })?, common.json)
        }
        Command::VerifyIdentity { common, grid, samples, tol, rng_seed } => {
            (commands::verify_identity(&load(&common.plan)?, grid, &Overrides { samples, tol, rng_seed })?, common.json)
        }
        Command::Flow { common, step, dump_trajectory } => {
            (commands::flow(&load(&common.plan)?, step, dump_trajectory.as_deref())?, common.json)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, as_json)) => {
            if as_json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON values serialize"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code as u8)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
