//! `toric`: command-line access to fans, polytopes, intersection numbers,
//! Mahler measures, heights and Bernstein–Kushnirenko bounds.

mod commands;
mod format;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{CommandError, Report};

#[derive(Parser)]
#[command(name = "toric", version, about = "Exact toric geometry and arithmetic Bernstein-Kushnirenko bounds")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Target accuracy for numeric quantities.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Largest quadrature grid per axis.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    max_grid: usize,
    /// Seed for sampling operations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan and report smoothness and completeness.
    Check { fan: String },
    /// Normal fan of a full-dimensional polytope, with the divisor of the polytope.
    NormalFan {
        polytope: String,
        /// Write the fan document here instead of stdout.
        #[arg(long)]
        fan_out: Option<String>,
        /// Write the divisor document here instead of stdout.
        #[arg(long)]
        divisor_out: Option<String>,
    },
    /// Intersection degree of d divisors on a smooth complete fan.
    Degree { fan: String, divisors: Vec<String> },
    /// Mixed volume of d polytopes in dimension d.
    MixedVolume { polytopes: Vec<String> },
    /// Mahler measure of each polynomial of a system document.
    Mahler { system: String },
    /// Canonical height of a rational torus point, e.g. --point 2,-1/3.
    Height {
        polytope: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Bernstein-Kushnirenko bound, checked against the roots listed in the system.
    Bk { system: String },
    /// Generic root count d! V(P_1, ..., P_d).
    Bkk { system: String },
    /// Lower estimate of L for a polytope by random sections.
    EstimateL {
        polytope: String,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = 32)]
        grid: usize,
    },
    /// Chow ring presentation Z[t] / (I + J) of a smooth complete fan.
    Jd { fan: String },
}

fn run(cli: &Cli) -> Result<Report, CommandError> {
    let opts = toric_core::MahlerOptions { tol: cli.tol, max_grid: cli.max_grid, ..Default::default() };
    match &cli.command {
        Command::Check { fan } => commands::check(fan),
        Command::NormalFan { polytope, fan_out, divisor_out } => {
            commands::normal_fan(polytope, fan_out.as_deref(), divisor_out.as_deref())
        }
        Command::Degree { fan, divisors } => commands::degree(fan, divisors),
        Command::MixedVolume { polytopes } => commands::mixed_volume(polytopes),
        Command::Mahler { system } => commands::mahler(system, &opts),
        Command::Height { polytope, point } => commands::height(polytope, point),
        Command::Bk { system } => commands::bk(system, &opts),
        Command::Bkk { system } => commands::bkk(system),
        Command::EstimateL { polytope, samples, grid } => commands::estimate_l(polytope, *samples, *grid, cli.seed),
        Command::Jd { fan } => commands::jd(fan),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable"));
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(if report.within_tolerance { 0 } else { 3 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
