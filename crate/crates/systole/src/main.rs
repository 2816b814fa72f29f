use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use systole::commands::{self, CommandError, RunRecord};
use systole::parallel::threads_from_env;
use systole_core::search::SearchConfig;

#[derive(Parser)]
#[command(name = "systole", version, about = "Conformal systoles of intersection forms")]
struct Cli {
    /// Leave out wall-clock timing, for byte-stable output.
    #[arg(long, global = true)]
    omit_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants, classification and the 5/4 and Furuta inequalities.
    Form {
        #[arg(allow_hyphen_values = true)]
        spec: String,
    },
    /// Conformal systole at one period line.
    Confsys {
        #[arg(allow_hyphen_values = true)]
        spec: String,
        /// Comma-separated integers or fractions.
        #[arg(long, allow_hyphen_values = true)]
        line: Option<String>,
        /// Include the sign-reversed Gram matrix.
        #[arg(long)]
        emit_gram: bool,
    },
    /// Certified lower bound for the conformal-systole supremum.
    Search {
        #[arg(allow_hyphen_values = true)]
        spec: String,
        #[arg(long, default_value_t = 4)]
        height: u32,
        #[arg(long, default_value_t = 16)]
        restarts: u32,
        #[arg(long, default_value_t = 500)]
        iters: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
        #[arg(long, default_value_t = 20_000)]
        sweep_limit: usize,
        /// Write the improvement history as CSV.
        #[arg(long)]
        history: Option<PathBuf>,
    },
    /// Sample random lines and check the universal ceiling exactly.
    VerifyBound {
        #[arg(allow_hyphen_values = true)]
        spec: String,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Orthogonal complement of a vector in I(n,1).
    Perp {
        #[arg(allow_hyphen_values = true)]
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Best complement over q(v) = -1 in I(n,1) up to a height.
    PerpSearch {
        n: usize,
        #[arg(long, default_value_t = 3)]
        height: u32,
    },
}

fn run(command: Command) -> Result<RunRecord, CommandError> {
    match command {
        Command::Form { spec } => commands::cmd_form(&spec),
        Command::Confsys { spec, line, emit_gram } => commands::cmd_confsys(&spec, line.as_deref(), emit_gram),
        Command::Search { spec, height, restarts, iters, seed, tol, step, sweep_limit, history } => {
            let cfg = SearchConfig { height_bound: height, restarts, max_iters: iters, step_scale: step, seed, tol, sweep_limit };
            let (record, est) = commands::cmd_search(&spec, &cfg, threads_from_env())?;
            if let Some(path) = history {
                commands::write_history(&path, &est)?;
            }
            Ok(record)
        }
        Command::VerifyBound { spec, samples, seed } => commands::cmd_verify_bound(&spec, samples, seed),
        Command::Perp { spec, vector } => commands::cmd_perp(&spec, &vector),
        Command::PerpSearch { n, height } => commands::cmd_perp_search(n, height),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli.command) {
        Ok(mut record) => {
            if !cli.omit_timing {
                record.wall_time = Some(start.elapsed().as_secs_f64());
            }
            print!("{}", record.render());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
