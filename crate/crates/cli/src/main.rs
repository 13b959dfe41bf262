//! `ipchoice`: exact choice under imprecise probability from JSON problem
//! files. Reports go to stdout, logs to stderr.
//!
//! Exit codes: 0 success, 1 a verification suite found a counterexample,
//! 2 schema or input error, 3 capacity exceeded, 4 internal invariant breach.

mod commands;
mod error;
mod schema;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ipchoice_core::desirability::DEFAULT_SELECTION_CAP;
use ipchoice_core::gen::Profile;
use log::error;

use crate::commands::{Input, Outcome, Params};
use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "ipchoice",
    version,
    about = "Exact choice functions under imprecise probability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Problem file in the ipchoice/1 schema.
    #[arg(long)]
    input: PathBuf,
    /// Largest number of selections a natural-extension query may enumerate.
    #[arg(long, default_value_t = DEFAULT_SELECTION_CAP)]
    cap_selections: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Apply choice rules to the option sets of a problem.
    Choose {
        #[command(flatten)]
        common: Common,
    },
    /// Run the structural checks listed in a problem.
    Check {
        #[command(flatten)]
        common: Common,
        /// Seed for randomised probes.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run verification suites, optionally against a problem's own model.
    Verify {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trials per suite, overriding the suite defaults.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SELECTION_CAP)]
        cap_selections: usize,
    },
    /// Print a random problem file.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// small, medium or adversarial.
        #[arg(long, default_value = "small")]
        profile: String,
    },
    /// Recompute a report and confirm it is identical.
    Recheck {
        /// Report produced by choose, check or verify.
        #[arg(long)]
        recheck: PathBuf,
        /// The problem file the report was computed from.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Choose { common } => {
            let input = Input::new(read(&common.input)?);
            commands::cmd_choose(
                &input,
                &Params {
                    cap: common.cap_selections,
                    ..Params::default()
                },
            )
        }
        Command::Check { common, seed } => {
            let input = Input::new(read(&common.input)?);
            commands::cmd_check(
                &input,
                &Params {
                    seed,
                    cap: common.cap_selections,
                    ..Params::default()
                },
            )
        }
        Command::Verify {
            input,
            seed,
            trials,
            cap_selections,
        } => {
            let input = input.as_deref().map(read).transpose()?.map(Input::new);
            commands::cmd_verify(
                input.as_ref(),
                &Params {
                    seed: Some(seed),
                    trials,
                    cap: cap_selections,
                },
            )
        }
        Command::Gen { seed, profile } => {
            let profile: Profile = profile.parse().map_err(CliError::schema)?;
            Ok(Outcome {
                report: commands::cmd_gen(seed, profile),
                failed: false,
            })
        }
        Command::Recheck { recheck, input } => {
            let report = read(&recheck)?;
            let input = input.as_deref().map(read).transpose()?.map(Input::new);
            commands::cmd_recheck(&report, input.as_ref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    match run(Cli::parse()) {
        Ok(outcome) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&outcome.report).expect("reports serialise")
            );
            if outcome.failed {
                error!("a verification suite found a counterexample");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            error!("{e}");
            e.exit_code()
        }
    }
}
