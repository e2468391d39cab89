//! `ratl`: model checking robust ATL from the command line.
//!
//! Exit codes: 0 when the property holds (or the command succeeded), 1 when
//! it fails, 2 on any error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ratl", version, about = "Robust ATL model checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a formula reaches a threshold in a state.
    Check(CheckArgs),
    /// Print the truth value of a formula in one or all states.
    Eval(EvalArgs),
    /// Transform a formula between dialects.
    Translate(TranslateArgs),
    /// Validate a model file and report findings.
    Validate(ValidateArgs),
    /// Compare the checker with the brute-force oracle on every subformula.
    OracleCheck(OracleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckDialect {
    Ratl,
    Atl,
    Rctl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Ratl,
    Atlstar,
    Nnf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Atl,
    Rctl,
    Ratl,
    Ratlstar,
}

#[derive(Args)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Include wall-clock timings in the output.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args)]
pub struct CheckArgs {
    /// Model file (text or JSON).
    pub model: PathBuf,
    /// State to check.
    #[arg(long)]
    pub state: String,
    /// Formula text, or `@path` to read it from a file.
    #[arg(long)]
    pub formula: String,
    /// Threshold as a bit string: 1111, 0111, 0011, 0001 or 0000.
    #[arg(long, default_value = "1111")]
    pub threshold: String,
    #[arg(long, value_enum, default_value = "ratl")]
    pub dialect: CheckDialect,
    /// Also evaluate with the brute-force oracle and report agreement.
    #[arg(long)]
    pub oracle: bool,
    /// Print the game of the outermost strategy quantifier.
    #[arg(long)]
    pub dump_game: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args)]
pub struct EvalArgs {
    pub model: PathBuf,
    /// Formula text, or `@path`.
    #[arg(long)]
    pub formula: String,
    /// Only this state; all states otherwise.
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long, value_enum, default_value = "ratl")]
    pub dialect: CheckDialect,
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args)]
pub struct TranslateArgs {
    /// Formula text, or `@path`.
    pub formula: String,
    #[arg(long, value_enum)]
    pub to: Target,
    /// Input dialect; defaults to ratlstar for `--to atlstar` and to atl
    /// otherwise.
    #[arg(long, value_enum)]
    pub from: Option<Source>,
    /// Threshold for `--to atlstar`.
    #[arg(long)]
    pub threshold: Option<String>,
    /// Agent replacing `E` when embedding rCTL.
    #[arg(long, default_value = ratl::cgs::KRIPKE_AGENT)]
    pub agent: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args)]
pub struct ValidateArgs {
    pub model: PathBuf,
    /// Print the canonical form of a valid model.
    #[arg(long)]
    pub canonical: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args)]
pub struct OracleArgs {
    pub model: PathBuf,
    #[arg(long)]
    pub formula: String,
    #[arg(long, value_enum, default_value = "ratl")]
    pub dialect: CheckDialect,
    #[command(flatten)]
    pub common: Common,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => commands::check(&a),
        Command::Eval(a) => commands::eval(&a),
        Command::Translate(a) => commands::translate(&a),
        Command::Validate(a) => commands::validate(&a),
        Command::OracleCheck(a) => commands::oracle_check(&a),
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(if outcome.success { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
