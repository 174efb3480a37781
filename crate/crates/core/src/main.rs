use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use orlicz_kit::cli::{self, exit};
use orlicz_kit::config::COMMANDS;

/// Weighted weak Orlicz norms and inequality checks on grids.
#[derive(Parser, Debug)]
#[command(name = "orlicz-kit", version)]
struct Args {
    /// What to run; must match the config's `command` field.
    #[arg(value_parser = COMMANDS)]
    command: String,
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Directory for the JSON reports (and CSV profiles).
    #[arg(long, default_value = "reports")]
    out: PathBuf,
    /// Also write `value,measure` distribution profiles.
    #[arg(long)]
    profile_csv: bool,
    /// Seed for random test functions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = match cli::run(&args.command, &args.config, &args.out, args.profile_csv, args.seed) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("orlicz-kit: {e}");
            e.exit_code()
        }
    };
    debug_assert!([exit::PASSED, exit::FAILED, exit::ERROR].contains(&code));
    ExitCode::from(code as u8)
}
