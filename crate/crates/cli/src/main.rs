use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tagcluster::{run, split_overrides, RunConfig, Subcommand};

/// Topic clustering of question banks.
///
/// Any config key can be overridden with `--section.key=value`.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    #[arg(value_enum)]
    command: Subcommand,
    /// TOML run config.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// More logging (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

fn main() -> ExitCode {
    let (argv, overrides) = split_overrides(std::env::args());
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match args.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = RunConfig::load(args.config.as_deref(), &overrides)
        .and_then(|config| run(args.command, &config));
    match result {
        Ok(files) => {
            for f in files {
                log::info!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
