//! Config-driven runs of the clustering pipeline, one subcommand per stage.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run, Subcommand};
pub use config::RunConfig;
pub use error::CliError;

/// Splits `--section.key=value` (and top-level `--master_seed=`/`--output_dir=`)
/// overrides out of `args`, leaving the rest for the argument parser.
pub fn split_overrides(
    args: impl IntoIterator<Item = String>,
) -> (Vec<String>, Vec<(String, String)>) {
    let mut rest = Vec::new();
    let mut overrides = Vec::new();
    for arg in args {
        let parsed = arg
            .strip_prefix("--")
            .and_then(|a| a.split_once('='))
            .filter(|(k, _)| k.contains('.') || matches!(*k, "master_seed" | "output_dir"));
        match parsed {
            Some((k, v)) => overrides.push((k.to_owned(), v.to_owned())),
            None => rest.push(arg),
        }
    }
    (rest, overrides)
}
