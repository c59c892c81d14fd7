//! `grafia`: ingest, split, train, evaluate and classify.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 I/O or
//! unreadable input, 3 computation failure.

mod args;
mod commands;

use std::fmt;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};
use grafia_core::{Error, MODEL_FORMAT_VERSION};

use args::{Cli, Command};

/// Rejected flag combination or value.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(message: impl Into<String>) -> anyhow::Error {
    UsageError(message.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 1;
        }
        if cause.is::<std::io::Error>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Config(_) | Error::InvalidSplit(_) => 1,
                Error::Io { .. }
                | Error::Stream(_)
                | Error::MalformedLine { .. }
                | Error::UnknownTag { .. }
                | Error::InvalidSample { .. }
                | Error::Xml { .. }
                | Error::ModelVersion { .. }
                | Error::ModelTruncated(_)
                | Error::ModelCorrupt(_) => 2,
                Error::Features(_)
                | Error::Training(_)
                | Error::DimensionMismatch { .. }
                | Error::InvalidInput(_) => 3,
            };
        }
    }
    3
}

fn main() -> ExitCode {
    let version: &'static str = Box::leak(
        format!("{} (model format {MODEL_FORMAT_VERSION})", env!("CARGO_PKG_VERSION")).into_boxed_str(),
    );
    let matches = match Cli::command().version(version).try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };

    let level = match (cli.quiet, cli.verbose) {
        (true, _) => "error",
        (false, 0) => "warn",
        (false, 1) => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    let result = match cli.command {
        Command::Ingest(a) => commands::ingest(a),
        Command::DefaultConfig => commands::default_config(),
        Command::Split(a) => commands::split(a),
        Command::Stats(a) => commands::stats(a),
        Command::Train(a) => commands::train(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Classify(a) => commands::classify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
