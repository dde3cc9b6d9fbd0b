//! Subcommand registry: each command implements [`Command`] and is looked
//! up by name at dispatch time.

mod bogomolov_check;
mod curve_check;
mod ndr;
mod product;
mod pushforward;
mod quotient;
mod refine;
mod strict_supports;
mod tropicalize;
mod validate;

use clap::{Arg, ArgAction, ArgMatches};
use serde_json::json;
use std::path::Path;

/// IO/parse failures exit 1, domain violations exit 2.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Domain(String),
}

impl CliError {
    pub fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Domain(m) => m,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

pub type CmdResult = Result<(), CliError>;

pub trait Command {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn configure(&self, cmd: clap::Command) -> clap::Command;
    fn run(&self, matches: &ArgMatches) -> CmdResult;
}

pub fn registry() -> Vec<Box<dyn Command>> {
    vec![
        Box::new(validate::Validate),
        Box::new(quotient::Quotient),
        Box::new(refine::Refine),
        Box::new(tropicalize::Tropicalize),
        Box::new(pushforward::Pushforward),
        Box::new(strict_supports::StrictSupports),
        Box::new(product::Product),
        Box::new(bogomolov_check::BogomolovCheck),
        Box::new(ndr::Ndr),
        Box::new(curve_check::CurveCheck),
    ]
}

// ---------------------------------------------------------------------
// shared helpers

pub fn json_flag() -> Arg {
    Arg::new("json")
        .long("json")
        .action(ArgAction::SetTrue)
        .help("machine-readable output only")
}

pub fn output_flag() -> Arg {
    Arg::new("output")
        .long("output")
        .short('o')
        .value_name("FILE")
        .help("write the result artifact to this path")
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{path}: {e}")))
}

pub fn write_artifact<T: serde::Serialize>(path: &str, value: &T) -> Result<(), CliError> {
    let text = tropkit_core::json::to_canonical_string(value)
        .map_err(|e| CliError::Io(e.to_string()))?;
    if let Some(parent) = Path::new(path).parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
        }
    }
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{path}: {e}")))
}

pub fn maybe_write<T: serde::Serialize>(matches: &ArgMatches, value: &T) -> Result<(), CliError> {
    if let Some(path) = matches.get_one::<String>("output") {
        write_artifact(path, value)?;
    }
    Ok(())
}

/// Prints either the machine JSON or the human lines.
pub fn emit(matches: &ArgMatches, machine: &serde_json::Value, human: &[String]) {
    if matches.get_flag("json") {
        println!("{machine:#}");
    } else {
        for line in human {
            println!("{line}");
        }
    }
}

/// Domain-violation report on stdout plus exit code 2.
pub fn domain_failure(matches: &ArgMatches, class: &str, detail: String) -> CliError {
    let machine = json!({ "status": "invalid", "violation": class, "detail": detail });
    emit(
        matches,
        &machine,
        &[format!("invalid: {class}: {detail}")],
    );
    CliError::Domain(format!("{class}: {detail}"))
}
