//! `tropkit validate` — run the full validation gate on a complex,
//! quotient complex, or skeleton file.

use super::{emit, json_flag, CliError, CmdResult, Command};
use clap::{Arg, ArgMatches};
use serde_json::json;
use tropkit_core::json as schema;

pub struct Validate;

impl Command for Validate {
    fn name(&self) -> &'static str {
        "validate"
    }

    fn about(&self) -> &'static str {
        "validate a complex, quotient complex or skeleton file"
    }

    fn configure(&self, cmd: clap::Command) -> clap::Command {
        cmd.arg(Arg::new("file").required(true).value_name("FILE"))
            .arg(json_flag())
    }

    fn run(&self, matches: &ArgMatches) -> CmdResult {
        let path = matches.get_one::<String>("file").expect("required");
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{path}: {e}")))?;

        if value.get("strata").is_some() {
            return validate_skeleton(matches, &value, path);
        }
        if value.get("base").is_some() {
            let dto: schema::QuotientDto =
                serde_json::from_value(value).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
            return validate_complex(matches, &dto.base, "quotient complex");
        }
        if value.get("cells").is_some() && value.get("lattice").is_some() {
            let dto: schema::ComplexDto =
                serde_json::from_value(value).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
            return validate_complex(matches, &dto, "complex");
        }
        Err(CliError::Io(format!("{path}: unrecognized artifact kind")))
    }
}

fn validate_complex(
    matches: &ArgMatches,
    dto: &schema::ComplexDto,
    kind: &str,
) -> CmdResult {
    match schema::complex_from_dto(dto, true) {
        Ok(c) => {
            let machine = json!({
                "status": "valid",
                "kind": kind,
                "cells": c.cells().len(),
            });
            emit(
                matches,
                &machine,
                &[format!("valid {kind} with {} representative cells", c.cells().len())],
            );
            Ok(())
        }
        Err(schema::JsonError::Invalid { what: _, detail }) => {
            // Recover the violation class by re-running the gate directly.
            let class = match schema::complex_from_dto(dto, false) {
                Ok(loose) => tropkit_core::periodic::PeriodicComplex::validate(
                    loose.cells().to_vec(),
                    loose.lattice().clone(),
                    loose.gamma().clone(),
                )
                .err()
                .map(|e| e.class())
                .unwrap_or("InvalidInput"),
                Err(_) => "InvalidInput",
            };
            Err(super::domain_failure(matches, class, detail))
        }
        Err(e) => Err(CliError::Io(e.to_string())),
    }
}

fn validate_skeleton(matches: &ArgMatches, value: &serde_json::Value, path: &str) -> CmdResult {
    let dto: schema::SkeletonDto = serde_json::from_value(value.clone())
        .map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let (model, _nd) =
        schema::skeleton_from_dto(&dto).map_err(|e| CliError::Io(e.to_string()))?;
    let report = model.validate();
    if report.is_empty() {
        let machine = json!({
            "status": "valid",
            "kind": "skeleton",
            "simplices": model.simplices.len(),
        });
        emit(
            matches,
            &machine,
            &[format!("valid skeleton with {} simplices", model.simplices.len())],
        );
        Ok(())
    } else {
        let violations: Vec<String> = report.iter().map(|v| v.to_string()).collect();
        let machine = json!({
            "status": "invalid",
            "kind": "skeleton",
            "violations": violations,
        });
        let mut human = vec![format!("invalid skeleton ({} violations)", report.len())];
        human.extend(violations.iter().map(|v| format!("  {v}")));
        emit(matches, &machine, &human);
        Err(CliError::Domain(format!("{} skeleton violations", report.len())))
    }
}
