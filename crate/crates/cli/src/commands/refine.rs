//! `tropkit refine` — refine a periodic complex by cut hyperplanes.

use super::{emit, json_flag, maybe_write, output_flag, CliError, CmdResult, Command};
use clap::{Arg, ArgAction, ArgMatches};
use serde_json::json;
use tropkit_core::json as schema;
use tropkit_core::polytope::Equation;
use tropkit_core::rat::parse_rat;

pub struct Refine;

impl Command for Refine {
    fn name(&self) -> &'static str {
        "refine"
    }

    fn about(&self) -> &'static str {
        "refine a complex by the lattice orbits of cut hyperplanes"
    }

    fn configure(&self, cmd: clap::Command) -> clap::Command {
        cmd.arg(Arg::new("file").required(true).value_name("COMPLEX"))
            .arg(
                Arg::new("cut")
                    .long("cut")
                    .action(ArgAction::Append)
                    .value_name("m1,m2,...=c")
                    .help("hyperplane m·u = c with integer normal and rational constant"),
            )
            .arg(output_flag())
            .arg(json_flag())
    }

    fn run(&self, matches: &ArgMatches) -> CmdResult {
        let path = matches.get_one::<String>("file").expect("required");
        let dto: schema::ComplexDto = super::read_json(path)?;
        let complex =
            schema::complex_from_dto(&dto, false).map_err(|e| CliError::Io(e.to_string()))?;

        let mut cuts = Vec::new();
        if let Some(values) = matches.get_many::<String>("cut") {
            for spec in values {
                cuts.push(parse_cut(spec)?);
            }
        }
        let refined = complex
            .refine(&cuts)
            .map_err(|e| super::domain_failure(matches, e.class(), e.to_string()))?;
        let out = schema::complex_to_dto(&refined);
        maybe_write(matches, &out)?;
        let machine = json!({ "cells": refined.cells().len(), "cuts": cuts.len() });
        emit(
            matches,
            &machine,
            &[format!(
                "refined complex has {} representative cells ({} cuts)",
                refined.cells().len(),
                cuts.len()
            )],
        );
        Ok(())
    }
}

fn parse_cut(spec: &str) -> Result<Equation, CliError> {
    let (normal, constant) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Io(format!("cut {spec:?}: expected m1,m2,...=c")))?;
    let normal: Result<Vec<i64>, _> = normal.split(',').map(|t| t.trim().parse::<i64>()).collect();
    let normal = normal.map_err(|e| CliError::Io(format!("cut {spec:?}: {e}")))?;
    if normal.iter().all(|&x| x == 0) {
        return Err(CliError::Io(format!("cut {spec:?}: zero normal")));
    }
    let c = parse_rat(constant).map_err(|e| CliError::Io(format!("cut {spec:?}: {e}")))?;
    Ok(Equation::from_ints(normal, c))
}
