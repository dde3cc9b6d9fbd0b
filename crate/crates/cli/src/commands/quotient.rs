//! `tropkit quotient` — orbit classes of a periodic complex.

use super::{emit, json_flag, maybe_write, output_flag, CliError, CmdResult, Command};
use clap::{Arg, ArgMatches};
use serde_json::json;
use tropkit_core::json as schema;

pub struct Quotient;

impl Command for Quotient {
    fn name(&self) -> &'static str {
        "quotient"
    }

    fn about(&self) -> &'static str {
        "compute the quotient complex (one representative per lattice orbit)"
    }

    fn configure(&self, cmd: clap::Command) -> clap::Command {
        cmd.arg(Arg::new("file").required(true).value_name("COMPLEX"))
            .arg(output_flag())
            .arg(json_flag())
    }

    fn run(&self, matches: &ArgMatches) -> CmdResult {
        let path = matches.get_one::<String>("file").expect("required");
        let dto: schema::ComplexDto = super::read_json(path)?;
        let complex =
            schema::complex_from_dto(&dto, false).map_err(|e| CliError::Io(e.to_string()))?;
        let q = complex.quotient();

        let mut by_dim: Vec<usize> = vec![0; q.top_dim() + 1];
        for id in 0..q.len() {
            by_dim[q.cell(id).dim()] += 1;
        }
        let out = schema::quotient_to_dto(&q);
        maybe_write(matches, &out)?;
        let machine = json!({ "cells": q.len(), "by_dim": by_dim });
        let human: Vec<String> = std::iter::once(format!("{} orbit classes", q.len()))
            .chain(by_dim.iter().enumerate().map(|(d, n)| format!("  dim {d}: {n}")))
            .collect();
        emit(matches, &machine, &human);
        Ok(())
    }
}
