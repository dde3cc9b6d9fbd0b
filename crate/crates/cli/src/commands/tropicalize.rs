//! `tropkit tropicalize` — assemble the canonical measure of a skeleton
//! on a subdivisional target complex.

use super::{emit, json_flag, maybe_write, output_flag, CliError, CmdResult, Command};
use clap::{Arg, ArgAction, ArgMatches};
use serde_json::json;
use std::collections::BTreeMap;
use tropkit_core::json as schema;
use tropkit_core::measure::assemble_canonical;
use tropkit_core::rat::{format_rat, parse_rat, Rat};

pub struct Tropicalize;

impl Command for Tropicalize {
    fn name(&self) -> &'static str {
        "tropicalize"
    }

    fn about(&self) -> &'static str {
        "push the canonical measure of a skeleton onto a target complex"
    }

    fn configure(&self, cmd: clap::Command) -> clap::Command {
        cmd.arg(
            Arg::new("skeleton")
                .long("skeleton")
                .required(true)
                .value_name("SKELETON"),
        )
        .arg(Arg::new("fmaps").long("fmaps").required(true).value_name("FMAPS"))
        .arg(Arg::new("target").long("target").required(true).value_name("QUOTIENT"))
        .arg(Arg::new("weights").long("weights").value_name("WEIGHTS"))
        .arg(Arg::new("nondeg").long("nondeg").value_name("NONDEG"))
        .arg(
            Arg::new("place")
                .long("place")
                .value_name("NAME")
                .help("place id recorded in the output"),
        )
        .arg(
            Arg::new("stabilizer-trivial")
                .long("stabilizer-trivial")
                .action(ArgAction::SetTrue)
                .help("mark the output as having trivial stabilizer"),
        )
        .arg(output_flag())
        .arg(json_flag())
    }

    fn run(&self, matches: &ArgMatches) -> CmdResult {
        let sk_path = matches.get_one::<String>("skeleton").expect("required");
        let sk_dto: schema::SkeletonDto = super::read_json(sk_path)?;
        let (model, embedded_nd) =
            schema::skeleton_from_dto(&sk_dto).map_err(|e| CliError::Io(e.to_string()))?;

        let report = model.validate();
        if !report.is_empty() {
            let detail = report
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            return Err(super::domain_failure(matches, "InvalidSkeleton", detail));
        }

        let nd = match matches.get_one::<String>("nondeg") {
            Some(path) => {
                let dto: BTreeMap<String, schema::NondegEntryDto> = super::read_json(path)?;
                dto.into_iter()
                    .map(|(k, v)| {
                        (
                            k,
                            tropkit_core::skeleton::NondegEntry {
                                image_dim: v.image_dim,
                                abelian_image_dim: v.abelian_image_dim,
                            },
                        )
                    })
                    .collect()
            }
            None => embedded_nd.ok_or_else(|| {
                CliError::Io("no non-degeneracy data: pass --nondeg or embed a nondeg block".into())
            })?,
        };

        let fmaps_dto: schema::FmapsDto =
            super::read_json(matches.get_one::<String>("fmaps").expect("required"))?;
        let fmaps = schema::fmaps_from_dto(&fmaps_dto).map_err(|e| CliError::Io(e.to_string()))?;

        let target_dto: schema::QuotientDto =
            super::read_json(matches.get_one::<String>("target").expect("required"))?;
        let sigma =
            schema::quotient_from_dto(&target_dto).map_err(|e| CliError::Io(e.to_string()))?;

        let weights: BTreeMap<String, Rat> = match matches.get_one::<String>("weights") {
            Some(path) => {
                let raw: BTreeMap<String, String> = super::read_json(path)?;
                raw.into_iter()
                    .map(|(k, v)| Ok((k, parse_rat(&v).map_err(|e| CliError::Io(e.to_string()))?)))
                    .collect::<Result<_, CliError>>()?
            }
            None => BTreeMap::new(),
        };

        let stabilizer_trivial = matches.get_flag("stabilizer-trivial");
        let variety = assemble_canonical(&model, &nd, &weights, &fmaps, &sigma, stabilizer_trivial)
            .map_err(|e| {
                super::domain_failure(matches, measure_error_class(&e), e.to_string())
            })?;

        let mass = variety.measure.as_ref().map(|m| m.mass()).unwrap_or_default();
        let place = matches.get_one::<String>("place").map(|s| s.as_str());
        let out = schema::variety_to_dto(&variety, place);
        maybe_write(matches, &out)?;
        let machine = json!({
            "support_cells": variety.support.len(),
            "dim": variety.dim,
            "mass": format_rat(&mass),
        });
        emit(
            matches,
            &machine,
            &[format!(
                "support: {} cells (dim {}), mass {}",
                variety.support.len(),
                variety.dim,
                format_rat(&mass)
            )],
        );
        Ok(())
    }
}

pub(super) fn measure_error_class(e: &tropkit_core::measure::MeasureError) -> &'static str {
    use tropkit_core::measure::MeasureError::*;
    match e {
        UnknownCell(_) => "UnknownCell",
        CarrierMismatch => "CarrierMismatch",
        NonInjectivePiece { .. } => "NonInjectivePiece",
        TargetNotSubdivisional { .. } => "TargetNotSubdivisional",
        NotExpressible => "NotExpressible",
        NotSubdivisional(_) => "NotSubdivisional",
        DegenerateWeighted(_) => "DegenerateWeighted",
        BadWeight(_) => "BadWeight",
        MissingPiece(_) => "MissingPiece",
        Skeleton(_) => "InvalidSkeleton",
        Invalid(_) => "InvalidInput",
    }
}
