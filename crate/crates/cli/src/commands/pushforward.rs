//! `tropkit pushforward` — exact push-forward of a measure along a
//! torus homomorphism.

use super::tropicalize::measure_error_class;
use super::{emit, json_flag, maybe_write, output_flag, CliError, CmdResult, Command};
use clap::{Arg, ArgMatches};
use serde_json::json;
use tropkit_core::json as schema;
use tropkit_core::measure::{pushforward_exact, PwAffineMap};
use tropkit_core::rat::format_rat;

pub struct Pushforward;

impl Command for Pushforward {
    fn name(&self) -> &'static str {
        "pushforward"
    }

    fn about(&self) -> &'static str {
        "push a measure forward along a torus homomorphism"
    }

    fn configure(&self, cmd: clap::Command) -> clap::Command {
        cmd.arg(Arg::new("measure").long("measure").required(true).value_name("MEASURE"))
            .arg(Arg::new("hom").long("hom").required(true).value_name("HOM"))
            .arg(Arg::new("target").long("target").required(true).value_name("QUOTIENT"))
            .arg(output_flag())
            .arg(json_flag())
    }

    fn run(&self, matches: &ArgMatches) -> CmdResult {
        let mu_dto: schema::MeasureDto =
            super::read_json(matches.get_one::<String>("measure").expect("required"))?;
        let mu = schema::measure_from_dto(&mu_dto).map_err(|e| CliError::Io(e.to_string()))?;
        let hom_dto: schema::HomDto =
            super::read_json(matches.get_one::<String>("hom").expect("required"))?;
        let hom = schema::hom_from_dto(&hom_dto)
            .map_err(|e| super::domain_failure(matches, "LatticeNotPreserved", e.to_string()))?;
        let target_dto: schema::QuotientDto =
            super::read_json(matches.get_one::<String>("target").expect("required"))?;
        let target =
            schema::quotient_from_dto(&target_dto).map_err(|e| CliError::Io(e.to_string()))?;

        if hom.linear().ncols() != mu.carrier().ambient_dim() {
            return Err(CliError::Io("homomorphism does not match the measure torus".into()));
        }
        let table = PwAffineMap::uniform(mu.carrier(), &hom.as_affine_map());
        let before = mu.mass();
        let pushed = pushforward_exact(&mu, &table, &target)
            .map_err(|e| super::domain_failure(matches, measure_error_class(&e), e.to_string()))?;
        let after = pushed.mass();
        debug_assert_eq!(before, after);

        let out = schema::measure_to_dto(&pushed);
        maybe_write(matches, &out)?;
        let machine = json!({
            "mass": format_rat(&after),
            "terms": pushed.terms().count(),
        });
        emit(
            matches,
            &machine,
            &[format!(
                "pushed measure: {} terms, mass {} (conserved)",
                pushed.terms().count(),
                format_rat(&after)
            )],
        );
        Ok(())
    }
}
