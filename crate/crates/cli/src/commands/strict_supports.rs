//! `tropkit strict-supports` — strict supports with ε witnesses.

use super::tropicalize::measure_error_class;
use super::{emit, json_flag, maybe_write, output_flag, CliError, CmdResult, Command};
use clap::{Arg, ArgMatches};
use serde_json::json;
use tropkit_core::json as schema;
use tropkit_core::rat::format_rat;

pub struct StrictSupports;

impl Command for StrictSupports {
    fn name(&self) -> &'static str {
        "strict-supports"
    }

    fn about(&self) -> &'static str {
        "strict supports of a measure on a decomposition of its support"
    }

    fn configure(&self, cmd: clap::Command) -> clap::Command {
        cmd.arg(Arg::new("measure").long("measure").required(true).value_name("MEASURE"))
            .arg(
                Arg::new("sigma")
                    .long("sigma")
                    .value_name("QUOTIENT")
                    .help("decomposition to re-express on (default: the measure carrier)"),
            )
            .arg(output_flag())
            .arg(json_flag())
    }

    fn run(&self, matches: &ArgMatches) -> CmdResult {
        let mu_dto: schema::MeasureDto =
            super::read_json(matches.get_one::<String>("measure").expect("required"))?;
        let mu = schema::measure_from_dto(&mu_dto).map_err(|e| CliError::Io(e.to_string()))?;
        let sigma = match matches.get_one::<String>("sigma") {
            Some(path) => {
                let dto: schema::QuotientDto = super::read_json(path)?;
                schema::quotient_from_dto(&dto).map_err(|e| CliError::Io(e.to_string()))?
            }
            None => mu.carrier().clone(),
        };
        let strict = mu
            .strict_supports(&sigma)
            .map_err(|e| super::domain_failure(matches, measure_error_class(&e), e.to_string()))?;

        let rows: Vec<serde_json::Value> = strict
            .iter()
            .map(|(cell, eps)| json!({ "cell": cell, "epsilon": format_rat(eps) }))
            .collect();
        let machine = json!({ "strict_supports": rows });
        maybe_write(matches, &machine)?;
        let mut human = vec![format!("{} strict supports", strict.len())];
        human.extend(
            strict
                .iter()
                .map(|(cell, eps)| format!("  cell {cell} (epsilon {})", format_rat(eps))),
        );
        emit(matches, &machine, &human);
        Ok(())
    }
}
