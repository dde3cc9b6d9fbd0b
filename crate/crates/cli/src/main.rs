//! `tropkit` — batch front end for exact polyhedral/tropical computations.
//!
//! Every subcommand lives behind the [`commands::Command`] trait and is
//! registered by name; dispatch is a registry lookup. Exit codes: 0 on
//! success, 1 on IO/parse failures, 2 on domain violations.

mod commands;

use std::process::ExitCode;

fn main() -> ExitCode {
    let registry = commands::registry();
    let mut app = clap::Command::new("tropkit")
        .about("exact-rational toolkit for periodic polyhedral complexes, skeleton measures and degeneration ranks")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for cmd in &registry {
        let sub = clap::Command::new(cmd.name()).about(cmd.about());
        app = app.subcommand(cmd.configure(sub));
    }

    let matches = app.get_matches();
    let (name, sub_matches) = matches.subcommand().expect("subcommand required");
    let cmd = registry
        .iter()
        .find(|c| c.name() == name)
        .expect("registered subcommand");
    match cmd.run(sub_matches) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
