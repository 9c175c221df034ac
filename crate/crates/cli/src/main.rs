//! Command-line driver: individual experiments and the verification
//! suite, rendered as human tables or machine JSON.
//!
//! Exit codes: 0 on pass, 1 on a failed verification, 2 when a size cap
//! refuses the computation, 64 on usage errors.

mod commands;
mod suite;

use clap::error::ErrorKind;
use clap::Parser;

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    match commands::Cli::try_parse() {
        Ok(cli) => commands::dispatch(&cli),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            commands::write_stdout(&e.to_string());
            0
        }
        Err(e) => {
            eprint!("{e}");
            64
        }
    }
}
