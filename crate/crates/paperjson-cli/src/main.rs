//! `paperjson`: conformance tooling for machine-readable paper companions.
//!
//! Exit codes follow the conformance contract: 0 success, 1 structural
//! (schema) violation, 2 cross-reference violation, 3 input file missing,
//! 64 command-line usage error.

mod commands;
mod output;

use clap::error::ErrorKind;
use clap::Parser;

use commands::Command;
use output::EXIT_USAGE;

#[derive(Parser)]
#[command(
    name = "paperjson",
    version,
    about = "Validate, resolve, and index machine-readable paper companions",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Requested help or version output is a success; everything
            // else is a malformed invocation.
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    std::process::exit(commands::run(cli.command));
}
