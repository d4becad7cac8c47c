use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand};
use paperjson::fixtures::{generate_violation_fixture, ViolationClass};
use serde_json::json;

use crate::output::{Out, EXIT_OK, EXIT_SCHEMA};

#[derive(Subcommand)]
pub enum FixturesCommand {
    /// Write one violation-class fixture into a directory
    Gen(GenArgs),
}

#[derive(Args)]
pub struct GenArgs {
    /// Violation class to trigger (see `--help` for the list)
    #[arg(value_name = "CLASS", value_parser = ViolationClass::from_str)]
    class: ViolationClass,
    /// Directory to write into (created if needed)
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Print a canonical JSON report on standard output
    #[arg(long)]
    json: bool,
}

pub fn run(command: FixturesCommand) -> i32 {
    match command {
        FixturesCommand::Gen(args) => run_gen(args),
    }
}

fn run_gen(args: GenArgs) -> i32 {
    let out = Out::new(args.json);
    let fixture = generate_violation_fixture(args.class);

    if let Err(e) = std::fs::create_dir_all(&args.out) {
        return out.fail(
            EXIT_SCHEMA,
            &format!("cannot create {}: {e}", args.out.display()),
        );
    }
    let paper_path = args.out.join("paper.json");
    if let Err(e) = std::fs::write(&paper_path, &fixture.paper_json) {
        return out.fail(
            EXIT_SCHEMA,
            &format!("cannot write {}: {e}", paper_path.display()),
        );
    }
    let source_path = match &fixture.source {
        Some(source) => {
            let path = args.out.join("source.typ");
            if let Err(e) = std::fs::write(&path, source) {
                return out.fail(EXIT_SCHEMA, &format!("cannot write {}: {e}", path.display()));
            }
            Some(path)
        }
        None => None,
    };

    out.note(&format!(
        "wrote {} fixture to {}",
        args.class.name(),
        args.out.display()
    ));
    let check = match &source_path {
        Some(source) => format!(
            "paperjson validate {} --against {}",
            paper_path.display(),
            source.display()
        ),
        None => format!("paperjson validate {}", paper_path.display()),
    };
    out.note(&format!(
        "expect exit code {} from: {check}",
        fixture.expected_exit_code
    ));
    out.machine(json!({
        "exit_code": EXIT_OK,
        "class": args.class.name(),
        "expected_exit_code": fixture.expected_exit_code,
        "paper_json": paper_path,
        "source": source_path,
    }));
    EXIT_OK
}
