use std::io::Write;

use clap::{Args, Subcommand};
use paperjson::canonical::canonical_json_bytes;
use paperjson::schema::embedded_schema;

use crate::output::EXIT_OK;

#[derive(Subcommand)]
pub enum SchemaCommand {
    /// Print the embedded schema as canonical JSON
    Dump(DumpArgs),
}

#[derive(Args)]
pub struct DumpArgs {}

pub fn run(command: SchemaCommand) -> i32 {
    match command {
        SchemaCommand::Dump(DumpArgs {}) => {
            let bytes = canonical_json_bytes(&embedded_schema().to_value());
            std::io::stdout()
                .write_all(&bytes)
                .expect("write to stdout");
            EXIT_OK
        }
    }
}
