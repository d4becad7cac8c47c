pub mod fixtures;
pub mod graph;
pub mod receipt;
pub mod registry;
pub mod resolve;
pub mod schema;
pub mod validate;

use clap::Subcommand;

#[derive(Subcommand)]
pub enum Command {
    /// Check a companion file against the embedded schema, and optionally
    /// cross-check its IDs against the paper source
    Validate(validate::ValidateArgs),
    /// Fetch a canonical reference and print the item it addresses
    Resolve(resolve::ResolveArgs),
    /// Create and verify read receipts
    #[command(subcommand)]
    Receipt(receipt::ReceiptCommand),
    /// Build and walk the propagation graph
    #[command(subcommand)]
    Graph(graph::GraphCommand),
    /// Maintain and serve a registry of known nodes
    #[command(subcommand)]
    Registry(registry::RegistryCommand),
    /// Inspect the embedded schema
    #[command(subcommand)]
    Schema(schema::SchemaCommand),
    /// Generate violation fixtures for testing validators
    #[command(subcommand)]
    Fixtures(fixtures::FixturesCommand),
}

pub fn run(command: Command) -> i32 {
    match command {
        Command::Validate(args) => validate::run(args),
        Command::Resolve(args) => resolve::run(args),
        Command::Receipt(cmd) => receipt::run(cmd),
        Command::Graph(cmd) => graph::run(cmd),
        Command::Registry(cmd) => registry::run(cmd),
        Command::Schema(cmd) => schema::run(cmd),
        Command::Fixtures(cmd) => fixtures::run(cmd),
    }
}
