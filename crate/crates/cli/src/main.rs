use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use rigidsys_cli::{
    describe_schema, run, Command, RunConfig, DEFAULT_CONDUCTOR_CAP, DEFAULT_ORDER_BOUND,
};

/// Exact computations with monodromy tuples, rigid local systems and torsion
/// subtori, driven by JSON documents.
#[derive(Parser, Debug)]
#[command(name = "rigidsys", version)]
struct Args {
    /// Command to run.
    #[arg(value_enum, required_unless_present = "describe_schema")]
    command: Option<Command>,

    /// Input file, `-` for stdin, or inline JSON. Defaults to stdin.
    #[arg(long, short)]
    input: Option<String>,

    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,

    /// Torsion order bound for grid enumeration.
    #[arg(long, default_value_t = DEFAULT_ORDER_BOUND)]
    order_bound: u64,

    /// Largest cyclotomic conductor accepted in inputs and root searches.
    #[arg(long, default_value_t = DEFAULT_CONDUCTOR_CAP)]
    conductor_cap: u64,

    /// Treat the input as a JSON array and map the command over it.
    #[arg(long)]
    batch: bool,

    /// Print the input schema of a command and exit.
    #[arg(long, value_enum, value_name = "COMMAND")]
    describe_schema: Option<Command>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(cmd) = args.describe_schema {
        print!("{}", describe_schema(cmd));
        return ExitCode::SUCCESS;
    }
    let config = RunConfig {
        command: args.command.expect("required by clap"),
        input: args.input.unwrap_or_else(|| "-".into()),
        output: args.output,
        order_bound: args.order_bound,
        conductor_cap: args.conductor_cap,
        batch: args.batch,
    };
    let outcome = run(&config);
    if !outcome.written {
        print!("{}", outcome.report);
    }
    ExitCode::from(outcome.exit_code as u8)
}
