mod commands;
mod json;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "kgl", version, about = "Exact analysis of generalized isomorphisms over k[t] localized at t = 0")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Output {
    /// JSON output (the only format; accepted for compatibility).
    #[arg(long)]
    json: bool,
    /// Indent the JSON output.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct InputArg {
    /// Input JSON file.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pipeline on a matrix: Smith data, chart, stratum, Plücker point.
    Analyze {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        out: Output,
    },
    /// Serialize the point built from a matrix in the GenIso schema.
    Construct {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        out: Output,
    },
    /// Check every axiom of a serialized generalized isomorphism.
    Validate {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        out: Output,
    },
    /// Decompose the closed fibre along its stratum.
    Decompose {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        out: Output,
    },
    /// Run the acceptance property suite.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Cap every instance count at this value.
        #[arg(long)]
        count: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
}

fn read(input: &InputArg) -> Result<String> {
    std::fs::read_to_string(&input.input).with_context(|| format!("cannot read {}", input.input.display()))
}

fn emit(v: &serde_json::Value, out: &Output) -> Result<()> {
    let _ = out.json;
    let text = if out.pretty { serde_json::to_string_pretty(v)? } else { serde_json::to_string(v)? };
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let (outcome, out) = match &cli.cmd {
        Cmd::Analyze { input, out } => (commands::analyze(&read(input)?)?, out),
        Cmd::Construct { input, out } => (commands::construct(&read(input)?)?, out),
        Cmd::Validate { input, out } => (commands::validate(&read(input)?)?, out),
        Cmd::Decompose { input, out } => (commands::decompose(&read(input)?)?, out),
        Cmd::Selftest { seed, count, out } => (commands::selftest(*seed, *count), out),
    };
    emit(&outcome.json, out)?;
    Ok(outcome.ok)
}

/// Library errors other than syntax errors mean the input parsed but is not
/// a valid object; everything else is a usage problem.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<kgl_core::Error>() {
        Some(kgl_core::Error::SyntaxError { .. }) | None => 1,
        Some(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
