use std::io::IsTerminal;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

mod commands;
mod input;

#[derive(Parser, Debug)]
#[command(name = "qautk", version, about = "Exact K-theory and structure computations for quantum automorphism groups")]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Emit the JSON report (default when stdout is not a terminal).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Emit a human-readable table (default on a terminal).
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// K₀ and K₁ of C(Qut(A)) from the boundary map.
    Ktheory(commands::DimsArgs),
    /// Closed-form K-groups for the dimension vector.
    ClosedForm(commands::DimsArgs),
    /// Compare the boundary-map computation with the closed form.
    Verify(commands::DimsArgs),
    /// Print the boundary matrix in the matrix text format.
    Boundary(commands::DimsArgs),
    /// Certify exactness of the truncated induced complexes.
    ResolutionCheck(commands::ResolutionArgs),
    /// Smith normal form of an integer matrix.
    Snf(commands::SnfArgs),
    /// μμ* and the δ-form test for a state on a multi-matrix algebra.
    DeltaForm(commands::DeltaArgs),
    /// Twisted group algebra of a cocycle and its block decomposition.
    TwistedGroup(commands::TwistedArgs),
    /// Subgroup and cocycle of an ergodic graded algebra.
    ExtractTorsion(commands::ExtractArgs),
    /// Ranks of the classes of 1 and u_ij in K₀(C(Sₙ)).
    MagicRank(commands::MagicArgs),
    /// Seeded random sweep of verify and resolution exactness.
    Sweep(commands::SweepArgs),
}

/// Result of one subcommand before rendering.
pub struct Outcome {
    pub inputs: Value,
    pub results: Value,
    pub warnings: Vec<String>,
    /// `false` maps to exit code 1.
    pub verified: bool,
    pub table: String,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: String,
    inputs: &'a Value,
    results: &'a Value,
    warnings: &'a [String],
    verified: bool,
    elapsed_ms: u128,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let outcome = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let json = cli.output.json || (!cli.output.table && !std::io::stdout().is_terminal());
    if json {
        let report = RunReport {
            command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
            inputs: &outcome.inputs,
            results: &outcome.results,
            warnings: &outcome.warnings,
            verified: outcome.verified,
            elapsed_ms: start.elapsed().as_millis(),
        };
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{}", outcome.table);
        if !outcome.table.ends_with('\n') {
            println!();
        }
        for w in &outcome.warnings {
            println!("warning: {w}");
        }
    }
    if outcome.verified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
