mod bundle;
mod commands;
mod error;
mod examples;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use bundle::{parse_sweep, Mode};
use commands::{Input, VerifyOptions};
use error::CliError;
use report::Report;

#[derive(Parser)]
#[command(
    name = "coinrt",
    version,
    about = "Exact Reidemeister classes, coincidence traces and averaging checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Built-in bundle (see `coinrt example`).
    #[arg(long, value_name = "NAME")]
    example: Option<String>,
    /// Bundle file in JSON.
    #[arg(long, value_name = "PATH")]
    bundle: Option<PathBuf>,
}

impl InputArgs {
    fn input(&self) -> Input {
        match (&self.example, &self.bundle) {
            (Some(name), _) => Input::Example(name.clone()),
            (None, Some(path)) => Input::File(path.clone()),
            (None, None) => unreachable!("clap requires one input"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Twisted conjugacy classes, coincidence subgroup and cover checks.
    Reidemeister {
        #[command(flatten)]
        input: InputArgs,
        /// Prints the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Reidemeister trace, Lefschetz and Nielsen numbers of an affine pair.
    Trace {
        #[command(flatten)]
        input: InputArgs,
        /// Prints the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Evaluates both sides of the averaging formulas.
    VerifyAveraging {
        #[command(flatten)]
        input: InputArgs,
        /// Prints the report as JSON.
        #[arg(long)]
        json: bool,
        /// Overrides the bundle's mode.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Inclusive range for the sweep variable `k`, e.g. -3..3.
        #[arg(long, value_parser = parse_sweep, allow_hyphen_values = true)]
        sweep: Option<(i64, i64)>,
        /// Negates one coefficient of the right-hand side; the check must fail.
        #[arg(long)]
        sabotage: bool,
    },
    /// Runs the acceptance criteria (all of them by default).
    Selftest {
        /// Prints the report as JSON.
        #[arg(long)]
        json: bool,
        /// Criteria to run, e.g. A1 A4.
        criteria: Vec<String>,
    },
    /// Prints a built-in bundle as JSON, or lists them.
    Example { name: Option<String> },
}

fn run(cli: Cli) -> Result<(String, u8), CliError> {
    let start = Instant::now();
    let (report, json): (Report, bool) = match cli.command {
        Command::Reidemeister { input, json } => (commands::reidemeister(&commands::load(&input.input())?)?, json),
        Command::Trace { input, json } => (commands::trace(&commands::load(&input.input())?)?, json),
        Command::VerifyAveraging {
            input,
            json,
            mode,
            sweep,
            sabotage,
        } => {
            let b = commands::load(&input.input())?;
            let opts = VerifyOptions { mode, sweep, sabotage };
            (commands::verify_averaging(&b, &opts)?, json)
        }
        Command::Selftest { json, criteria } => (commands::selftest(&criteria)?, json),
        Command::Example { name: None } => return Ok((examples::names().join("\n") + "\n", 0)),
        Command::Example { name: Some(name) } => {
            let spec = examples::builtin(&name)?;
            let text = serde_json::to_string_pretty(&spec).expect("bundle serializes");
            return Ok((text + "\n", 0));
        }
    };
    let mut report = report;
    report.elapsed = start.elapsed();
    let text = if json {
        serde_json::to_string_pretty(&report.to_json()).expect("report serializes") + "\n"
    } else {
        report.to_text()
    };
    Ok((text, report.exit_code()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, code)) => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = out.write_all(text.as_bytes());
            let _ = out.flush();
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
