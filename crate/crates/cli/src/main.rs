mod commands;
mod flow;

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use catxi::algebra::rational::parse_rational;
use catxi::algebra::BigRational;
use clap::{Args, Parser, Subcommand};
use serde_json::Value;

#[derive(Parser)]
#[command(
    name = "catxi",
    version,
    about = "Category bounds for cohomology classes and flow audits on tori"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a complex; report Betti numbers and, given a cocycle, its periods.
    Complex {
        complex: PathBuf,
        #[arg(long)]
        cocycle: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Torsion of the infinite cyclic cover and movability of a cycle.
    Movability(commands::MovabilityArgs),
    /// Lower and upper bounds for the category of a class.
    Catbounds(commands::CatboundsArgs),
    /// Audit a vector field on a torus against the category lower bound.
    FlowAudit(flow::FlowArgs),
}

#[derive(Args, Clone)]
pub struct Output {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Process outcome; the code is the exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub const INPUT_ERROR: u8 = 2;
pub const HYPOTHESIS_FAILURE: u8 = 3;
pub const INCONSISTENT: u8 = 4;

pub fn input_error(e: impl Display) -> Failure {
    Failure {
        code: INPUT_ERROR,
        message: e.to_string(),
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

pub fn parse_pool(s: &str) -> Result<Vec<BigRational>, Failure> {
    s.split(',')
        .map(|x| {
            parse_rational(x.trim())
                .ok_or_else(|| input_error(format!("bad rational in pool: {x:?}")))
        })
        .collect()
}

/// Writes `report` as sorted-key JSON. With `--out` the summary goes to
/// stdout, otherwise to stderr.
pub fn emit(report: &Value, summary: Option<&str>, out: &Output) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(report).expect("JSON values serialize");
    text.push('\n');
    match &out.out {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
            if let Some(s) = summary {
                print!("{s}");
            }
        }
        None => {
            print!("{text}");
            if let Some(s) = summary {
                eprint!("{s}");
            }
        }
    }
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("CATXI_THREADS") {
        let n: usize = v.parse().map_err(|_| {
            input_error(format!(
                "CATXI_THREADS must be a positive integer, got {v:?}"
            ))
        })?;
        if n == 0 {
            return Err(input_error("CATXI_THREADS must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(input_error)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Complex {
            complex,
            cocycle,
            out,
        } => commands::complex(&complex, cocycle.as_deref(), &out),
        Command::Movability(args) => commands::movability(&args),
        Command::Catbounds(args) => commands::catbounds(&args),
        Command::FlowAudit(args) => flow::flow_audit(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
