//! `lorcomp`: generate finite Lorentzian spaces, check curvature bounds and
//! run the direction and cone experiments.
//!
//! Exit codes: 0 pass, 1 checked-and-failed (or a run-time failure), 2 usage
//! or structural error.

mod check;
mod experiment;
mod gen;
mod io;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lorcomp::curvcheck::BoundSide;
use lorcomp::{Ambient, Error};

#[derive(Parser)]
#[command(name = "lorcomp", version, about = "Lorentzian comparison geometry on finite spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a space file.
    Gen(gen::GenArgs),
    /// Run a check on a space file and write a report.
    #[command(subcommand)]
    Check(check::CheckCmd),
    /// Run an experiment and write a CSV table.
    #[command(subcommand)]
    Experiment(experiment::ExperimentCmd),
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Structural(_) | Error::Range { .. } | Error::Domain(_) | Error::InvalidBase(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Run(e.to_string()),
        }
    }
}

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AmbientName {
    Minkowski,
    Desitter,
    Antidesitter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Upper,
    Lower,
}

impl From<SideArg> for BoundSide {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Upper => BoundSide::Upper,
            SideArg::Lower => BoundSide::Lower,
        }
    }
}

/// Ambient selection shared by `gen` and the experiments.
#[derive(Args, Clone, Debug)]
pub struct AmbientArgs {
    #[arg(long, value_enum, default_value = "minkowski")]
    pub ambient: AmbientName,
    /// Spacetime dimension; 3 only for Minkowski.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Curvature radius of de Sitter and anti-de Sitter space.
    #[arg(long, default_value_t = 1.0, value_parser = io::parse_positive)]
    pub scale: f64,
}

impl AmbientArgs {
    pub fn spec(&self) -> Result<Ambient, Failure> {
        ambient_spec(self.ambient, self.dim, self.scale)
    }
}

pub fn ambient_spec(name: AmbientName, dim: usize, scale: f64) -> Result<Ambient, Failure> {
    match (name, dim) {
        (AmbientName::Minkowski, 2) => Ok(Ambient::minkowski2()),
        (AmbientName::Minkowski, 3) => Ok(Ambient::minkowski3()),
        (AmbientName::Desitter, 2) => Ok(Ambient::de_sitter(scale)?),
        (AmbientName::Antidesitter, 2) => Ok(Ambient::anti_de_sitter(scale)?),
        (name, dim) => Err(Failure::Usage(format!("{name:?} is not available in dimension {dim}"))),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("LORCOMP_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("LORCOMP_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| Failure::Run(e.to_string()))
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Gen(args) => gen::run(&args),
        Command::Check(cmd) => check::run(&cmd),
        Command::Experiment(cmd) => experiment::run(&cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
