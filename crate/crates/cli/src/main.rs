//! `ckdv`: exact solutions, superposition, conserved densities, evolution and
//! verification for the coupled KdV system.

mod args;
mod evolve;
mod gardner;
mod generate;
mod profile;
mod run;
mod target;
mod superpose;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use run::Run;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ckdv::Error),
}

impl CliError {
    /// 2 for parameter and configuration problems, 3 for a singular
    /// superposition, 4 for blow-up.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                ckdv::Error::SingularDenominator { .. } => 3,
                ckdv::Error::BlowUp { .. } => 4,
                _ => 2,
            },
        }
    }
}

#[derive(Parser)]
#[command(
    name = "ckdv",
    version,
    about = "Coupled KdV laboratory: exact solutions, superposition, conserved densities, evolution"
)]
struct Cli {
    /// Directory for all output files.
    #[arg(long, global = true, default_value = ".")]
    outdir: PathBuf,

    /// Prefix of output file names (defaults to the command name).
    #[arg(long, global = true)]
    run_id: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample an exact solution family on a window at given times.
    Generate(generate::Args),
    /// Superpose two Bäcklund branches over a germ and scan the denominator.
    Superpose(superpose::Args),
    /// Build the conserved-density ladder and check each density.
    Gardner(gardner::Args),
    /// Evolve initial data pseudo-spectrally and record the invariants.
    Evolve(evolve::Args),
    /// Residual checks on solution targets.
    Verify(verify::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = match &cli.command {
        Command::Generate(_) => "generate",
        Command::Superpose(_) => "superpose",
        Command::Gardner(_) => "gardner",
        Command::Evolve(_) => "evolve",
        Command::Verify(_) => "verify",
    };
    let mut run = Run::new(name, cli.outdir, cli.run_id);
    let result = match cli.command {
        Command::Generate(a) => generate::run(a, &mut run),
        Command::Superpose(a) => superpose::run(a, &mut run),
        Command::Gardner(a) => gardner::run(a, &mut run),
        Command::Evolve(a) => evolve::run(a, &mut run),
        Command::Verify(a) => verify::run(a, &mut run),
    };
    let (code, err) = match result {
        Ok(code) => (code, None),
        Err(e) => {
            eprintln!("error: {e}");
            (e.exit_code(), Some(e))
        }
    };
    if let Err(e) = run.finish(code, err.as_ref()) {
        eprintln!("error: could not write manifest: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
