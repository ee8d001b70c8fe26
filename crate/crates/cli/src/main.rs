//! `putative`: algebra checks, distribution reports and putative-value
//! sampling for single-mode quadratures.
//!
//! Exit codes: 0 success, 1 algebra or oracle failure, 2 resolution or
//! numerical failure, 3 invalid scenario or invocation, 4 file I/O.

mod commands;
mod error;
mod scenario;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use putative::Fig1Variant;
use rayon::prelude::*;

use commands::{Fault, Outcome};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "putative",
    version,
    about = "Putative-value contradiction checks for quadrature observables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the commuting contexts of the two-mode diagram and the
    /// commuting decompositions, exactly.
    VerifyAlgebra {
        #[arg(long, value_enum, default_value_t = VariantArg::Standard)]
        variant: VariantArg,
        /// Write `algebra.json` here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
    /// Quantum vs putative distribution of a quadrature, with verdict.
    Report(ScenarioArgs),
    /// Draw putative values `alpha x + beta p` from independent marginals.
    Sample(ScenarioArgs),
    /// Compare grid moments of random Gaussians against closed forms.
    OracleCheck {
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Write `oracle_check.json` here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario JSON file.
    #[arg(required_unless_present = "all", conflicts_with = "all")]
    scenario: Option<PathBuf>,
    /// Run every `*.json` scenario in this directory.
    #[arg(long, value_name = "DIR")]
    all: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Overrides the scenario's contradiction tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Standard,
    AltTop,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    CorruptB,
}

fn write_artifacts(dir: &Path, outcome: &Outcome) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    for a in &outcome.artifacts {
        let path = dir.join(&a.file_name);
        fs::write(&path, &a.bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// Emits a single-document outcome to stdout, or to `out` when given.
fn emit_document(outcome: Outcome, out: Option<&Path>) -> Result<i32, CliError> {
    eprint!("{}", outcome.stderr);
    match out {
        Some(dir) => write_artifacts(dir, &outcome)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            for a in &outcome.artifacts {
                stdout.write_all(&a.bytes)?;
            }
        }
    }
    Ok(outcome.exit)
}

fn scenario_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn run_scenarios(
    args: &ScenarioArgs,
    run: impl Fn(&Path) -> Result<Outcome, CliError> + Sync,
) -> Result<i32, CliError> {
    if let Some(t) = args.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage("--tolerance must be positive".into()));
        }
    }
    let Some(dir) = &args.all else {
        let outcome = run(args.scenario.as_deref().expect("clap enforces a scenario"))?;
        write_artifacts(&args.out, &outcome)?;
        print!("{}", outcome.stdout);
        eprint!("{}", outcome.stderr);
        return Ok(outcome.exit);
    };

    let files = scenario_files(dir)?;
    let results: Vec<_> = files.par_iter().map(|f| run(f)).collect();
    let mut exit = 0;
    for (file, result) in files.iter().zip(results) {
        let name = file.file_name().unwrap_or_default().to_string_lossy();
        let code = match result.and_then(|o| write_artifacts(&args.out, &o).map(|_| o)) {
            Ok(o) => {
                for line in o.stdout.lines() {
                    println!("{name}: {line}");
                }
                eprint!("{}", o.stderr);
                o.exit
            }
            Err(e) => {
                eprintln!("{name}: {e}");
                e.exit_code()
            }
        };
        exit = exit.max(code);
    }
    Ok(exit)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::VerifyAlgebra {
            variant,
            out,
            inject_fault,
        } => {
            let variant = match variant {
                VariantArg::Standard => Fig1Variant::Standard,
                VariantArg::AltTop => Fig1Variant::AltTop,
            };
            let fault = inject_fault.map(|FaultArg::CorruptB| Fault::CorruptB);
            emit_document(commands::verify_algebra(variant, fault)?, out.as_deref())
        }
        Command::Report(args) => {
            let tolerance = args.tolerance;
            run_scenarios(&args, |p| commands::report(p, tolerance))
        }
        Command::Sample(args) => run_scenarios(&args, commands::sample),
        Command::OracleCheck { count, seed, out } => {
            if count == 0 {
                return Err(CliError::Usage("--count must be at least 1".into()));
            }
            emit_document(commands::oracle_check(count, seed)?, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
