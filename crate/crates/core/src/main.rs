use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lagrangian_gas::io::{
    convergence, output::write_json, run, run_suite, write_convergence_csv, RunConfig, RunError, SuiteId, VerifyOptions,
};
use lagrangian_gas::symmetry::{scheme_invariance_check, Generator, GeneratorId, SolutionSegment};
use lagrangian_gas::GasError;

#[derive(Parser)]
#[command(name = "lgas", version, about = "Conservative and invariant schemes for 1D Lagrangian gas dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation and write snapshots, monitors and a summary.
    Run { config: PathBuf },
    /// Run a verification suite and print its JSON report.
    Verify {
        /// noether | eulerian-conversion | inhomogeneous | invariants | scheme-invariance
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Richardson self-convergence on a ladder of refinements.
    Convergence {
        config: PathBuf,
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    /// Check whether the configured scheme is invariant under a generator.
    Invariance {
        config: PathBuf,
        /// x1 | x2 | x3 | x4 | space-translation | galilean | projective | x0
        #[arg(long)]
        generator: String,
        /// Comma-separated group parameters.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<f64>,
        /// Number of recorded steps.
        #[arg(long, default_value_t = 3)]
        steps: usize,
    },
}

fn load(path: &Path) -> Result<RunConfig, RunError> {
    RunConfig::load(path).map_err(RunError::Validation)
}

fn out_dir(cfg: Option<&RunConfig>) -> PathBuf {
    match cfg {
        Some(c) => c.output_dir(),
        None => std::env::var_os(lagrangian_gas::io::OUTPUT_DIR_ENV).map_or_else(|| PathBuf::from("output"), PathBuf::from),
    }
}

fn write_out<S: serde::Serialize>(dir: &Path, name: &str, value: &S) -> Result<(), RunError> {
    let io = |e: GasError| RunError::Validation(e);
    std::fs::create_dir_all(dir).map_err(|e| io(e.into()))?;
    write_json(&dir.join(name), value).map_err(io)
}

fn print_json<S: serde::Serialize>(value: &S) -> Result<(), RunError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| RunError::Validation(e.into()))?;
    println!("{text}");
    Ok(())
}

fn execute(cmd: Command) -> Result<(), RunError> {
    match cmd {
        Command::Run { config } => {
            let cfg = load(&config)?;
            let dir = out_dir(Some(&cfg));
            let summary = run(&cfg, &dir)?;
            print_json(&summary)
        }
        Command::Verify { suite, seed } => {
            let id: SuiteId = suite.parse().map_err(RunError::Validation)?;
            let mut opts = VerifyOptions::default();
            if let Some(s) = seed {
                opts.seed = s;
            }
            let report = run_suite(id, &opts);
            write_out(&out_dir(None), &format!("verify_{id}.json"), &report)?;
            print_json(&report)?;
            if report.pass {
                Ok(())
            } else {
                Err(RunError::Numerical(GasError::Range(format!("suite {id} has failing checks"))))
            }
        }
        Command::Convergence { config, levels } => {
            let cfg = load(&config)?;
            let table = convergence(&cfg, levels)?;
            if let Some(w) = &table.warning {
                eprintln!("warning: {w}");
            }
            let dir = out_dir(Some(&cfg));
            std::fs::create_dir_all(&dir).map_err(|e| RunError::Validation(e.into()))?;
            write_convergence_csv(&dir.join("convergence.csv"), &table).map_err(RunError::Validation)?;
            print_json(&table)
        }
        Command::Invariance { config, generator, a, steps } => {
            let cfg = load(&config)?;
            let id: GeneratorId = generator.parse().map_err(RunError::Validation)?;
            if a.is_empty() {
                return Err(RunError::Validation(GasError::Argument("--a needs at least one value".into())));
            }
            let mut sim = lagrangian_gas::io::build_simulation(&cfg)?;
            let seg = SolutionSegment::record(&mut sim, steps.max(1)).map_err(RunError::Numerical)?;
            let reports = scheme_invariance_check(&Generator::lagrangian(id), &seg, &a).map_err(|e| match e {
                GasError::Domain(_) | GasError::SingularConstraint(_) => RunError::Numerical(e),
                other => RunError::Validation(other),
            })?;
            write_out(&out_dir(Some(&cfg)), &format!("invariance_{id}.json"), &reports)?;
            print_json(&reports)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
