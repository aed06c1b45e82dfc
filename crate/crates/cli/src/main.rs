// Copyright 2026 spinstar contributors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use spinstar::suites::SuiteKind;
use spinstar_cli::{commands, CliError, Result, ScenarioConfig};

#[derive(Parser)]
#[command(name = "spinstar", version, about = "Spin-star qubit network simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the time series of a scenario as a table
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Map a scenario onto an equivalent smaller system and report residuals
    Reduce {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Outer qubits of the equivalent system (defaults to run.reduce_to)
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run the seeded verification suites
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Replace every suite's pass threshold
        #[arg(long)]
        tolerance: Option<f64>,
        /// Directory for verify.json
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one scenario per parameter value, in parallel
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// M, gamma, Gamma, kappa, J, radius or horizon
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        values: Vec<f64>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario TOML file
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Built-in scenario: fig2 or lh1
    #[arg(long)]
    preset: Option<String>,
    /// Output directory (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override run.samples
    #[arg(long)]
    samples: Option<usize>,
    /// Override system.symmetry_tolerance
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Bounds,
    Oracle,
    Equivalence,
    Dissipative,
    All,
}

impl SuiteArg {
    fn kinds(self) -> Vec<SuiteKind> {
        match self {
            SuiteArg::Bounds => vec![SuiteKind::Bounds],
            SuiteArg::Oracle => vec![SuiteKind::Oracle],
            SuiteArg::Equivalence => vec![SuiteKind::Equivalence],
            SuiteArg::Dissipative => vec![SuiteKind::Dissipative],
            SuiteArg::All => SuiteKind::ALL.to_vec(),
        }
    }
}

impl ScenarioArgs {
    fn load(&self) -> Result<(ScenarioConfig, String)> {
        let (mut config, stem) = match (&self.config, &self.preset) {
            (Some(path), _) => {
                let stem = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "scenario".into());
                (ScenarioConfig::from_path(path)?, stem)
            }
            (None, Some(name)) => (ScenarioConfig::preset(name)?, name.clone()),
            (None, None) => return Err(CliError::Usage("pass --config or --preset".into())),
        };
        if let Some(samples) = self.samples {
            config.run.samples = samples;
        }
        if let Some(tol) = self.tolerance {
            config.system.symmetry_tolerance = tol;
        }
        config.validate("command line")?;
        Ok((config, stem))
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: Option<&Path>, file: &str, contents: &str) -> Result<()> {
    match out {
        Some(dir) => {
            let path = dir.join(file);
            write(&path, contents)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => print_stdout(contents),
    }
}

/// A reader closing the pipe early (`| head`) is not an error.
fn print_stdout(contents: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(contents.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { scenario } => {
            let (config, stem) = scenario.load()?;
            let table = commands::simulate(&config)?;
            emit(scenario.out.as_deref(), &format!("{stem}.csv"), &table.emit())
        }
        Command::Reduce { scenario, n } => {
            let (config, stem) = scenario.load()?;
            let report = commands::reduce(&config, n)?;
            let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            eprintln!(
                "M={} -> n={}: Delta_n={:.6}, max residual P={:.3e}, E={:.3e} ({:?})",
                report.m, report.n, report.delta_n, report.max_residual_p, report.max_residual_e, report.classification
            );
            emit(scenario.out.as_deref(), &format!("{stem}_reduce_n{}.json", report.n), &json)
        }
        Command::Verify {
            suite,
            seed,
            tolerance,
            out,
        } => {
            let summary = commands::verify(&suite.kinds(), seed, tolerance)?;
            let json = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
            print_stdout(&json)?;
            if let Some(dir) = out {
                write(&dir.join("verify.json"), &json)?;
            }
            if summary.passed {
                Ok(())
            } else {
                let failed: Vec<&str> = summary
                    .suites
                    .iter()
                    .filter(|s| !s.passed)
                    .map(|s| s.suite.name())
                    .collect();
                Err(CliError::SuiteFailure(failed.join(", ")))
            }
        }
        Command::Sweep {
            scenario,
            param,
            values,
        } => {
            let (config, _) = scenario.load()?;
            let out = scenario
                .out
                .as_deref()
                .ok_or_else(|| CliError::Usage("sweep writes one file per value: pass --out".into()))?;
            let result = commands::sweep(&config, &param, &values)?;
            // each per-value table is written by exactly one worker
            result
                .tables
                .par_iter()
                .enumerate()
                .map(|(k, table)| write(&out.join(format!("sweep_{param}_{k:03}.csv")), &table.emit()))
                .collect::<Result<Vec<()>>>()?;
            emit(Some(out), &format!("sweep_{param}.csv"), &result.summary.emit())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
