//! Command-line surface and dispatch.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mempart_core::engine::{compute_trace, observables_trace, EngineMode, EngineSettings};
use mempart_core::observables::{plus_minus, plus_plus, EntropyBase, FidelityConvention};
use mempart_core::partition::{run_table1, ClassifierControl, DEFAULT_REVIVAL_THRESHOLD};
use mempart_core::{
    count_decoherence_functions, count_partitions, partition::partition_of, Error,
    ObservableSettings, TimeGrid,
};
use num_complex::Complex64;
use thiserror::Error as ThisError;

use crate::csv::{observables_csv, trace_csv};
use crate::scenario::{ParseError, ScenarioFile};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED_CHECK: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_ENGINE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mempart",
    version,
    about = "Engineered two-photon dephasing and memory partitions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decoherence functions of a scenario as CSV.
    Trace {
        scenario: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Revival threshold for the partition printed to stderr.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Purities, entropy, trace distance and fidelity as CSV.
    Observables {
        scenario: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Reference::PlusPlus)]
        reference: Reference,
        /// Reference amplitudes for `--reference custom`: "re,im; re,im; re,im; re,im".
        #[arg(long, required_if_eq("reference", "custom"))]
        custom: Option<String>,
        /// Divide each decoherence function by its magnitude at tau = 0.
        #[arg(long)]
        rescale: bool,
        #[arg(long, value_enum, default_value_t = Fidelity::Root)]
        fidelity: Fidelity,
        #[arg(long, value_enum, default_value_t = Entropy::Bits)]
        entropy: Entropy,
    },
    /// Classify the sixteen preset scenarios and compare with the expected partitions.
    Table1 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_REVIVAL_THRESHOLD)]
        threshold: f64,
    },
    /// Number of decoherence functions and memory partitions for N qubits.
    Count {
        qubits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// analytic, oracle or cross-check (default: the scenario's engine.mode).
    #[arg(long)]
    pub engine: Option<EngineMode>,
    #[arg(long)]
    pub grid_max: Option<f64>,
    #[arg(long)]
    pub grid_step: Option<f64>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Reference {
    PlusPlus,
    PlusMinus,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fidelity {
    Root,
    Squared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Entropy {
    Bits,
    Nats,
}

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Engine(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine(_) => EXIT_ENGINE,
            _ => EXIT_INPUT,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::NormViolation { .. }
            | Error::WeightViolation(_)
            | Error::GridViolation(_) => CliError::Input(e.to_string()),
            Error::UnsupportedAnalytic(_)
            | Error::QuadratureNonConverged { .. }
            | Error::PsdViolation { .. } => CliError::Engine(e.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<ScenarioFile, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ScenarioFile::parse(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    let io_err = |source, path: &str| CliError::Io {
        path: path.to_string(),
        source,
    };
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_err(e, &p.display().to_string())),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| io_err(e, "stdout")),
    }
}

fn engine_settings(
    file: &ScenarioFile,
    mode: Option<EngineMode>,
) -> Result<EngineSettings, CliError> {
    let mut s = file.settings()?;
    if let Some(m) = mode {
        s.mode = m;
    }
    Ok(s)
}

fn parse_state(text: &str) -> Result<[Complex64; 4], CliError> {
    let bad = || {
        CliError::Input(format!(
            "--custom expects four 're,im' pairs separated by ';', got '{text}'"
        ))
    };
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 4 {
        return Err(bad());
    }
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (slot, p) in out.iter_mut().zip(parts) {
        let nums: Vec<f64> = p
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        *slot = match nums.as_slice() {
            [re] => Complex64::new(*re, 0.0),
            [re, im] => Complex64::new(*re, *im),
            _ => return Err(bad()),
        };
    }
    Ok(out)
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Trace {
            scenario,
            common,
            threshold,
        } => {
            let file = load(&scenario)?;
            let eps = threshold.unwrap_or(file.threshold);
            if !(eps > 0.0) {
                return Err(CliError::Input(format!(
                    "threshold must be positive, got {eps}"
                )));
            }
            let cfg = file.config(common.grid_max, common.grid_step)?;
            let settings = engine_settings(&file, common.engine)?;
            let trace = compute_trace(&cfg, &settings)?;
            emit(common.out.as_deref(), &trace_csv(&trace))?;
            eprintln!(
                "partition {} (threshold {eps})",
                partition_of(&trace.sets, eps)
            );
            cross_check_status(&trace.max_deviation, &settings)
        }
        Command::Observables {
            scenario,
            common,
            reference,
            custom,
            rescale,
            fidelity,
            entropy,
        } => {
            let file = load(&scenario)?;
            let cfg = file.config(common.grid_max, common.grid_step)?;
            let settings = engine_settings(&file, common.engine)?;
            let target = match reference {
                Reference::PlusPlus => plus_plus(),
                Reference::PlusMinus => plus_minus(),
                Reference::Custom => parse_state(custom.as_deref().unwrap_or_default())?,
            };
            let obs = ObservableSettings {
                fidelity: match fidelity {
                    Fidelity::Root => FidelityConvention::Root,
                    Fidelity::Squared => FidelityConvention::Squared,
                },
                entropy: match entropy {
                    Entropy::Bits => EntropyBase::Bits,
                    Entropy::Nats => EntropyBase::Nats,
                },
            };
            let (trace, rows) = observables_trace(&cfg, &settings, &target, &obs, rescale)?;
            emit(common.out.as_deref(), &observables_csv(&rows, obs.entropy))?;
            cross_check_status(&trace.max_deviation, &settings)
        }
        Command::Table1 { common, threshold } => {
            let default = TimeGrid::default_classification();
            let grid = TimeGrid::uniform(
                common.grid_max.unwrap_or(default.tau_max()),
                common.grid_step.unwrap_or(default.step),
            )?;
            let ctl = ClassifierControl::new(threshold, grid)?;
            let settings = EngineSettings::with_mode(common.engine.unwrap_or_default());
            let (report, all_passed) = table1_report(&ctl, &settings);
            emit(common.out.as_deref(), &report)?;
            Ok(if all_passed {
                EXIT_OK
            } else {
                EXIT_FAILED_CHECK
            })
        }
        Command::Count { qubits, out } => {
            let m = count_decoherence_functions(qubits)?;
            let partitions = match count_partitions(qubits)? {
                Some(p) => p.to_string(),
                None => format!("2^{m}"),
            };
            emit(
                out.as_deref(),
                &format!("qubits,decoherence_functions,partitions\n{qubits},{m},{partitions}\n"),
            )?;
            Ok(EXIT_OK)
        }
    }
}

fn cross_check_status(deviation: &Option<f64>, settings: &EngineSettings) -> Result<u8, CliError> {
    match deviation {
        Some(d) if *d > settings.cross_check_tolerance => {
            eprintln!(
                "cross-check failed: max deviation {d:.3e} exceeds {:.1e}",
                settings.cross_check_tolerance
            );
            Ok(EXIT_FAILED_CHECK)
        }
        Some(d) => {
            eprintln!("cross-check max deviation {d:.3e}");
            Ok(EXIT_OK)
        }
        None => Ok(EXIT_OK),
    }
}

/// Text report of the preset table and whether every row passed.
pub fn table1_report(ctl: &ClassifierControl, settings: &EngineSettings) -> (String, bool) {
    let outcomes = run_table1(ctl, settings);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "engine {}, threshold {}, grid [0, {}] step {}",
        settings.mode,
        ctl.revival_threshold,
        ctl.grid.tau_max(),
        ctl.grid.step
    );
    let _ = writeln!(
        s,
        "{:<4}{:<32}{:<10}{:<10}{:<12}result",
        "row", "scenario", "expected", "computed", "deviation"
    );
    for o in &outcomes {
        let (computed, deviation) = match &o.computed {
            Ok(c) => (
                c.partition.to_string(),
                c.max_deviation
                    .map_or("-".to_string(), |d| format!("{d:.2e}")),
            ),
            Err(e) => (format!("error: {e}"), "-".to_string()),
        };
        let _ = writeln!(
            s,
            "{:<4}{:<32}{:<10}{:<10}{:<12}{}",
            o.id,
            o.summary,
            o.expected.to_string(),
            computed,
            deviation,
            if o.passed { "PASS" } else { "FAIL" }
        );
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let _ = writeln!(s, "{passed}/{} PASS", outcomes.len());
    (s, passed == outcomes.len())
}
