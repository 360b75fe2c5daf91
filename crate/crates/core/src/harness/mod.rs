//! Config-driven task runner behind the command-line tool.
//!
//! A run reads one [`RunConfig`], executes one [`Task`] and produces a
//! [`Report`] whose `status` maps onto the process exit code:
//!
//! | code | status            | meaning                                        |
//! |------|-------------------|------------------------------------------------|
//! | 0    | `ok`              | task finished, verdicts are in the report      |
//! | 1    | (io)              | report or CSV could not be written             |
//! | 2    | (config)          | config unreadable, invalid or incomplete       |
//! | 3    | `precondition`    | a hypothesis of the checked statement fails    |
//! | 4    | `non_convergence` | quadrature did not reach the tolerances        |
//! | 5    | `indeterminate`   | a finiteness verdict could not be decided      |

mod config;
mod csv_out;

use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

pub use config::{
    ExponentSpec, RunConfig, ScanSpec, ShapeSpec, SpaceSpec, Task, TestFunctionSpec, ToleranceSpec, WeightSpec,
    WeightsSpec,
};
pub use csv_out::{emit_csv, format_g9, write_csv};

use crate::admissibility::{check_space, region_scan, AdmissibilityError, AdmissibilityVerdict, ScanTable};
use crate::exponents::ConstantBracket;
use crate::functionals::{
    a2_verdict, check_prop1, check_prop2, sandwich_report, FunctionalError, HardyProblem, HardyReport, Prop1Report,
    Prop2Report, RatioReport,
};
use crate::quadrature::FinitenessVerdict;

pub const SCHEMA_VERSION: &str = "1.0.0";

/// The published JSON schema of [`Report`].
pub const REPORT_SCHEMA: &str = include_str!("../../schema/report.schema.json");

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("harness: config: {0}")]
    Config(String),
    #[error("harness: cannot read {}: {source}", .path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("harness: cannot write {}: {source}", .path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("harness: cannot write CSV {}: {source}", .path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Read { .. } => 2,
            HarnessError::Write { .. } | HarnessError::Csv { .. } => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Precondition,
    NonConvergence,
    Indeterminate,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Precondition => 3,
            Status::NonConvergence => 4,
            Status::Indeterminate => 5,
        }
    }

    fn of(v: &FinitenessVerdict) -> Status {
        match v {
            FinitenessVerdict::Finite(r) if !r.converged => Status::NonConvergence,
            FinitenessVerdict::Indeterminate { .. } => Status::Indeterminate,
            _ => Status::Ok,
        }
    }

    fn worst<'a>(verdicts: impl IntoIterator<Item = &'a FinitenessVerdict>) -> Status {
        verdicts.into_iter().map(Status::of).max().unwrap_or(Status::Ok)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Result {
    pub a2: FinitenessVerdict,
    pub a1: FinitenessVerdict,
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioResult {
    pub test_function: &'static str,
    #[serde(flatten)]
    pub ratio: RatioReport,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum TaskResult {
    Verdict {
        verdict: FinitenessVerdict,
        constants: ConstantBracket,
    },
    Lemma1(Lemma1Result),
    Sandwich(HardyReport),
    Admissible(AdmissibilityVerdict),
    Scan(ScanTable),
    Prop1(Prop1Report),
    Prop2(Prop2Report),
    Ratio(RatioResult),
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub task: Task,
    pub status: Status,
    pub exit_code: i32,
    pub error: Option<String>,
    pub config: RunConfig,
    pub result: Option<TaskResult>,
    pub wall_time_s: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are always serializable")
    }

    pub fn write(&self, path: &Path) -> Result<(), HarnessError> {
        std::fs::write(path, self.to_json() + "\n").map_err(|source| HarnessError::Write {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn scan_table(&self) -> Option<&ScanTable> {
        match &self.result {
            Some(TaskResult::Scan(t)) => Some(t),
            _ => None,
        }
    }
}

/// Wall clock; reads zero where the platform has none (bare wasm32).
#[cfg(not(target_arch = "wasm32"))]
struct Clock(std::time::Instant);

#[cfg(not(target_arch = "wasm32"))]
impl Clock {
    fn start() -> Self {
        Clock(std::time::Instant::now())
    }

    fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

#[cfg(target_arch = "wasm32")]
struct Clock;

#[cfg(target_arch = "wasm32")]
impl Clock {
    fn start() -> Self {
        Clock
    }

    fn seconds(&self) -> f64 {
        0.0
    }
}

/// Outcome of one task before timing and echoing are attached.
struct Outcome {
    status: Status,
    error: Option<String>,
    result: Option<TaskResult>,
}

impl Outcome {
    fn done(status: Status, result: TaskResult) -> Self {
        Outcome {
            status,
            error: None,
            result: Some(result),
        }
    }
}

/// Sorts a functional error into config trouble or a scientific outcome.
fn functional_outcome(e: FunctionalError) -> Result<Outcome, HarnessError> {
    let status = match &e {
        FunctionalError::InvalidInput(msg) => return Err(HarnessError::Config(msg.clone())),
        FunctionalError::Quadrature(_) => Status::NonConvergence,
        other => match other.verdict() {
            Some(v) if Status::of(v) == Status::Indeterminate => Status::Indeterminate,
            _ => Status::Precondition,
        },
    };
    Ok(Outcome {
        status,
        error: Some(e.to_string()),
        result: None,
    })
}

fn admissibility_error(e: AdmissibilityError) -> Result<Outcome, HarnessError> {
    match e {
        AdmissibilityError::Numeric(f) => functional_outcome(f),
        other => Err(HarnessError::Config(other.to_string())),
    }
}

/// Runs `task`, or the task named in the config when `task` is `None`.
pub fn run(config: &RunConfig, task: Option<Task>) -> Result<Report, HarnessError> {
    let task = task
        .or(config.task)
        .ok_or_else(|| HarnessError::Config("no task given on the command line or in the config".into()))?;
    let clock = Clock::start();
    let outcome = match execute(config, task) {
        Ok(o) => o,
        Err(HarnessError::Config(msg)) => return Err(HarnessError::Config(format!("{}: {msg}", task.name()))),
        Err(e) => return Err(e),
    };
    let mut echoed = config.clone();
    echoed.task = Some(task);
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        task,
        status: outcome.status,
        exit_code: outcome.status.exit_code(),
        error: outcome.error,
        config: echoed,
        result: outcome.result,
        wall_time_s: clock.seconds(),
    })
}

fn problem(config: &RunConfig) -> Result<HardyProblem, HarnessError> {
    Ok(
        HardyProblem::new(config.space()?, config.u()?, config.v()?, config.exponents()?)
            .with_tolerances(config.tolerances.quadrature()),
    )
}

fn execute(config: &RunConfig, task: Task) -> Result<Outcome, HarnessError> {
    match task {
        Task::A2 | Task::A1 => {
            let problem = problem(config)?;
            let constants = problem.exponents.constants();
            let verdict = match task {
                Task::A2 => a2_verdict(&problem),
                _ => match problem.analyse() {
                    Ok(a) => a.a1(),
                    Err(FunctionalError::DivergentU(v)) | Err(FunctionalError::DivergentV(v)) => Ok(v),
                    Err(e) => Err(e),
                },
            };
            match verdict {
                Ok(verdict) => Ok(Outcome::done(
                    Status::of(&verdict),
                    TaskResult::Verdict { verdict, constants },
                )),
                Err(e) => functional_outcome(e),
            }
        }
        Task::Lemma1 => {
            let analysis = match problem(config)?.analyse() {
                Ok(a) => a,
                Err(e) => return functional_outcome(e),
            };
            let (a2, a1) = match (analysis.a2(), analysis.a1()) {
                (Ok(a2), Ok(a1)) => (a2, a1),
                (Err(e), _) | (_, Err(e)) => return functional_outcome(e),
            };
            let status = Status::worst([&a2, &a1]);
            let (status, residual, error) = match analysis.lemma1_residual() {
                Ok(r) => (status, Some(r), None),
                Err(e) => (status.max(Status::Precondition), None, Some(e.to_string())),
            };
            Ok(Outcome {
                status,
                error,
                result: Some(TaskResult::Lemma1(Lemma1Result { a2, a1, residual })),
            })
        }
        Task::Sandwich => {
            let tol = config.tolerances.sandwich_tol;
            match sandwich_report(&problem(config)?, tol) {
                Ok(report) => {
                    let mut status = Status::worst([&report.a2, &report.a1]);
                    let mut error = None;
                    if report.sandwich_ok.is_none() && status == Status::Ok {
                        status = Status::Precondition;
                        error = Some(format!(
                            "functionals: sandwich needs a finite A2 ({})",
                            report.a2.label()
                        ));
                    }
                    Ok(Outcome {
                        status,
                        error,
                        result: Some(TaskResult::Sandwich(report)),
                    })
                }
                Err(e) => functional_outcome(e),
            }
        }
        Task::Admissible => {
            let verdict = check_space(config.params()?, &config.space()?, &config.exponents()?);
            match verdict {
                Ok(v) => Ok(Outcome::done(Status::Ok, TaskResult::Admissible(v))),
                Err(e) => admissibility_error(e),
            }
        }
        Task::Scan => {
            let scan = config
                .scan
                .as_ref()
                .ok_or_else(|| HarnessError::Config("scan: task needs a [scan] section".into()))?;
            let base = match config.params {
                Some(p) => p,
                None => config.params().unwrap_or_default(),
            };
            match region_scan(&config.space()?, base, &scan.sweeps, &config.exponents()?) {
                Ok(table) => Ok(Outcome::done(Status::Ok, TaskResult::Scan(table))),
                Err(e) => admissibility_error(e),
            }
        }
        Task::Prop1 => {
            let f = config
                .test_function()?
                .build()?
                .ok_or_else(|| HarnessError::Config("test_function: prop1 needs a closed-form F".into()))?;
            let report = check_prop1(
                &f,
                &config.u()?,
                &config.b()?,
                &config.exponents()?,
                &config.space()?,
                config.tolerances.inequality_tol,
            );
            match report {
                Ok(r) => {
                    let status = Status::worst([&r.lhs, &r.mixed, &r.energy]);
                    Ok(Outcome::done(status, TaskResult::Prop1(r)))
                }
                Err(e) => functional_outcome(e),
            }
        }
        Task::Prop2 => {
            let f = config
                .test_function()?
                .build()?
                .ok_or_else(|| HarnessError::Config("test_function: prop2 needs a closed-form f".into()))?;
            let report = check_prop2(
                &f,
                &config.w()?,
                config.exponents.p,
                &config.space()?,
                config.tolerances.inequality_tol,
            );
            match report {
                Ok(r) => {
                    let status = Status::worst([&r.lhs, &r.rhs]);
                    Ok(Outcome::done(status, TaskResult::Prop2(r)))
                }
                Err(e) => functional_outcome(e),
            }
        }
        Task::Ratio => {
            let spec = config.test_function()?;
            let closed = spec.build()?;
            let analysis = match problem(config)?.analyse() {
                Ok(a) => a,
                Err(e) => return functional_outcome(e),
            };
            let f = match closed {
                Some(f) => f,
                None => analysis.near_extremal().scaled(spec.scale),
            };
            match analysis.hardy_ratio(&f) {
                Ok(ratio) => {
                    let status = if ratio.converged {
                        Status::Ok
                    } else {
                        Status::NonConvergence
                    };
                    Ok(Outcome::done(
                        status,
                        TaskResult::Ratio(RatioResult {
                            test_function: f.name(),
                            ratio,
                        }),
                    ))
                }
                Err(e) => functional_outcome(e),
            }
        }
    }
}
