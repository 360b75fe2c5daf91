use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use hardy_core::harness::{emit_csv, run, HarnessError, Report, RunConfig, Task};

/// Numerical checks of two-weight Hardy inequalities on polarizable spaces.
///
/// Exit codes: 0 ok, 1 output error, 2 config error, 3 precondition failed,
/// 4 quadrature did not converge, 5 indeterminate verdict.
#[derive(Parser, Debug)]
#[command(name = "hardy", version)]
struct Cli {
    #[command(subcommand)]
    task: TaskCommand,
}

#[derive(Subcommand, Debug)]
enum TaskCommand {
    /// Classify and evaluate A2
    A2(Common),
    /// Classify and evaluate A1
    A1(Common),
    /// Residual of the identity A2^r = (q/p') A1^r
    Lemma1(Common),
    /// Constant bracket and the near-extremal Hardy ratio
    Sandwich(Common),
    /// Closed-form admissibility of power weights
    Admissible(Common),
    /// Admissibility over a one- or two-parameter grid
    Scan(Common),
    /// Monotone-function inequality with weights u and b
    Prop1(Common),
    /// Single-weight inequality with constant p'
    Prop2(Common),
    /// Hardy ratio of one test function
    Ratio(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// TOML run configuration
    #[arg(long)]
    config: PathBuf,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the scan table as CSV (scan only)
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Worker threads for parallel sections (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Print a one-line summary to stderr
    #[arg(long)]
    verbose: bool,
}

impl TaskCommand {
    fn split(&self) -> (Task, &Common) {
        match self {
            TaskCommand::A2(c) => (Task::A2, c),
            TaskCommand::A1(c) => (Task::A1, c),
            TaskCommand::Lemma1(c) => (Task::Lemma1, c),
            TaskCommand::Sandwich(c) => (Task::Sandwich, c),
            TaskCommand::Admissible(c) => (Task::Admissible, c),
            TaskCommand::Scan(c) => (Task::Scan, c),
            TaskCommand::Prop1(c) => (Task::Prop1, c),
            TaskCommand::Prop2(c) => (Task::Prop2, c),
            TaskCommand::Ratio(c) => (Task::Ratio, c),
        }
    }
}

/// A closed stdout (e.g. piped into `head`) is not an error.
fn print_report(report: &Report) -> Result<(), HarnessError> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{}", report.to_json()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(HarnessError::Write {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn execute(task: Task, args: &Common) -> Result<Report, HarnessError> {
    if args.csv.is_some() && task != Task::Scan {
        return Err(HarnessError::Config(
            "--csv is only meaningful for the scan task".into(),
        ));
    }
    let config = RunConfig::load(&args.config)?;
    let report = run(&config, Some(task))?;
    if let (Some(path), Some(table)) = (&args.csv, report.scan_table()) {
        emit_csv(table, path)?;
    }
    match &args.out {
        Some(path) => report.write(path)?,
        None => print_report(&report)?,
    }
    Ok(report)
}

fn main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let (task, args) = cli.task.split();
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot configure the worker pool")?;
    }
    let code = match execute(task, args) {
        Ok(report) => {
            if args.verbose {
                eprintln!(
                    "hardy {}: status {:?} in {:.3}s",
                    task.name(),
                    report.status,
                    report.wall_time_s
                );
            }
            if let Some(err) = &report.error {
                eprintln!("{err}");
            }
            report.exit_code
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    };
    Ok(ExitCode::from(code as u8))
}
