mod args;
mod input;
mod solve;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;
use serde_json::Value;
use twr_core::generators;
use twr_core::graph::write_graph;
use twr_core::par;
use twr_core::stats::Stats;

use args::{Cli, Command, Family, GenArgs, Problem};
use solve::OracleUse;

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Precondition(String),
}

impl From<twr_core::error::Error> for CliError {
    fn from(e: twr_core::error::Error) -> Self {
        match e {
            twr_core::error::Error::Parse { .. } => CliError::Parse(e.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Precondition(m) => m,
        }
    }
}

#[derive(Serialize)]
struct StatsOut {
    reduced_vertices: usize,
    decomposition_width: usize,
    dp_states: usize,
    wall_ms: u64,
}

#[derive(Serialize)]
struct OracleOut {
    agrees: bool,
    #[serde(flatten)]
    detail: Value,
}

#[derive(Serialize)]
struct Report {
    status: &'static str,
    solution: Vec<usize>,
    size: Option<usize>,
    certificate: Value,
    stats: StatsOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleOut>,
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Solve,
    Verify,
}

fn print_json(v: &impl Serialize) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

fn error_json(e: &CliError) -> ExitCode {
    print_json(&serde_json::json!({"status": "error", "error": e.message()}));
    ExitCode::from(e.code())
}

fn run_problem(problem: &Problem, mode: Mode) -> ExitCode {
    let start = Instant::now();
    let stats = Stats::new();
    let use_oracle = match mode {
        Mode::Verify => OracleUse::Required,
        Mode::Solve if problem.common().oracle => OracleUse::IfSmall,
        Mode::Solve => OracleUse::Off,
    };
    let (outcome, mut check) = match solve::run(problem, &stats, use_oracle) {
        Ok(r) => r,
        Err(e) => return error_json(&e),
    };
    if use_oracle != OracleUse::Off && check.is_none() {
        check = Some(solve::Check {
            agrees: true,
            detail: serde_json::json!({"skipped": "instance too large for the oracle"}),
        });
    }
    let snap = stats.snapshot();
    let mismatch = check.as_ref().is_some_and(|c| !c.agrees);
    let report = Report {
        status: if outcome.feasible {
            "feasible"
        } else {
            "infeasible"
        },
        solution: outcome.solution.iter().map(|v| v + 1).collect(),
        size: outcome.size,
        certificate: outcome.certificate,
        stats: StatsOut {
            reduced_vertices: snap.reduced_vertices,
            decomposition_width: snap.decomposition_width,
            dp_states: snap.dp_states,
            wall_ms: start.elapsed().as_millis() as u64,
        },
        oracle: check.map(|c| OracleOut {
            agrees: c.agrees,
            detail: c.detail,
        }),
    };
    print_json(&report);
    if mismatch {
        ExitCode::from(4)
    } else {
        ExitCode::SUCCESS
    }
}

fn generate(a: &GenArgs) -> ExitCode {
    let mut rng = generators::rng(a.seed);
    let g = match a.family {
        Family::Gnp => {
            if !(0.0..=1.0).contains(&a.p) {
                return error_json(&CliError::Precondition(format!(
                    "probability {} outside [0, 1]",
                    a.p
                )));
            }
            generators::gnp(a.n, a.p, &mut rng)
        }
        Family::Gnm => generators::gnm(a.n, a.m, &mut rng),
        Family::Path => generators::path(a.n),
        Family::Cycle if a.n < 3 => {
            return error_json(&CliError::Precondition("a cycle needs 3 vertices".into()))
        }
        Family::Cycle => generators::cycle(a.n),
        Family::Complete => generators::complete(a.n),
        Family::Star => generators::star(a.n),
        Family::Hypercube if a.n > 20 => {
            return error_json(&CliError::Precondition("dimension above 20".into()))
        }
        Family::Hypercube => generators::hypercube(a.n),
        Family::Tree => generators::random_tree(a.n, &mut rng),
        Family::Paths => generators::parallel_paths(a.n, a.m.max(1)),
    };
    print!("{}", write_graph(&g));
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    par::with_threads(cli.threads, || match &cli.command {
        Command::Solve(p) => run_problem(p, Mode::Solve),
        Command::Verify { problem } => run_problem(problem, Mode::Verify),
        Command::Gen(a) => generate(a),
    })
}
