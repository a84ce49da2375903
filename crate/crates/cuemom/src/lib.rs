//! Command-line front end for `cuemom-core`: single evaluations, route
//! comparisons and Monte Carlo sweeps, reported as JSON (canonical) or CSV.
//!
//! Monte Carlo batches run on a rayon pool whose size never changes the
//! numbers: each batch owns a fixed RNG stream and batches are merged in
//! order.

pub mod args;
pub mod commands;
pub mod parallel;
pub mod report;

use args::{Cli, Command};
use commands::Failure;
use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CAPABILITY: i32 = 2;
pub const EXIT_COMPARISON_FAILED: i32 = 3;

/// Runs a parsed command on a pool of `cli.threads` workers.
pub fn run(cli: &Cli) -> Result<Report, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start {} threads: {e}", cli.threads)))?;
    pool.install(|| match &cli.command {
        Command::Exact(a) => commands::exact(a),
        Command::Asympt(a) => commands::asympt(a),
        Command::Mc(a) => commands::mc(a, cli.quiet),
        Command::Zeta(a) => commands::zeta(a),
        Command::Compare(a) => commands::compare(a, cli.quiet),
        Command::Zeros(a) => commands::zeros(a, cli.quiet),
    })
}

/// Exit status for a finished report: comparison failures are distinct.
pub fn exit_code(report: &Report) -> i32 {
    match report.passed {
        Some(false) => EXIT_COMPARISON_FAILED,
        _ => EXIT_OK,
    }
}
