//! Command-line front end for `srbb-qsp`: configuration, run records and
//! the benchmark harness.

pub mod bench;
pub mod commands;
pub mod config;
pub mod error;
pub mod record;

pub use bench::{BenchRow, BenchTable};
pub use config::CliConfig;
pub use error::{CliError, CliResult};
pub use record::{Metrics, ParamsFile, RunRecord};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "SRBB_QSP_THREADS";

/// Builds the global thread pool from [`THREADS_ENV`], if set.
pub fn init_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let k: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_ENV} must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))
}

/// Parses `5`, `2..8`, `2..=8`, `2-8` or `2,3,5`.
pub fn parse_n_range(s: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Validation(format!("bad qubit range `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let range = |a: usize, b: usize| if a <= b { Ok((a..=b).collect()) } else { Err(bad()) };
    if let Some((a, b)) = s.split_once("..=") {
        return range(num(a)?, num(b)?);
    }
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        return if b > a { range(a, b - 1) } else { Err(bad()) };
    }
    if let Some((a, b)) = s.split_once('-') {
        return range(num(a)?, num(b)?);
    }
    s.split(',').map(num).collect()
}
