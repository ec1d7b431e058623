use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use srbb_qsp::statelib::StateSpec;

use crate::commands::train_run;
use crate::config::{BenchSettings, CliConfig, Loss, Optimizer, TrainSettings};
use crate::error::{CliError, CliResult};
use crate::record::{Artifacts, RunDir, RunRecord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub optimizer: Optimizer,
    pub loss: Loss,
    pub trials: usize,
    /// Mean wall time per trial, seconds.
    pub mean_time: f64,
    pub mean_error: f64,
    pub max_error: f64,
    pub threshold: f64,
    /// Trials whose error is at or below the threshold.
    pub converged: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
}

impl BenchTable {
    pub fn ns(&self) -> Vec<usize> {
        let mut ns: Vec<usize> = self.rows.iter().map(|r| r.n).collect();
        ns.dedup();
        ns
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| CliError::Io(format!("csv: {e}")))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(format!("csv: {e}")))
    }

    pub fn from_csv(text: &str) -> CliResult<Self> {
        let rows = csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<Result<Vec<BenchRow>, _>>()
            .map_err(|e| CliError::Validation(format!("csv: {e}")))?;
        Ok(Self { rows })
    }

    pub fn format(&self) -> String {
        let mut out = format!(
            "{:>3}  {:<12} {:<10} {:>6} {:>11} {:>11} {:>11} {:>6}\n",
            "n", "optimizer", "loss", "trials", "time [s]", "mean err", "max err", "ok"
        );
        for r in &self.rows {
            out += &format!(
                "{:>3}  {:<12} {:<10} {:>6} {:>11.3} {:>11.3e} {:>11.3e} {:>3}/{:<2}\n",
                r.n,
                r.optimizer.to_string(),
                r.loss.to_string(),
                r.trials,
                r.mean_time,
                r.mean_error,
                r.max_error,
                r.converged,
                r.trials
            );
        }
        out
    }
}

/// Seed of trial `t`; used both for the Haar target and for training.
pub fn trial_seed(base: u64, n: usize, t: usize) -> u64 {
    base.wrapping_add(1000 * n as u64).wrapping_add(t as u64)
}

/// Runs every (n, optimizer, loss) cell of the grid over Haar-random
/// targets, with trials in parallel.
pub fn run_bench(settings: &BenchSettings, train: &TrainSettings, seed: u64) -> CliResult<BenchTable> {
    if settings.trials == 0 || settings.n.is_empty() || settings.grid.is_empty() {
        return Err(CliError::Validation("bench needs at least one n, grid entry and trial".into()));
    }
    let mut rows = Vec::new();
    for &n in &settings.n {
        for cell in &settings.grid {
            let cell_settings = TrainSettings {
                optimizer: cell.optimizer,
                loss: Some(cell.loss),
                ..train.clone()
            };
            cell_settings.check_pairing()?;
            let results = (0..settings.trials)
                .into_par_iter()
                .map(|t| {
                    let s = trial_seed(seed, n, t);
                    let start = Instant::now();
                    let prep = train_run(&StateSpec::HaarRandom { n, seed: s }, &cell_settings, s)?;
                    let m = prep.metrics();
                    Ok((m.final_error, m.converged, start.elapsed().as_secs_f64()))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let k = results.len() as f64;
            rows.push(BenchRow {
                n,
                optimizer: cell.optimizer,
                loss: cell.loss,
                trials: results.len(),
                mean_time: results.iter().map(|r| r.2).sum::<f64>() / k,
                mean_error: results.iter().map(|r| r.0).sum::<f64>() / k,
                max_error: results.iter().map(|r| r.0).fold(0.0, f64::max),
                threshold: cell_settings.threshold(n),
                converged: results.iter().filter(|r| r.1).count(),
            });
        }
    }
    Ok(BenchTable { rows })
}

/// Runs the benchmark and writes `bench.csv`, `bench.json` and
/// `record.json` into a fresh run directory.
pub fn bench_command(config: &CliConfig, out_root: &Path) -> CliResult<(BenchTable, PathBuf)> {
    let start = Instant::now();
    let table = run_bench(&config.bench, &config.train, config.seed)?;
    let dir = RunDir::create(out_root, "bench", config.seed)?;
    let artifacts = Artifacts {
        table_csv: Some(dir.write("bench.csv", &table.to_csv()?)?),
        table_json: Some(dir.write_json("bench.json", &table)?),
        ..Artifacts::default()
    };
    let record = RunRecord {
        command: "bench".into(),
        created: dir.created.clone(),
        seed: config.seed,
        config: serde_json::json!({ "bench": config.bench, "train": config.train }),
        metrics: None,
        wall_time: start.elapsed().as_secs_f64(),
        artifacts,
    };
    let path = dir.write_record(&record)?;
    Ok((table, path))
}
