use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;
use srbb_qsp::circuit::{from_qasm, to_qasm};
use srbb_qsp::exact::exact_prepare;
use srbb_qsp::ladder::{predicted_counts, predicted_z_depth, CountPrediction, QspTemplate};
use srbb_qsp::statelib::{hellinger, realize, StateSpec};
use srbb_qsp::variational::{trace_distance, two_stage_train, TrainReport};
use srbb_qsp::zfactor::build_z_factor;
use srbb_qsp::{Circuit64, StateVector64};

use crate::config::TrainSettings;
use crate::error::{CliError, CliResult};
use crate::record::{Artifacts, Metrics, ParamsFile, RunDir, RunRecord};

pub const ANALYZE_MAX_QUBITS: usize = 12;
/// Accepted trace distance for closed-form preparation.
pub const EXACT_THRESHOLD: f64 = 1e-9;
/// Accepted difference between a re-simulated artifact and its record.
pub const REPLAY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeRow {
    pub n: usize,
    pub predicted: CountPrediction,
    pub measured: CountPrediction,
    pub z_depth_predicted: usize,
    pub z_depth_measured: usize,
    pub pass: bool,
}

pub fn analyze(ns: &[usize]) -> CliResult<Vec<AnalyzeRow>> {
    ns.iter()
        .map(|&n| {
            if !(2..=ANALYZE_MAX_QUBITS).contains(&n) {
                return Err(CliError::Validation(format!("analyze needs 2 <= n <= {ANALYZE_MAX_QUBITS}, got {n}")));
            }
            let predicted = predicted_counts(n)?;
            let stats = QspTemplate::<f64>::new(n)?.combined()?.stats();
            let measured = CountPrediction { depth: stats.depth, n_rot: stats.n_rot, n_cnot: stats.n_cnot };
            let z_depth_measured = build_z_factor::<f64>(n)?.circuit().stats().depth;
            let z_depth_predicted = predicted_z_depth(n);
            let pass = predicted == measured && z_depth_predicted == z_depth_measured;
            Ok(AnalyzeRow { n, predicted, measured, z_depth_predicted, z_depth_measured, pass })
        })
        .collect()
}

pub fn format_analyze(rows: &[AnalyzeRow]) -> String {
    let mut out = format!(
        "{:>3}  {:>20}  {:>20}  {:>13}  {}\n",
        "n", "predicted d/rot/cx", "measured d/rot/cx", "z-depth p/m", "status"
    );
    for r in rows {
        let triple = |c: &CountPrediction| format!("{}/{}/{}", c.depth, c.n_rot, c.n_cnot);
        out += &format!(
            "{:>3}  {:>20}  {:>20}  {:>13}  {}\n",
            r.n,
            triple(&r.predicted),
            triple(&r.measured),
            format!("{}/{}", r.z_depth_predicted, r.z_depth_measured),
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    out
}

/// Summary of one training stage, without the loss curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageSummary {
    pub optimizer: String,
    pub loss: String,
    pub final_loss: f64,
    pub final_error: f64,
    pub evals: usize,
    pub converged: bool,
}

impl From<&TrainReport> for StageSummary {
    fn from(r: &TrainReport) -> Self {
        Self {
            optimizer: r.optimizer.clone(),
            loss: r.loss.to_string(),
            final_loss: r.final_loss,
            final_error: r.final_error,
            evals: r.evals,
            converged: r.converged,
        }
    }
}

/// A finished preparation that has not been written anywhere yet.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub record: RunRecord,
    pub circuit: Circuit64,
    pub params: ParamsFile,
    pub stages: Vec<StageSummary>,
}

impl Prepared {
    pub fn metrics(&self) -> &Metrics {
        self.record.metrics.as_ref().expect("preparations carry metrics")
    }

    /// Writes QASM, parameters and the record into a fresh run directory.
    pub fn persist(mut self, out_root: &Path) -> CliResult<(RunRecord, PathBuf)> {
        let dir = RunDir::create(out_root, &self.record.command, self.record.seed)?;
        self.record.created = dir.created.clone();
        let qasm = to_qasm(&self.circuit)?;
        self.record.artifacts = Artifacts {
            qasm: Some(dir.write("circuit.qasm", &qasm)?),
            params: Some(dir.write_json("params.json", &self.params)?),
            ..Artifacts::default()
        };
        if !self.stages.is_empty() {
            dir.write_json("stages.json", &self.stages)?;
        }
        let path = dir.write_record(&self.record)?;
        Ok((self.record, path))
    }
}

fn record(command: &str, seed: u64, config: serde_json::Value, metrics: Metrics, wall_time: f64) -> RunRecord {
    RunRecord {
        command: command.into(),
        created: String::new(),
        seed,
        config,
        metrics: Some(metrics),
        wall_time,
        artifacts: Artifacts::default(),
    }
}

fn spec_seed(spec: &StateSpec) -> u64 {
    match spec {
        StateSpec::HaarRandom { seed, .. } => *seed,
        _ => 0,
    }
}

pub fn exact_prepare_run(spec: &StateSpec) -> CliResult<Prepared> {
    let start = Instant::now();
    let target: StateVector64 = realize(spec)?;
    let prep = exact_prepare(target.amplitudes())?;
    let output = prep.circuit.run(&StateVector64::zero(target.n_qubits()))?;
    let metrics = Metrics::new(&target, &output, prep.circuit.stats(), EXACT_THRESHOLD)?;
    let params = ParamsFile {
        n: target.n_qubits(),
        theta_modulus: prep.theta_modulus,
        theta_phase: prep.theta_phase,
        global_phase: prep.global_phase,
        global_phase_tail: true,
    };
    let config = json!({ "spec": spec });
    let wall = start.elapsed().as_secs_f64();
    Ok(Prepared {
        record: record("exact-prepare", spec_seed(spec), config, metrics, wall),
        circuit: prep.circuit,
        params,
        stages: Vec::new(),
    })
}

/// Snapshot stored in a training record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainSnapshot {
    pub spec: StateSpec,
    pub settings: TrainSettings,
    pub two_stage: srbb_qsp::variational::TwoStageConfig,
}

pub fn train_run(spec: &StateSpec, settings: &TrainSettings, seed: u64) -> CliResult<Prepared> {
    let start = Instant::now();
    let target: StateVector64 = realize(spec)?;
    let n = target.n_qubits();
    let cfg = settings.two_stage(n, seed)?;
    let outcome = two_stage_train(target.amplitudes(), &cfg)?;
    let metrics = Metrics::new(&target, &outcome.output, outcome.circuit.stats(), settings.threshold(n))?;
    let params = ParamsFile {
        n,
        theta_modulus: outcome.theta_modulus,
        theta_phase: outcome.theta_phase,
        global_phase: outcome.global_phase,
        global_phase_tail: cfg.global_phase_tail,
    };
    let snapshot = TrainSnapshot { spec: spec.clone(), settings: settings.clone(), two_stage: cfg };
    let config = serde_json::to_value(&snapshot).map_err(|e| CliError::Io(e.to_string()))?;
    let wall = start.elapsed().as_secs_f64();
    Ok(Prepared {
        record: record("train", seed, config, metrics, wall),
        circuit: outcome.circuit,
        params,
        stages: outcome.reports.iter().map(StageSummary::from).collect(),
    })
}

/// Fails with a convergence error when the record's error is above its
/// threshold.
pub fn check_converged(record: &RunRecord) -> CliResult<()> {
    match &record.metrics {
        Some(m) if !m.converged => Err(CliError::Convergence { error: m.final_error, threshold: m.threshold }),
        _ => Ok(()),
    }
}

/// Repeats a preparation from the seed and configuration in its record.
pub fn replay(record: &RunRecord) -> CliResult<Prepared> {
    let bad = |e: serde_json::Error| CliError::Validation(format!("record config: {e}"));
    match record.command.as_str() {
        "exact-prepare" => {
            let spec: StateSpec = serde_json::from_value(record.config["spec"].clone()).map_err(bad)?;
            exact_prepare_run(&spec)
        }
        "train" => {
            let snap: TrainSnapshot = serde_json::from_value(record.config.clone()).map_err(bad)?;
            train_run(&snap.spec, &snap.settings, record.seed)
        }
        other => Err(CliError::Validation(format!("cannot replay a `{other}` record"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub n: usize,
    pub probabilities: Vec<f64>,
    pub output_state: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hellinger: Option<f64>,
    /// Largest amplitude difference to the state stored in a record.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record_difference: Option<f64>,
}

pub fn simulate_qasm(text: &str, target: Option<&StateVector64>) -> CliResult<SimulationReport> {
    let circuit: Circuit64 = from_qasm(text)?;
    let n = circuit.n_qubits();
    let out = circuit.run(&StateVector64::zero(n))?;
    let (trace_distance, hellinger) = match target {
        Some(t) => (
            Some(trace_distance(t, &out)?),
            Some(hellinger(&t.probabilities(), &out.probabilities())?),
        ),
        None => (None, None),
    };
    Ok(SimulationReport {
        n,
        probabilities: out.probabilities().probs().to_vec(),
        output_state: out.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        trace_distance,
        hellinger,
        record_difference: None,
    })
}

/// Re-simulates the QASM artifact of a saved record against its stored
/// output state.
pub fn simulate_record(record_path: &Path) -> CliResult<SimulationReport> {
    let record = RunRecord::load(record_path)?;
    let metrics = record
        .metrics
        .as_ref()
        .ok_or_else(|| CliError::Validation(format!("{} has no output state", record_path.display())))?;
    let qasm_rel = record
        .artifacts
        .qasm
        .as_ref()
        .ok_or_else(|| CliError::Validation(format!("{} has no QASM artifact", record_path.display())))?;
    let qasm_path = record_path.parent().unwrap_or(Path::new(".")).join(qasm_rel);
    let text = std::fs::read_to_string(&qasm_path).map_err(|e| CliError::io(&qasm_path, e))?;
    let mut report = simulate_qasm(&text, None)?;
    let diff = report
        .output_state
        .iter()
        .zip(&metrics.output_state)
        .map(|(a, b)| (a[0] - b[0]).hypot(a[1] - b[1]))
        .fold(0.0, f64::max);
    let diff = if report.output_state.len() == metrics.output_state.len() { diff } else { f64::INFINITY };
    report.record_difference = Some(diff);
    Ok(report)
}

pub fn format_simulation(r: &SimulationReport) -> String {
    let mut out = String::new();
    for (i, p) in r.probabilities.iter().enumerate() {
        out += &format!("{i:0width$b}  {p:.12}\n", width = r.n);
    }
    if let Some(t) = r.trace_distance {
        out += &format!("trace distance  {t:.3e}\n");
    }
    if let Some(h) = r.hellinger {
        out += &format!("hellinger       {h:.3e}\n");
    }
    if let Some(d) = r.record_difference {
        out += &format!("record diff     {d:.3e}\n");
    }
    out
}

/// QASM of the closed-form circuit for a spec, or of a saved parameter file.
pub fn export_qasm(spec: Option<&StateSpec>, params: Option<&Path>) -> CliResult<String> {
    let circuit = match (spec, params) {
        (Some(spec), None) => exact_prepare_run(spec)?.circuit,
        (None, Some(path)) => ParamsFile::load(path)?.circuit()?,
        _ => return Err(CliError::Validation("export-qasm needs exactly one of --spec or --params".into())),
    };
    Ok(to_qasm(&circuit)?)
}
