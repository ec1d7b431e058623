use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use srbb_qsp::circuit::CircuitStats;
use srbb_qsp::{StateVector64, C64};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub n: usize,
    /// Trace distance between the target and the prepared state.
    pub final_error: f64,
    pub hellinger: f64,
    pub threshold: f64,
    pub converged: bool,
    pub depth: usize,
    pub n_cnot: usize,
    pub n_rot: usize,
    /// Gates outside the counted alphabet, such as the phase tail's X gates.
    pub n_other: usize,
    /// Amplitudes `[re, im]` the saved circuit produces from `|0…0⟩`.
    pub output_state: Vec<[f64; 2]>,
}

impl Metrics {
    pub fn new(
        target: &StateVector64,
        output: &StateVector64,
        stats: CircuitStats,
        threshold: f64,
    ) -> CliResult<Self> {
        let final_error = srbb_qsp::variational::trace_distance(target, output)?;
        let hellinger = srbb_qsp::statelib::hellinger(&target.probabilities(), &output.probabilities())?;
        Ok(Self {
            n: target.n_qubits(),
            final_error,
            hellinger,
            threshold,
            converged: final_error <= threshold,
            depth: stats.depth,
            n_cnot: stats.n_cnot,
            n_rot: stats.n_rot,
            n_other: stats.n_other,
            output_state: output.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        })
    }

    pub fn output(&self) -> CliResult<StateVector64> {
        let amps = self.output_state.iter().map(|&[re, im]| C64::new(re, im)).collect();
        Ok(StateVector64::new(amps)?)
    }
}

/// Files written next to `record.json`, relative to the run directory.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Artifacts {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qasm: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_csv: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_json: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub created: String,
    pub seed: u64,
    /// Everything needed to repeat the run; shape depends on `command`.
    pub config: serde_json::Value,
    pub metrics: Option<Metrics>,
    pub wall_time: f64,
    pub artifacts: Artifacts,
}

impl RunRecord {
    pub fn to_json(&self) -> CliResult<String> {
        serde_json::to_string_pretty(self).map_err(|e| CliError::Io(format!("serializing record: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }
}

/// Circuit parameters of a prepared state, enough to rebuild the circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsFile {
    pub n: usize,
    pub theta_modulus: Vec<f64>,
    pub theta_phase: Vec<f64>,
    pub global_phase: f64,
    /// Whether the saved circuit ends with the global-phase tail.
    pub global_phase_tail: bool,
}

impl ParamsFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }

    pub fn circuit(&self) -> CliResult<srbb_qsp::Circuit64> {
        let tail = self.global_phase_tail.then_some(self.global_phase);
        Ok(srbb_qsp::ladder::assemble_full(self.n, &self.theta_modulus, &self.theta_phase, tail)?)
    }
}

/// A fresh timestamped directory `<root>/<command>-<time>-s<seed>`.
pub struct RunDir {
    pub path: PathBuf,
    pub created: String,
}

impl RunDir {
    pub fn create(root: &Path, command: &str, seed: u64) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        let now = chrono::Local::now();
        let stem = format!("{command}-{}-s{seed}", now.format("%Y%m%dT%H%M%S%.3f"));
        for attempt in 0.. {
            let name = if attempt == 0 { stem.clone() } else { format!("{stem}-{attempt}") };
            let path = root.join(name);
            match fs::create_dir(&path) {
                Ok(()) => return Ok(Self { path, created: now.to_rfc3339() }),
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
                Err(e) => return Err(CliError::io(&path, e)),
            }
        }
        unreachable!()
    }

    pub fn write(&self, name: &str, contents: &str) -> CliResult<PathBuf> {
        let path = self.path.join(name);
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        Ok(PathBuf::from(name))
    }

    pub fn write_json<S: Serialize>(&self, name: &str, value: &S) -> CliResult<PathBuf> {
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(format!("serializing {name}: {e}")))?;
        self.write(name, &text)
    }

    pub fn write_record(&self, record: &RunRecord) -> CliResult<PathBuf> {
        self.write("record.json", &record.to_json()?)?;
        Ok(self.path.join("record.json"))
    }
}
