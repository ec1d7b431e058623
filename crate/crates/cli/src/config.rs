use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use srbb_qsp::variational::{
    AdamConfig, LossKind, NelderMeadConfig, OptimizerConfig, StageConfig, TwoStageConfig,
};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Optimizer {
    Adam,
    #[serde(alias = "nelder_mead")]
    NelderMead,
}

impl Optimizer {
    pub fn default_loss(self) -> Loss {
        match self {
            Optimizer::Adam => Loss::Fidelity,
            Optimizer::NelderMead => Loss::Frobenius,
        }
    }
}

impl fmt::Display for Optimizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Optimizer::Adam => "adam",
            Optimizer::NelderMead => "nelder-mead",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Loss {
    Frobenius,
    #[serde(alias = "trace_distance", alias = "trace-distance")]
    Trace,
    Fidelity,
}

impl From<Loss> for LossKind {
    fn from(l: Loss) -> Self {
        match l {
            Loss::Frobenius => LossKind::Frobenius,
            Loss::Trace => LossKind::TraceDistance,
            Loss::Fidelity => LossKind::Fidelity,
        }
    }
}

impl fmt::Display for Loss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&LossKind::from(*self), f)
    }
}

/// Adam+fidelity, Adam+trace and Nelder–Mead+Frobenius.
pub fn is_standard_pairing(optimizer: Optimizer, loss: Loss) -> bool {
    matches!(
        (optimizer, loss),
        (Optimizer::Adam, Loss::Fidelity | Loss::Trace) | (Optimizer::NelderMead, Loss::Frobenius)
    )
}

/// Largest accepted final trace distance for a trained state.
pub fn default_threshold(n: usize, optimizer: Optimizer, loss: Loss) -> f64 {
    match (optimizer, loss) {
        (Optimizer::NelderMead, _) => {
            if n <= 4 {
                1e-10
            } else {
                1e-6
            }
        }
        (Optimizer::Adam, Loss::Trace) => 1e-2,
        (Optimizer::Adam, _) => match n {
            0..=4 => 1e-6,
            5 => 1e-5,
            _ => 1e-2,
        },
    }
}

/// Optional Adam settings; unset fields keep the library defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdamSettings {
    pub learning_rate: Option<f64>,
    pub epochs: Option<usize>,
    pub batch_size: Option<usize>,
    pub tolerance: Option<f64>,
}

impl AdamSettings {
    fn apply(&self) -> AdamConfig {
        let d = AdamConfig::default();
        AdamConfig {
            learning_rate: self.learning_rate.unwrap_or(d.learning_rate),
            epochs: self.epochs.unwrap_or(d.epochs),
            batch_size: self.batch_size.unwrap_or(d.batch_size),
            tolerance: self.tolerance.unwrap_or(d.tolerance),
            ..d
        }
    }
}

/// Optional Nelder–Mead settings; unset fields keep the per-`n` defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NelderMeadSettings {
    pub target_error: Option<f64>,
    pub max_evals: Option<usize>,
    pub initial_step: Option<f64>,
    pub max_restarts: Option<usize>,
    pub fresh_starts: Option<usize>,
}

impl NelderMeadSettings {
    fn apply(&self, n: usize) -> NelderMeadConfig {
        let d = NelderMeadConfig::for_qubits(n);
        NelderMeadConfig {
            target_error: self.target_error.unwrap_or(d.target_error),
            max_evals: self.max_evals.unwrap_or(d.max_evals),
            initial_step: self.initial_step.unwrap_or(d.initial_step),
            max_restarts: self.max_restarts.unwrap_or(d.max_restarts),
            fresh_starts: self.fresh_starts.unwrap_or(d.fresh_starts),
            ..d
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSettings {
    pub optimizer: Optimizer,
    /// Defaults to the optimizer's usual loss.
    pub loss: Option<Loss>,
    pub allow_any_pairing: bool,
    pub dataset_size: usize,
    pub warm_start: bool,
    pub init_scale: f64,
    pub global_phase_tail: bool,
    /// Overrides [`default_threshold`].
    pub threshold: Option<f64>,
    pub adam: AdamSettings,
    pub nelder_mead: NelderMeadSettings,
}

impl Default for TrainSettings {
    fn default() -> Self {
        Self {
            optimizer: Optimizer::NelderMead,
            loss: None,
            allow_any_pairing: false,
            dataset_size: 1000,
            warm_start: false,
            init_scale: 0.1,
            global_phase_tail: false,
            threshold: None,
            adam: AdamSettings::default(),
            nelder_mead: NelderMeadSettings::default(),
        }
    }
}

impl TrainSettings {
    pub fn loss(&self) -> Loss {
        self.loss.unwrap_or_else(|| self.optimizer.default_loss())
    }

    pub fn check_pairing(&self) -> CliResult<()> {
        let loss = self.loss();
        if !self.allow_any_pairing && !is_standard_pairing(self.optimizer, loss) {
            return Err(CliError::Validation(format!(
                "{} with {loss} loss is not a standard pairing (use --allow-any-pairing)",
                self.optimizer
            )));
        }
        Ok(())
    }

    pub fn threshold(&self, n: usize) -> f64 {
        self.threshold.unwrap_or_else(|| default_threshold(n, self.optimizer, self.loss()))
    }

    /// Library configuration for an `n`-qubit target.
    pub fn two_stage(&self, n: usize, seed: u64) -> CliResult<TwoStageConfig> {
        self.check_pairing()?;
        let optimizer = match self.optimizer {
            Optimizer::Adam => OptimizerConfig::Adam(self.adam.apply()),
            Optimizer::NelderMead => OptimizerConfig::NelderMead(self.nelder_mead.apply(n)),
        };
        let stage = StageConfig { loss: self.loss().into(), optimizer };
        Ok(TwoStageConfig {
            modulus: stage.clone(),
            phase: stage,
            seed,
            dataset_size: self.dataset_size,
            warm_start: self.warm_start,
            init_scale: self.init_scale,
            global_phase_tail: self.global_phase_tail,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridEntry {
    pub optimizer: Optimizer,
    pub loss: Loss,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchSettings {
    pub n: Vec<usize>,
    pub trials: usize,
    pub grid: Vec<GridEntry>,
}

impl Default for BenchSettings {
    fn default() -> Self {
        Self {
            n: vec![2, 3, 4],
            trials: 5,
            grid: vec![
                GridEntry { optimizer: Optimizer::NelderMead, loss: Loss::Frobenius },
                GridEntry { optimizer: Optimizer::Adam, loss: Loss::Fidelity },
                GridEntry { optimizer: Optimizer::Adam, loss: Loss::Trace },
            ],
        }
    }
}

/// Top-level TOML configuration. Command-line flags override its fields.
///
/// ```toml
/// seed = 7
/// out = "runs"
///
/// [train]
/// optimizer = "adam"
/// loss = "trace"
///
/// [train.adam]
/// epochs = 20
///
/// [bench]
/// n = [2, 3]
/// trials = 3
/// grid = [{ optimizer = "nelder-mead", loss = "frobenius" }]
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    pub seed: u64,
    pub out: PathBuf,
    pub train: TrainSettings,
    pub bench: BenchSettings,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self { seed: 0, out: PathBuf::from("runs"), train: TrainSettings::default(), bench: BenchSettings::default() }
    }
}

impl CliConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }
}

/// Reads a JSON state specification.
pub fn load_spec(path: &Path) -> CliResult<srbb_qsp::statelib::StateSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}
