//! Losses, optimizers, and two-stage training of the modulus and phase
//! parts of the network.

mod adam;
mod loss;
mod nelder_mead;
mod su;
mod train;

pub use adam::{Adam, AdamConfig};
pub use loss::{fidelity, frobenius_loss, trace_distance, LossKind};
pub use nelder_mead::{minimize, NelderMeadConfig, NelderMeadResult};
pub use su::{select_su_representative, su_candidates};
pub use train::{
    random_init, train_stage, two_stage_train, OptimizerConfig, StageConfig, StageObjective, TrainReport,
    TwoStageConfig, TwoStageFailure, TwoStageOutcome,
};
