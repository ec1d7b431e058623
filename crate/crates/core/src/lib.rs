//! Quantum state preparation built only from the diagonal SRBB sub-algebra.
//!
//! A target state is prepared by a ladder of uniformly controlled RY
//! rotations, each rewritten as an S/H-dressed diagonal Z-factor, followed by
//! a final Z-factor for the phases. Parameters are obtained either in closed
//! form ([`exact`]) or by two-stage variational training ([`variational`]).
//!
//! All numerics are generic over the [`Real`] scalar (`f32` or `f64`);
//! `*64` and `*32` aliases below fix the common choices.

pub mod circuit;
pub mod error;
pub mod exact;
pub mod ladder;
pub mod linalg;
pub mod qcore;
pub mod real;
pub mod statelib;
pub mod variational;
pub mod zfactor;

pub use error::{QspError, Result};
pub use real::{Cplx, Real};

pub type C64 = Cplx<f64>;
pub type C32 = Cplx<f32>;

pub type StateVector64 = qcore::StateVector<f64>;
pub type StateVector32 = qcore::StateVector<f32>;
pub type UnitaryMatrix64 = qcore::UnitaryMatrix<f64>;
pub type UnitaryMatrix32 = qcore::UnitaryMatrix<f32>;
pub type ProbabilityDistribution64 = qcore::ProbabilityDistribution<f64>;
pub type Circuit64 = circuit::Circuit<f64>;
pub type Circuit32 = circuit::Circuit<f32>;
pub type ZFactorTemplate64 = zfactor::ZFactorTemplate<f64>;
pub type PhaseMap64 = zfactor::PhaseMap<f64>;
pub type QspTemplate64 = ladder::QspTemplate<f64>;
pub type AmplitudeBst64 = exact::AmplitudeBst<f64>;
pub type NaturalAngles64 = exact::NaturalAngles<f64>;
pub type ExactPreparation64 = exact::ExactPreparation<f64>;
pub type TwoStageOutcome64 = variational::TwoStageOutcome<f64>;
