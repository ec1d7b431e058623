use serde::{Deserialize, Serialize};

use crate::error::{QspError, Result};
use crate::qcore::{inner_product, StateVector, UnitaryMatrix};
use crate::real::{compensated_sum, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    /// `‖U_target − U_circuit‖_F` on full operators.
    Frobenius,
    /// Mean pure-state trace distance over a dataset of input states.
    TraceDistance,
    /// Mean infidelity `1 − F` over a dataset of input states.
    Fidelity,
}

impl LossKind {
    pub fn uses_dataset(self) -> bool {
        !matches!(self, LossKind::Frobenius)
    }
}

impl std::str::FromStr for LossKind {
    type Err = QspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frobenius" => Ok(LossKind::Frobenius),
            "trace" | "trace_distance" | "trace-distance" => Ok(LossKind::TraceDistance),
            "fidelity" => Ok(LossKind::Fidelity),
            other => Err(QspError::Config(format!("unknown loss `{other}`"))),
        }
    }
}

impl std::fmt::Display for LossKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LossKind::Frobenius => "frobenius",
            LossKind::TraceDistance => "trace",
            LossKind::Fidelity => "fidelity",
        })
    }
}

pub fn frobenius_loss<T: Real>(ideal: &UnitaryMatrix<T>, vqc: &UnitaryMatrix<T>) -> Result<T> {
    if ideal.dim() != vqc.dim() {
        return Err(QspError::DimensionMismatch { expected: ideal.dim(), got: vqc.dim() });
    }
    Ok(compensated_sum(
        ideal.entries().iter().zip(vqc.entries()).map(|(a, b)| (*a - *b).norm_sqr()),
    )
    .sqrt())
}

/// Pure-state fidelity `|⟨a|b⟩|²`.
pub fn fidelity<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<T> {
    Ok(inner_product(a, b)?.norm_sqr().min(T::one()))
}

/// Pure-state trace distance `√(1 − F)`: 0 for equal states, 1 for
/// orthogonal ones (the `½‖ρ − σ‖₁` normalization).
///
/// Evaluated as the norm of the part of `b` orthogonal to `a`, which keeps
/// full relative precision for nearly equal states where `1 − F` cancels.
pub fn trace_distance<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<T> {
    let overlap = inner_product(a, b)?;
    let resid = compensated_sum(
        a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (*y - *x * overlap).norm_sqr()),
    );
    Ok(resid.sqrt().min(T::one()))
}

pub(crate) fn trace_distance_from_fidelity<T: Real>(f: T) -> T {
    (T::one() - f).max(T::zero()).sqrt()
}
