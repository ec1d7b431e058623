use crate::error::{QspError, Result};
use crate::real::{compensated_sum, cre, norm_tolerance, Cplx, Real};

use super::{apply_to_rows, log2_exact, UnitaryMatrix, MAX_QUBITS};

/// Normalized `n`-qubit pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real> {
    n_qubits: usize,
    amps: Vec<Cplx<T>>,
}

impl<T: Real> StateVector<T> {
    /// Builds a state from raw amplitudes, normalizing them.
    pub fn new(amps: Vec<Cplx<T>>) -> Result<Self> {
        let n_qubits = log2_exact(amps.len()).ok_or(QspError::NotPowerOfTwo(amps.len()))?;
        if n_qubits == 0 {
            return Err(QspError::TooFewQubits { min: 1, got: 0 });
        }
        if n_qubits > MAX_QUBITS {
            return Err(QspError::TooManyQubits(n_qubits));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QspError::NonFinite("amplitude".into()));
        }
        let norm = compensated_sum(amps.iter().map(|z| z.norm_sqr())).sqrt();
        if norm == T::zero() {
            return Err(QspError::ZeroVector);
        }
        let amps = amps.into_iter().map(|z| z / norm).collect();
        Ok(Self { n_qubits, amps })
    }

    pub fn from_real(amps: &[T]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| cre(x)).collect())
    }

    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Cplx::default(); 1 << n_qubits];
        amps[index] = cre(T::one());
        Self { n_qubits, amps }
    }

    pub(crate) fn from_raw_unchecked(n_qubits: usize, amps: Vec<Cplx<T>>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        Self { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Cplx<T>] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Cplx<T>> {
        self.amps
    }

    pub fn norm(&self) -> T {
        compensated_sum(self.amps.iter().map(|z| z.norm_sqr())).sqrt()
    }

    /// Returns the state evolved by a 1- or 2-qubit `gate` on `targets`.
    pub fn apply_gate(&self, gate: &UnitaryMatrix<T>, targets: &[usize]) -> Result<Self> {
        let mut amps = self.amps.clone();
        apply_to_rows(&mut amps, 1, self.n_qubits, gate.entries(), targets)?;
        Ok(Self { n_qubits: self.n_qubits, amps })
    }

    /// Returns `U·self` for a full-register operator.
    pub fn evolve(&self, u: &UnitaryMatrix<T>) -> Result<Self> {
        Ok(Self { n_qubits: self.n_qubits, amps: u.apply(&self.amps)? })
    }

    pub fn probabilities(&self) -> ProbabilityDistribution<T> {
        ProbabilityDistribution { probs: self.amps.iter().map(|z| z.norm_sqr()).collect() }
    }

    /// Largest entrywise modulus of the amplitude difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn scale_phase(&self, phase: Cplx<T>) -> Self {
        Self { n_qubits: self.n_qubits, amps: self.amps.iter().map(|z| *z * phase).collect() }
    }
}

/// `⟨a|b⟩`, conjugating the first argument.
pub fn inner_product<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<Cplx<T>> {
    if a.dim() != b.dim() {
        return Err(QspError::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let re = compensated_sum(a.amps.iter().zip(&b.amps).map(|(x, y)| (x.conj() * y).re));
    let im = compensated_sum(a.amps.iter().zip(&b.amps).map(|(x, y)| (x.conj() * y).im));
    Ok(Cplx::new(re, im))
}

/// Measurement distribution over `2^n` outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityDistribution<T: Real> {
    probs: Vec<T>,
}

impl<T: Real> ProbabilityDistribution<T> {
    /// Accepts nonnegative entries summing to 1 within [`norm_tolerance`].
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.iter().any(|p| !p.is_finite()) {
            return Err(QspError::NonFinite("probability".into()));
        }
        if probs.iter().any(|&p| p < T::zero()) {
            return Err(QspError::InvalidSpec("negative probability".into()));
        }
        let total = compensated_sum(probs.iter().copied());
        if (total - T::one()).abs() > norm_tolerance(probs.len()) {
            return Err(QspError::NotNormalized { norm: total.to_f64_lossy() });
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}
