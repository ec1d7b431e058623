//! Closed-form compilation of a target state into ladder parameters.
//!
//! Moduli come from a binary tree of partial norms: the angle at an internal
//! node is `arccos(left / node)`, and level `k` of the ladder rotates qubit
//! `k − 1` by `RY(2θ)` conditioned on the value of qubits `0..k−1`. Phases are
//! handled afterwards by a diagonal Z-factor plus a global-phase tail.

use crate::circuit::Circuit;
use crate::error::{QspError, Result};
use crate::ladder::{assemble_full, level_slot_range, modulus_slot_count, multiplexed_rz_phases};
use crate::qcore::{gates, kron, log2_exact, UnitaryMatrix};
use crate::real::{compensated_sum, norm_tolerance, Cplx, Real};
use crate::zfactor::{phase_map, solve_with_map};

/// Tree of partial l2-norms; `levels[0]` is the root, `levels[n]` the
/// leaf moduli.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeBst<T: Real> {
    levels: Vec<Vec<T>>,
}

impl<T: Real> AmplitudeBst<T> {
    pub fn n(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, depth: usize) -> &[T] {
        &self.levels[depth]
    }

    pub fn root(&self) -> T {
        self.levels[0][0]
    }

    pub fn leaves(&self) -> &[T] {
        &self.levels[self.n()]
    }
}

/// Builds the tree from nonnegative moduli with unit norm (within
/// [`norm_tolerance`], re-normalized).
pub fn bst_build<T: Real>(moduli: &[T]) -> Result<AmplitudeBst<T>> {
    let n = log2_exact(moduli.len()).ok_or(QspError::NotPowerOfTwo(moduli.len()))?;
    if moduli.iter().any(|m| !m.is_finite()) {
        return Err(QspError::NonFinite("modulus".into()));
    }
    if moduli.iter().any(|&m| m < T::zero()) {
        return Err(QspError::InvalidSpec("moduli must be nonnegative".into()));
    }
    let norm = compensated_sum(moduli.iter().map(|m| *m * *m)).sqrt();
    if norm == T::zero() {
        return Err(QspError::ZeroVector);
    }
    if (norm - T::one()).abs() > norm_tolerance(moduli.len()) {
        return Err(QspError::NotNormalized { norm: norm.to_f64_lossy() });
    }
    let mut levels = vec![moduli.iter().map(|&m| m / norm).collect::<Vec<T>>()];
    for _ in 0..n {
        let below = levels.last().unwrap();
        let above = below.chunks_exact(2).map(|p| p[0].hypot(p[1])).collect();
        levels.push(above);
    }
    levels.reverse();
    Ok(AmplitudeBst { levels })
}

/// Ladder angles per level `k = 1..=n`; level `k` holds `2^{k−1}` angles in
/// `[0, π/2]`, indexed by the control pattern of qubits `0..k−1`.
#[derive(Clone, Debug, PartialEq)]
pub struct NaturalAngles<T: Real> {
    levels: Vec<Vec<T>>,
}

impl<T: Real> NaturalAngles<T> {
    /// Angles of level `k` (1-based).
    pub fn level(&self, k: usize) -> &[T] {
        &self.levels[k - 1]
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn total(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.levels.iter().flatten()
    }
}

/// `θ = arccos(left / node)` per internal node; zero-norm nodes get 0.
pub fn natural_angles<T: Real>(bst: &AmplitudeBst<T>) -> NaturalAngles<T> {
    let levels = (0..bst.n())
        .map(|d| {
            let children = bst.level(d + 1);
            bst.level(d)
                .iter()
                .enumerate()
                .map(|(i, &node)| {
                    if node <= T::zero() {
                        T::zero()
                    } else {
                        (children[2 * i] / node).min(T::one()).acos()
                    }
                })
                .collect()
        })
        .collect();
    NaturalAngles { levels }
}

/// Block-diagonal `diag(RY(γ_1), …, RY(γ_{2^{k−1}}))` on `k` qubits: the last
/// qubit is the target, the others select the block.
pub fn ucg_reference<T: Real>(k: usize, gammas: &[T]) -> Result<UnitaryMatrix<T>> {
    if k == 0 {
        return Err(QspError::TooFewQubits { min: 1, got: 0 });
    }
    let blocks = 1usize << (k - 1);
    if gammas.len() != blocks {
        return Err(QspError::ParamLength { expected: blocks, got: gammas.len() });
    }
    let dim = 1usize << k;
    let mut entries = vec![Cplx::default(); dim * dim];
    for (j, &g) in gammas.iter().enumerate() {
        let ry = gates::ry(g);
        for r in 0..2 {
            for c in 0..2 {
                entries[(2 * j + r) * dim + 2 * j + c] = ry.get(r, c);
            }
        }
    }
    UnitaryMatrix::from_row_major(dim, entries)
}

/// `U_Modulus = UCG_n ⋯ UCG_1`, each level with doubled natural angles and
/// embedded on the leading qubits.
pub fn modulus_reference_unitary<T: Real>(angles: &NaturalAngles<T>) -> Result<UnitaryMatrix<T>> {
    let n = angles.n();
    let mut u = UnitaryMatrix::identity(1 << n);
    for k in 1..=n {
        let gammas: Vec<T> = angles.level(k).iter().map(|&t| t + t).collect();
        let block = kron(&ucg_reference(k, &gammas)?, &UnitaryMatrix::identity(1 << (n - k)));
        u = block.matmul(&u)?;
    }
    Ok(u)
}

/// Modulus-template slots reproducing the natural ladder exactly.
pub fn modulus_params_exact<T: Real>(moduli: &[T]) -> Result<Vec<T>> {
    let bst = bst_build(moduli)?;
    let angles = natural_angles(&bst);
    modulus_params_from_angles(&angles)
}

pub fn modulus_params_from_angles<T: Real>(angles: &NaturalAngles<T>) -> Result<Vec<T>> {
    let n = angles.n();
    if n < 2 {
        return Err(QspError::TooFewQubits { min: 2, got: n });
    }
    let mut slots = vec![T::zero(); modulus_slot_count(n)];
    let theta0 = angles.level(1)[0];
    slots[0] = theta0 + theta0;
    for k in 2..=n {
        let gammas: Vec<T> = angles.level(k).iter().map(|&t| t + t).collect();
        let map = phase_map::<T>(k)?;
        let sol = solve_with_map(&map, &multiplexed_rz_phases(&gammas))?;
        slots[level_slot_range(k)].copy_from_slice(&sol.theta);
    }
    Ok(slots)
}

/// Phase-stage angles and the global phase left over after projecting the
/// target phases onto the zero-sum subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSolution<T: Real> {
    pub theta_phase: Vec<T>,
    pub global_phase: T,
}

/// Global phase is the mean of the target phases; the remainder is solved
/// on the Z-factor.
pub fn phase_params_exact<T: Real>(target_phases: &[T]) -> Result<PhaseSolution<T>> {
    let n = log2_exact(target_phases.len()).ok_or(QspError::NotPowerOfTwo(target_phases.len()))?;
    let mean = compensated_sum(target_phases.iter().copied()) / T::from_usize_lossy(target_phases.len());
    let centered: Vec<T> = target_phases.iter().map(|&p| p - mean).collect();
    let sol = solve_with_map(&phase_map::<T>(n)?, &centered)?;
    Ok(PhaseSolution { theta_phase: sol.theta, global_phase: mean + sol.global_phase_remainder })
}

/// Phases `arg c_k`, with zero-modulus components set to 0.
pub fn target_phases<T: Real>(amps: &[Cplx<T>]) -> Vec<T> {
    amps.iter().map(|z| if z.norm() <= T::zero() { T::zero() } else { z.arg() }).collect()
}

/// Output of [`exact_prepare`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExactPreparation<T: Real> {
    /// Modulus, phase, and global-phase tail; acts as `|0…0⟩ ↦ c`.
    pub circuit: Circuit<T>,
    pub global_phase: T,
    pub theta_modulus: Vec<T>,
    pub theta_phase: Vec<T>,
}

impl<T: Real> ExactPreparation<T> {
    /// The circuit without the tail; prepares `e^{−i·global_phase}·c`.
    pub fn circuit_without_tail(&self) -> Result<Circuit<T>> {
        assemble_full(self.circuit.n_qubits(), &self.theta_modulus, &self.theta_phase, None)
    }
}

/// Compiles a normalized amplitude vector on `n ≥ 2` qubits.
pub fn exact_prepare<T: Real>(amps: &[Cplx<T>]) -> Result<ExactPreparation<T>> {
    let n = log2_exact(amps.len()).ok_or(QspError::NotPowerOfTwo(amps.len()))?;
    if n < 2 {
        return Err(QspError::TooFewQubits { min: 2, got: n });
    }
    let moduli: Vec<T> = amps.iter().map(|z| z.norm()).collect();
    let theta_modulus = modulus_params_exact(&moduli)?;
    let phases = phase_params_exact(&target_phases(amps))?;
    let circuit = assemble_full(n, &theta_modulus, &phases.theta_phase, Some(phases.global_phase))?;
    Ok(ExactPreparation {
        circuit,
        global_phase: phases.global_phase,
        theta_modulus,
        theta_phase: phases.theta_phase,
    })
}
