//! Diagonal SRBB Z-factor: a CNOT/RZ circuit realizing every diagonal
//! special-unitary operator, and the linear map from its angles to the
//! diagonal phases.
//!
//! Layout for `n` qubits: the `n - 1` template on wires `0..n-1`, followed by
//! a parity walk on the last wire. The walk visits every parity
//! `x_{n-1} ⊕ (⊕_{c ∈ S} x_c)` for `S ⊆ {0..n-2}` in reflected Gray-code
//! order, one RZ per parity, one CNOT per Gray-code step, and a closing CNOT
//! back to the plain `x_{n-1}` wire. Gray-code bit `b` toggles control wire
//! `n - 2 - b`, so the most frequent toggles use the nearest wire.

use crate::circuit::{Angle, Circuit, GateInstance, GateKind};
use crate::error::{QspError, Result};
use crate::linalg::{least_squares, RealMatrix};
use crate::qcore::{qubit_mask, MAX_QUBITS};
use crate::real::{compensated_sum, wrap_angle, Real};

/// Z-factor circuit on `n ≥ 2` qubits with `2^n − 1` RZ slots.
#[derive(Clone, Debug, PartialEq)]
pub struct ZFactorTemplate<T: Real> {
    n: usize,
    circuit: Circuit<T>,
    /// Parity (as a basis-index bit mask) seen by each slot's RZ.
    slot_parity: Vec<usize>,
}

impl<T: Real> ZFactorTemplate<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn circuit(&self) -> &Circuit<T> {
        &self.circuit
    }

    pub fn into_circuit(self) -> Circuit<T> {
        self.circuit
    }

    pub fn n_slots(&self) -> usize {
        self.circuit.n_slots()
    }

    pub fn slot_parity(&self) -> &[usize] {
        &self.slot_parity
    }

    /// Correspondence between the algebra index `j ∈ 2..=2^n` of the
    /// parameter `θ_{j²−1}` and circuit slots.
    pub fn indexing(&self) -> ParameterIndexing {
        ParameterIndexing { n: self.n, slot_of_j: (0..self.n_slots()).collect() }
    }
}

/// Bijection `j ↦ slot` for `j ∈ 2..=2^n`, fixed here as `slot = j − 2`
/// (emission order). It is not claimed to reproduce any external numbering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterIndexing {
    n: usize,
    slot_of_j: Vec<usize>,
}

impl ParameterIndexing {
    pub fn slot(&self, j: usize) -> Option<usize> {
        if j < 2 {
            return None;
        }
        self.slot_of_j.get(j - 2).copied()
    }

    pub fn j_of_slot(&self, slot: usize) -> Option<usize> {
        self.slot_of_j.iter().position(|&s| s == slot).map(|i| i + 2)
    }

    pub fn len(&self) -> usize {
        self.slot_of_j.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slot_of_j.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Builds the Z-factor template; see the module docs for the layout.
pub fn build_z_factor<T: Real>(n: usize) -> Result<ZFactorTemplate<T>> {
    if n < 2 {
        return Err(QspError::TooFewQubits { min: 2, got: n });
    }
    if n > MAX_QUBITS {
        return Err(QspError::TooManyQubits(n));
    }
    let mut circuit = Circuit::new(n);
    if n == 2 {
        for q in [0, 1] {
            let s = circuit.new_slot();
            circuit.push(GateInstance::rz(q, Angle::Slot(s)))?;
        }
        circuit.push(GateInstance::cnot(0, 1))?;
        let s = circuit.new_slot();
        circuit.push(GateInstance::rz(1, Angle::Slot(s)))?;
        circuit.push(GateInstance::cnot(0, 1))?;
    } else {
        let prev = build_z_factor::<T>(n - 1)?;
        let wires: Vec<usize> = (0..n - 1).collect();
        circuit.append_mapped(prev.circuit(), &wires)?;
        let target = n - 1;
        let m = n - 1;
        let control_of_bit = |b: usize| m - 1 - b;
        let s = circuit.new_slot();
        circuit.push(GateInstance::rz(target, Angle::Slot(s)))?;
        let mut prev_code = 0usize;
        for i in 1..(1usize << m) {
            let code = i ^ (i >> 1);
            let bit = (code ^ prev_code).trailing_zeros() as usize;
            circuit.push(GateInstance::cnot(control_of_bit(bit), target))?;
            let s = circuit.new_slot();
            circuit.push(GateInstance::rz(target, Angle::Slot(s)))?;
            prev_code = code;
        }
        // The reflected code ends on a single bit; one CNOT closes the cycle.
        let bit = prev_code.trailing_zeros() as usize;
        circuit.push(GateInstance::cnot(control_of_bit(bit), target))?;
    }
    let slot_parity = trace_parities(&circuit)?;
    Ok(ZFactorTemplate { n, circuit, slot_parity })
}

/// Tracks, for each RZ, the parity of initial wire values present on its
/// wire. Requires a {RZ, CNOT} circuit that restores every wire.
fn trace_parities<T: Real>(circuit: &Circuit<T>) -> Result<Vec<usize>> {
    let n = circuit.n_qubits();
    let mut wire: Vec<usize> = (0..n).map(|q| qubit_mask(n, q)).collect();
    let mut parity = vec![usize::MAX; circuit.n_slots()];
    for g in circuit.gates() {
        match g.kind {
            GateKind::Cnot => {
                let (c, t) = (g.qubits[0], g.qubits[1]);
                wire[t] ^= wire[c];
            }
            GateKind::Rz => {
                let s = g
                    .slot()
                    .ok_or_else(|| QspError::Config("Z-factor RZ must read a slot".into()))?;
                parity[s] = wire[g.qubits[0]];
            }
            other => return Err(QspError::Config(format!("{other:?} is not allowed in a Z-factor"))),
        }
    }
    if wire.iter().enumerate().any(|(q, &p)| p != qubit_mask(n, q)) {
        return Err(QspError::Config("Z-factor does not restore its wires".into()));
    }
    if parity.contains(&usize::MAX) {
        return Err(QspError::Config("Z-factor slot without an RZ".into()));
    }
    Ok(parity)
}

/// Linear map `θ ↦ φ` with `unitary = diag(e^{iφ})`, as a `2^n × (2^n − 1)`
/// matrix with entries `±1/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseMap<T: Real> {
    n: usize,
    matrix: RealMatrix<T>,
}

impl<T: Real> PhaseMap<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RealMatrix<T> {
        &self.matrix
    }

    pub fn phases(&self, theta: &[T]) -> Result<Vec<T>> {
        if theta.len() != self.matrix.cols {
            return Err(QspError::ParamLength { expected: self.matrix.cols, got: theta.len() });
        }
        Ok(self.matrix.mul_vec(theta))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank(T::lit(1e-9))
    }
}

/// An RZ(θ) on a wire carrying parity `p(x)` contributes `−θ/2·(−1)^{p(x)}`
/// to the phase of basis state `x`.
pub fn phase_map_of<T: Real>(template: &ZFactorTemplate<T>) -> PhaseMap<T> {
    let dim = 1usize << template.n;
    let cols = template.n_slots();
    let mut matrix = RealMatrix::zeros(dim, cols);
    let half = T::lit(0.5);
    for (s, &mask) in template.slot_parity.iter().enumerate() {
        for x in 0..dim {
            let odd = (x & mask).count_ones() % 2 == 1;
            matrix.set(x, s, if odd { half } else { -half });
        }
    }
    PhaseMap { n: template.n, matrix }
}

pub fn phase_map<T: Real>(n: usize) -> Result<PhaseMap<T>> {
    Ok(phase_map_of(&build_z_factor::<T>(n)?))
}

/// Angles realizing a diagonal SU target, plus the part of the target that
/// is a global phase.
#[derive(Clone, Debug, PartialEq)]
pub struct ZSolution<T: Real> {
    pub theta: Vec<T>,
    /// Mean of the adjusted phases, removed before the solve. Zero up to
    /// rounding for SU targets.
    pub global_phase_remainder: T,
}

/// Tolerance on `Σφ mod 2π` for a phase vector to count as special unitary.
/// Widened to a multiple of machine epsilon for low-precision scalars.
pub const SU_TOLERANCE: f64 = 1e-9;

/// Solves `phase_map · θ = φ` for a phase vector whose sum is `0 (mod 2π)`.
///
/// Phases are wrapped into `(−π, π]`, whole turns are redistributed so the
/// sum is zero up to rounding, and the remaining mean is
/// subtracted and reported.
pub fn solve_z_params<T: Real>(target_phases: &[T]) -> Result<ZSolution<T>> {
    let dim = target_phases.len();
    let n = crate::qcore::log2_exact(dim).ok_or(QspError::NotPowerOfTwo(dim))?;
    let map = phase_map::<T>(n)?;
    solve_with_map(&map, target_phases)
}

pub fn solve_with_map<T: Real>(map: &PhaseMap<T>, target_phases: &[T]) -> Result<ZSolution<T>> {
    let dim = 1usize << map.n;
    if target_phases.len() != dim {
        return Err(QspError::DimensionMismatch { expected: dim, got: target_phases.len() });
    }
    if target_phases.iter().any(|p| !p.is_finite()) {
        return Err(QspError::NonFinite("phase".into()));
    }
    let two_pi = T::PI() + T::PI();
    let mut phi: Vec<T> = target_phases.iter().map(|&p| wrap_angle(p)).collect();
    let sum = compensated_sum(phi.iter().copied());
    let turns = (sum / two_pi).round();
    let residual = sum - turns * two_pi;
    let tol = T::lit(SU_TOLERANCE).max(T::from_usize_lossy(16 * dim) * T::epsilon() * T::PI());
    if residual.abs() > tol {
        return Err(QspError::NotSpecialUnitary { residual: residual.to_f64_lossy() });
    }
    let k = turns.to_i64().unwrap_or(0);
    let step = if k > 0 { -two_pi } else { two_pi };
    for p in phi.iter_mut().take(k.unsigned_abs() as usize) {
        *p += step;
    }
    let mean = compensated_sum(phi.iter().copied()) / T::from_usize_lossy(dim);
    for p in &mut phi {
        *p -= mean;
    }
    let theta = least_squares(map.matrix(), &phi)
        .ok_or_else(|| QspError::Config("phase map is rank deficient".into()))?;
    Ok(ZSolution { theta, global_phase_remainder: mean })
}
