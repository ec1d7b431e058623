//! Full state-preparation circuit: an RY head and one S/H-dressed Z-factor
//! per ladder level (the modulus part), then a final Z-factor (the phase
//! part).
//!
//! Slot layout of the combined template: `[head] ++ [level 2] ++ … ++
//! [level n] ++ [phase]`, where level `k` owns `2^k − 1` slots.

use serde::{Deserialize, Serialize};

use crate::circuit::{Angle, Circuit, GateInstance, GateTag};
use crate::error::{QspError, Result};
use crate::real::Real;
use crate::zfactor::build_z_factor;

/// Closed-form depth and gate counts of the assembled circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountPrediction {
    pub depth: usize,
    pub n_rot: usize,
    pub n_cnot: usize,
}

/// `D(n) = 6·2^n − (n² + 7n)/2 − 3`, `N_rot = 3·2^n − n − 3`,
/// `N_CNOT = 3·2^n − 2n − 4`.
pub fn predicted_counts(n: usize) -> Result<CountPrediction> {
    if n < 2 {
        return Err(QspError::TooFewQubits { min: 2, got: n });
    }
    let p = 1usize << n;
    Ok(CountPrediction {
        depth: 6 * p - (n * n + 7 * n) / 2 - 3,
        n_rot: 3 * p - n - 3,
        n_cnot: 3 * p - 2 * n - 4,
    })
}

/// Depth of a standalone Z-factor on `n` qubits: `2^{n+1} − 2 − n`.
pub fn predicted_z_depth(n: usize) -> usize {
    (1usize << (n + 1)) - 2 - n
}

pub fn modulus_slot_count(n: usize) -> usize {
    (1usize << (n + 1)) - n - 2
}

pub fn phase_slot_count(n: usize) -> usize {
    (1usize << n) - 1
}

/// Slot range of ladder level `k ∈ 2..=n` inside the modulus template.
pub fn level_slot_range(k: usize) -> std::ops::Range<usize> {
    assert!(k >= 2);
    let start = 1 + (2..k).map(|i| (1usize << i) - 1).sum::<usize>();
    start..start + (1usize << k) - 1
}

/// RY head on qubit 0, then for `k = 2..=n`: S†, H on qubit `k−1`, the
/// level-`k` Z-factor on qubits `0..k`, H, S on qubit `k−1`.
pub fn build_modulus_template<T: Real>(n: usize) -> Result<Circuit<T>> {
    if n < 2 {
        return Err(QspError::TooFewQubits { min: 2, got: n });
    }
    let mut c = Circuit::new(n);
    let head = c.new_slot();
    c.push(GateInstance::ry(0, Angle::Slot(head)))?;
    for k in 2..=n {
        let t = k - 1;
        c.push(GateInstance::sdg(t))?;
        c.push(GateInstance::h(t))?;
        let z = build_z_factor::<T>(k)?;
        let wires: Vec<usize> = (0..k).collect();
        c.append_mapped(z.circuit(), &wires)?;
        c.push(GateInstance::h(t))?;
        c.push(GateInstance::s(t))?;
    }
    Ok(c)
}

pub fn build_phase_template<T: Real>(n: usize) -> Result<Circuit<T>> {
    Ok(build_z_factor::<T>(n)?.into_circuit())
}

/// Modulus and phase templates of the two-part network.
#[derive(Clone, Debug, PartialEq)]
pub struct QspTemplate<T: Real> {
    pub n: usize,
    pub modulus: Circuit<T>,
    pub phase: Circuit<T>,
}

impl<T: Real> QspTemplate<T> {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self { n, modulus: build_modulus_template(n)?, phase: build_phase_template(n)? })
    }

    pub fn n_slots(&self) -> usize {
        self.modulus.n_slots() + self.phase.n_slots()
    }

    /// Modulus followed by phase, with slots concatenated in that order.
    pub fn combined(&self) -> Result<Circuit<T>> {
        let mut c = self.modulus.clone();
        let wires: Vec<usize> = (0..self.n).collect();
        c.append_mapped(&self.phase, &wires)?;
        Ok(c)
    }
}

/// `RZ(2φ)·X·PHASESHIFT(2φ)·X` on `qubit`, acting as `e^{iφ}·I`.
pub fn global_phase_tail<T: Real>(qubit: usize, phi: T) -> [GateInstance<T>; 4] {
    let two_phi = phi + phi;
    [
        GateInstance::rz(qubit, Angle::Literal(two_phi)),
        GateInstance::x(qubit),
        GateInstance::phase_shift(qubit, Angle::Literal(two_phi)),
        GateInstance::x(qubit),
    ]
    .map(|g| g.with_tag(GateTag::PhaseTail))
}

/// Bound circuit: modulus, phase, and the global-phase tail on qubit 0 when
/// `global_phase` is given.
pub fn assemble_full<T: Real>(
    n: usize,
    theta_modulus: &[T],
    theta_phase: &[T],
    global_phase: Option<T>,
) -> Result<Circuit<T>> {
    let tpl = QspTemplate::<T>::new(n)?;
    if theta_modulus.len() != tpl.modulus.n_slots() {
        return Err(QspError::ParamLength { expected: tpl.modulus.n_slots(), got: theta_modulus.len() });
    }
    if theta_phase.len() != tpl.phase.n_slots() {
        return Err(QspError::ParamLength { expected: tpl.phase.n_slots(), got: theta_phase.len() });
    }
    let params: Vec<T> = theta_modulus.iter().chain(theta_phase).copied().collect();
    let mut c = tpl.combined()?.bind(&params)?;
    if let Some(phi) = global_phase {
        for g in global_phase_tail(0, phi) {
            c.push(g)?;
        }
    }
    Ok(c)
}

/// Diagonal phases of a multiplexed RZ: control pattern `j` with angle
/// `γ_j` contributes `(−γ_j/2, +γ_j/2)` on its two target basis states.
pub fn multiplexed_rz_phases<T: Real>(gammas: &[T]) -> Vec<T> {
    let half = T::lit(0.5);
    gammas.iter().flat_map(|&g| [-g * half, g * half]).collect()
}
