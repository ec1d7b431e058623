//! Gate-level circuit IR with parameter slots.

mod gate;
mod qasm;

pub use gate::{Angle, GateInstance, GateKind, GateTag};
pub use qasm::{from_qasm, to_qasm};

use crate::error::{QspError, Result};
use crate::qcore::{apply_to_rows, StateVector, UnitaryMatrix, MAX_QUBITS};
use crate::qcore::kernel_ops::{cnot_rows, diag1_rows, x_rows};
use crate::real::{c, cis, Cplx, Real};

/// Structural statistics. Gates tagged [`GateTag::PhaseTail`] are excluded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CircuitStats {
    pub depth: usize,
    pub n_cnot: usize,
    /// RY, RZ and PHASESHIFT gates.
    pub n_rot: usize,
    pub n_other: usize,
}

/// Ordered list of gates over `n_qubits` wires with `n_slots` parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit<T: Real> {
    n_qubits: usize,
    gates: Vec<GateInstance<T>>,
    n_slots: usize,
}

impl<T: Real> Circuit<T> {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: Vec::new(), n_slots: 0 }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[GateInstance<T>] {
        &self.gates
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Reserves a fresh parameter slot and returns its index.
    pub fn new_slot(&mut self) -> usize {
        self.n_slots += 1;
        self.n_slots - 1
    }

    pub fn push(&mut self, gate: GateInstance<T>) -> Result<()> {
        self.validate_gate(&gate)?;
        self.gates.push(gate);
        Ok(())
    }

    fn validate_gate(&self, gate: &GateInstance<T>) -> Result<()> {
        if gate.qubits.len() != gate.kind.arity() {
            return Err(QspError::DimensionMismatch { expected: gate.kind.arity(), got: gate.qubits.len() });
        }
        for (i, &q) in gate.qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(QspError::QubitOutOfRange { index: q, n_qubits: self.n_qubits });
            }
            if gate.qubits[..i].contains(&q) {
                return Err(QspError::DuplicateQubit(q));
            }
        }
        match (gate.kind.is_parametric(), gate.angle) {
            (true, None) => return Err(QspError::Config(format!("{:?} requires an angle", gate.kind))),
            (false, Some(_)) => return Err(QspError::Config(format!("{:?} takes no angle", gate.kind))),
            (true, Some(Angle::Slot(s))) if s >= self.n_slots => return Err(QspError::UnboundSlot(s)),
            (true, Some(Angle::Literal(x))) if !x.is_finite() => return Err(QspError::NonFinite("angle".into())),
            _ => {}
        }
        Ok(())
    }

    /// Appends `other` with its wire `i` placed on `qubit_map[i]` and its
    /// slots renumbered after the existing ones. Returns the slot offset.
    pub fn append_mapped(&mut self, other: &Circuit<T>, qubit_map: &[usize]) -> Result<usize> {
        if qubit_map.len() != other.n_qubits {
            return Err(QspError::DimensionMismatch { expected: other.n_qubits, got: qubit_map.len() });
        }
        let offset = self.n_slots;
        self.n_slots += other.n_slots;
        for g in &other.gates {
            let mut g = g.clone();
            g.qubits = g.qubits.iter().map(|&q| qubit_map[q]).collect();
            if let Some(Angle::Slot(s)) = g.angle {
                g.angle = Some(Angle::Slot(s + offset));
            }
            if let Err(e) = self.push(g) {
                self.n_slots = offset;
                return Err(e);
            }
        }
        Ok(offset)
    }

    pub fn is_bound(&self) -> bool {
        self.gates.iter().all(|g| !matches!(g.angle, Some(Angle::Slot(_))))
    }

    /// Replaces every slot reference by its value; slot `i` takes `params[i]`.
    pub fn bind(&self, params: &[T]) -> Result<Circuit<T>> {
        self.check_params(params)?;
        let gates = self
            .gates
            .iter()
            .map(|g| {
                let mut g = g.clone();
                if let Some(Angle::Slot(s)) = g.angle {
                    g.angle = Some(Angle::Literal(params[s]));
                }
                g
            })
            .collect();
        Ok(Circuit { n_qubits: self.n_qubits, gates, n_slots: 0 })
    }

    fn check_params(&self, params: &[T]) -> Result<()> {
        if params.len() != self.n_slots {
            return Err(QspError::ParamLength { expected: self.n_slots, got: params.len() });
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(QspError::NonFinite("parameter".into()));
        }
        Ok(())
    }

    fn resolve(&self, g: &GateInstance<T>, params: Option<&[T]>) -> Result<T> {
        match g.angle {
            None => Ok(T::zero()),
            Some(Angle::Literal(x)) => Ok(x),
            Some(Angle::Slot(s)) => params.and_then(|p| p.get(s).copied()).ok_or(QspError::UnboundSlot(s)),
        }
    }

    fn apply_all(&self, data: &mut [Cplx<T>], cols: usize, params: Option<&[T]>) -> Result<()> {
        let n = self.n_qubits;
        let two = T::lit(2.0);
        for g in &self.gates {
            let angle = self.resolve(g, params)?;
            let q = g.qubits[0];
            match g.kind {
                GateKind::Rz => diag1_rows(data, cols, n, q, cis(-angle / two), cis(angle / two)),
                GateKind::PhaseShift => diag1_rows(data, cols, n, q, c(T::one(), T::zero()), cis(angle)),
                GateKind::S => diag1_rows(data, cols, n, q, c(T::one(), T::zero()), c(T::zero(), T::one())),
                GateKind::Sdg => diag1_rows(data, cols, n, q, c(T::one(), T::zero()), c(T::zero(), -T::one())),
                GateKind::X => x_rows(data, cols, n, q),
                GateKind::Cnot => cnot_rows(data, cols, n, g.qubits[0], g.qubits[1]),
                GateKind::H | GateKind::Ry => {
                    let m = g.kind.matrix(angle);
                    apply_to_rows(data, cols, n, m.entries(), &g.qubits)?
                }
            }
        }
        Ok(())
    }

    fn check_state(&self, input: &StateVector<T>) -> Result<()> {
        if input.n_qubits() != self.n_qubits {
            return Err(QspError::DimensionMismatch { expected: self.n_qubits, got: input.n_qubits() });
        }
        Ok(())
    }

    /// Applies the gates left to right. Every slot must be bound.
    pub fn run(&self, input: &StateVector<T>) -> Result<StateVector<T>> {
        self.check_state(input)?;
        let mut amps = input.amplitudes().to_vec();
        self.apply_all(&mut amps, 1, None)?;
        Ok(StateVector::from_raw_unchecked(self.n_qubits, amps))
    }

    /// Runs with slot values taken from `params`, without materializing a
    /// bound copy.
    pub fn run_with(&self, params: &[T], input: &StateVector<T>) -> Result<StateVector<T>> {
        self.check_params(params)?;
        self.check_state(input)?;
        let mut amps = input.amplitudes().to_vec();
        self.apply_all(&mut amps, 1, Some(params))?;
        Ok(StateVector::from_raw_unchecked(self.n_qubits, amps))
    }

    /// Full operator: product of the embedded gates in application order.
    pub fn unitary_of(&self) -> Result<UnitaryMatrix<T>> {
        self.unitary_impl(None)
    }

    pub fn unitary_with(&self, params: &[T]) -> Result<UnitaryMatrix<T>> {
        self.check_params(params)?;
        self.unitary_impl(Some(params))
    }

    fn unitary_impl(&self, params: Option<&[T]>) -> Result<UnitaryMatrix<T>> {
        if self.n_qubits > MAX_QUBITS.min(12) {
            return Err(QspError::TooManyQubits(self.n_qubits));
        }
        let dim = 1usize << self.n_qubits;
        let mut u = UnitaryMatrix::identity(dim);
        self.apply_all(u.entries_mut(), dim, params)?;
        Ok(u)
    }

    /// Depth by as-soon-as-possible layering, every gate one layer on its
    /// wires, plus counts by kind.
    pub fn stats(&self) -> CircuitStats {
        let mut wire_layer = vec![0usize; self.n_qubits];
        let mut st = CircuitStats::default();
        for g in self.gates.iter().filter(|g| g.tag == GateTag::Core) {
            let layer = g.qubits.iter().map(|&q| wire_layer[q]).max().unwrap_or(0) + 1;
            for &q in &g.qubits {
                wire_layer[q] = layer;
            }
            st.depth = st.depth.max(layer);
            match g.kind {
                GateKind::Cnot => st.n_cnot += 1,
                GateKind::Ry | GateKind::Rz | GateKind::PhaseShift => st.n_rot += 1,
                _ => st.n_other += 1,
            }
        }
        st
    }

    /// Number of gates reading each slot.
    pub fn slot_usage(&self) -> Vec<usize> {
        let mut usage = vec![0; self.n_slots];
        for g in &self.gates {
            if let Some(s) = g.slot() {
                usage[s] += 1;
            }
        }
        usage
    }

    /// The gate reading slot `s`, if exactly one does.
    pub fn slot_gate(&self, s: usize) -> Option<&GateInstance<T>> {
        let mut it = self.gates.iter().filter(|g| g.slot() == Some(s));
        match (it.next(), it.next()) {
            (Some(g), None) => Some(g),
            _ => None,
        }
    }

    /// Sub-sequence of gates whose wires all lie in `0..k`, as a `k`-qubit
    /// circuit (slot references are kept verbatim).
    pub fn restrict_to_prefix(&self, k: usize) -> Vec<GateInstance<T>> {
        self.gates.iter().filter(|g| g.qubits.iter().all(|&q| q < k)).cloned().collect()
    }
}
