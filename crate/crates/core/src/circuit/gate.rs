use serde::{Deserialize, Serialize};

use crate::qcore::{gates, UnitaryMatrix};
use crate::real::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GateKind {
    Ry,
    Rz,
    H,
    S,
    Sdg,
    X,
    PhaseShift,
    Cnot,
}

impl GateKind {
    pub fn is_parametric(self) -> bool {
        matches!(self, GateKind::Ry | GateKind::Rz | GateKind::PhaseShift)
    }

    pub fn arity(self) -> usize {
        if self == GateKind::Cnot {
            2
        } else {
            1
        }
    }

    /// OpenQASM 3 standard-library name.
    pub fn qasm_name(self) -> &'static str {
        match self {
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::X => "x",
            GateKind::PhaseShift => "p",
            GateKind::Cnot => "cx",
        }
    }

    pub fn from_qasm_name(name: &str) -> Option<Self> {
        Some(match name {
            "ry" => GateKind::Ry,
            "rz" => GateKind::Rz,
            "h" => GateKind::H,
            "s" => GateKind::S,
            "sdg" => GateKind::Sdg,
            "x" => GateKind::X,
            "p" => GateKind::PhaseShift,
            "cx" => GateKind::Cnot,
            _ => return None,
        })
    }

    /// Gate matrix; `angle` is ignored for fixed gates.
    pub fn matrix<T: Real>(self, angle: T) -> UnitaryMatrix<T> {
        match self {
            GateKind::Ry => gates::ry(angle),
            GateKind::Rz => gates::rz(angle),
            GateKind::H => gates::hadamard(),
            GateKind::S => gates::s_gate(),
            GateKind::Sdg => gates::sdg_gate(),
            GateKind::X => gates::pauli_x(),
            GateKind::PhaseShift => gates::phase_shift(angle),
            GateKind::Cnot => gates::cnot(),
        }
    }
}

/// Angle argument of a parametric gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle<T: Real> {
    Literal(T),
    Slot(usize),
}

/// Marks gates that belong to the optional global-phase correction tail,
/// which is excluded from structural statistics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GateTag {
    #[default]
    Core,
    PhaseTail,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateInstance<T: Real> {
    pub kind: GateKind,
    /// `[target]` for single-qubit kinds, `[control, target]` for CNOT.
    pub qubits: Vec<usize>,
    pub angle: Option<Angle<T>>,
    pub tag: GateTag,
}

impl<T: Real> GateInstance<T> {
    fn single(kind: GateKind, q: usize, angle: Option<Angle<T>>) -> Self {
        Self { kind, qubits: vec![q], angle, tag: GateTag::Core }
    }

    pub fn ry(q: usize, angle: Angle<T>) -> Self {
        Self::single(GateKind::Ry, q, Some(angle))
    }

    pub fn rz(q: usize, angle: Angle<T>) -> Self {
        Self::single(GateKind::Rz, q, Some(angle))
    }

    pub fn phase_shift(q: usize, angle: Angle<T>) -> Self {
        Self::single(GateKind::PhaseShift, q, Some(angle))
    }

    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q, None)
    }

    pub fn s(q: usize) -> Self {
        Self::single(GateKind::S, q, None)
    }

    pub fn sdg(q: usize) -> Self {
        Self::single(GateKind::Sdg, q, None)
    }

    pub fn x(q: usize) -> Self {
        Self::single(GateKind::X, q, None)
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self { kind: GateKind::Cnot, qubits: vec![control, target], angle: None, tag: GateTag::Core }
    }

    pub fn with_tag(mut self, tag: GateTag) -> Self {
        self.tag = tag;
        self
    }

    pub fn slot(&self) -> Option<usize> {
        match self.angle {
            Some(Angle::Slot(s)) => Some(s),
            _ => None,
        }
    }
}
