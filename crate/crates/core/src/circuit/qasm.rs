//! OpenQASM 3 emission and a reader for the emitted subset.

use std::fmt::Write;

use crate::error::{QspError, Result};
use crate::real::Real;

use super::{Angle, Circuit, GateInstance, GateKind, GateTag};

pub const HEADER: &str = "OPENQASM 3.0;";
const TAIL_MARKER: &str = "// global-phase correction";

fn format_angle(x: f64) -> String {
    if x == std::f64::consts::PI {
        "pi".to_string()
    } else if x == -std::f64::consts::PI {
        "-pi".to_string()
    } else {
        // 17 significant digits round-trip any f64.
        format!("{x:.16e}")
    }
}

fn parse_angle(s: &str) -> Option<f64> {
    match s.trim() {
        "pi" | "π" => Some(std::f64::consts::PI),
        "-pi" | "-π" => Some(-std::f64::consts::PI),
        t => t.parse().ok(),
    }
}

/// Emits an OpenQASM 3 program, one gate per line.
pub fn to_qasm<T: Real>(circuit: &Circuit<T>) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "include \"stdgates.inc\";").unwrap();
    writeln!(out, "qubit[{}] q;", circuit.n_qubits()).unwrap();
    let mut in_tail = false;
    for g in circuit.gates() {
        if g.tag == GateTag::PhaseTail && !in_tail {
            writeln!(out, "{TAIL_MARKER}").unwrap();
            in_tail = true;
        }
        let name = g.kind.qasm_name();
        let args = match g.angle {
            None => String::new(),
            Some(Angle::Literal(x)) => format!("({})", format_angle(x.to_f64_lossy())),
            Some(Angle::Slot(s)) => return Err(QspError::UnboundSlot(s)),
        };
        let wires: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
        writeln!(out, "{name}{args} {};", wires.join(", ")).unwrap();
    }
    Ok(out)
}

fn parse_qubit(tok: &str, line: usize) -> Result<usize> {
    let err = || QspError::Qasm { line, msg: format!("bad qubit operand `{tok}`") };
    let inner = tok.trim().strip_prefix("q[").and_then(|t| t.strip_suffix(']')).ok_or_else(err)?;
    inner.trim().parse().map_err(|_| err())
}

/// Reads programs in the subset produced by [`to_qasm`].
pub fn from_qasm<T: Real>(text: &str) -> Result<Circuit<T>> {
    let mut circuit: Option<Circuit<T>> = None;
    let mut saw_header = false;
    let mut tag = GateTag::Core;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == TAIL_MARKER {
            tag = GateTag::PhaseTail;
            continue;
        }
        if line.starts_with("//") {
            continue;
        }
        let qerr = |msg: &str| QspError::Qasm { line: line_no, msg: msg.to_string() };
        let stmt = line.strip_suffix(';').ok_or_else(|| qerr("missing `;`"))?.trim();
        if !saw_header {
            if stmt != "OPENQASM 3.0" && stmt != "OPENQASM 3" {
                return Err(qerr("expected `OPENQASM 3.0;` header"));
            }
            saw_header = true;
            continue;
        }
        if stmt.starts_with("include") {
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("qubit[") {
            let (n, name) = rest.split_once(']').ok_or_else(|| qerr("bad qubit declaration"))?;
            if name.trim() != "q" {
                return Err(qerr("only register `q` is supported"));
            }
            let n: usize = n.trim().parse().map_err(|_| qerr("bad register size"))?;
            circuit = Some(Circuit::new(n));
            continue;
        }
        let c = circuit.as_mut().ok_or_else(|| qerr("gate before qubit declaration"))?;
        let (head, operands) = match stmt.find('(') {
            Some(_) => {
                let close = stmt.find(')').ok_or_else(|| qerr("unbalanced parenthesis"))?;
                (&stmt[..close + 1], &stmt[close + 1..])
            }
            None => stmt.split_once(' ').ok_or_else(|| qerr("missing operands"))?,
        };
        let (name, angle) = match head.split_once('(') {
            Some((n, a)) => {
                let a = a.strip_suffix(')').ok_or_else(|| qerr("unbalanced parenthesis"))?;
                let v = parse_angle(a).ok_or_else(|| qerr("bad angle"))?;
                (n.trim(), Some(T::lit(v)))
            }
            None => (head.trim(), None),
        };
        let kind = GateKind::from_qasm_name(name).ok_or_else(|| qerr(&format!("unsupported gate `{name}`")))?;
        let qubits = operands
            .split(',')
            .map(|t| parse_qubit(t, line_no))
            .collect::<Result<Vec<_>>>()?;
        let gate = GateInstance { kind, qubits, angle: angle.map(Angle::Literal), tag };
        c.push(gate).map_err(|e| qerr(&e.to_string()))?;
    }
    circuit.ok_or(QspError::Qasm { line: 0, msg: "no qubit declaration".into() })
}
