use crate::error::{QspError, Result};
use crate::real::{Cplx, Real};

use super::qubit_mask;

/// Left-multiplies a row-major buffer of `2^n` rows by a 1- or 2-qubit gate
/// acting on `targets`.
///
/// With `cols == 1` the buffer is a state vector; with `cols == 2^n` it is a
/// full operator and this computes `G ⊗ I · M`. The gate matrix is given in
/// row-major order over the basis of `targets`, first target most
/// significant.
pub fn apply_to_rows<T: Real>(
    data: &mut [Cplx<T>],
    cols: usize,
    n: usize,
    gate: &[Cplx<T>],
    targets: &[usize],
) -> Result<()> {
    check_targets(n, targets)?;
    let k = targets.len();
    let gdim = 1usize << k;
    if gate.len() != gdim * gdim {
        return Err(QspError::DimensionMismatch { expected: gdim * gdim, got: gate.len() });
    }
    let rows = 1usize << n;
    if data.len() != rows * cols {
        return Err(QspError::DimensionMismatch { expected: rows * cols, got: data.len() });
    }
    let masks: Vec<usize> = targets.iter().map(|&q| qubit_mask(n, q)).collect();
    let all: usize = masks.iter().sum();
    // Row offset of each local basis state, first target most significant.
    let offsets: Vec<usize> = (0..gdim)
        .map(|local| {
            masks
                .iter()
                .enumerate()
                .filter(|(i, _)| local >> (k - 1 - i) & 1 == 1)
                .map(|(_, m)| *m)
                .sum()
        })
        .collect();
    let mut scratch = vec![Cplx::<T>::default(); gdim];
    for base in 0..rows {
        if base & all != 0 {
            continue;
        }
        for col in 0..cols {
            for (s, off) in scratch.iter_mut().zip(&offsets) {
                *s = data[(base + off) * cols + col];
            }
            for (r, off) in offsets.iter().enumerate() {
                let row = &gate[r * gdim..(r + 1) * gdim];
                let mut acc = Cplx::<T>::default();
                for (g, s) in row.iter().zip(&scratch) {
                    acc = acc + *g * *s;
                }
                data[(base + off) * cols + col] = acc;
            }
        }
    }
    Ok(())
}

pub(crate) fn check_targets(n: usize, targets: &[usize]) -> Result<()> {
    if targets.is_empty() || targets.len() > 2 {
        return Err(QspError::DimensionMismatch { expected: 1, got: targets.len() });
    }
    for (i, &q) in targets.iter().enumerate() {
        if q >= n {
            return Err(QspError::QubitOutOfRange { index: q, n_qubits: n });
        }
        if targets[..i].contains(&q) {
            return Err(QspError::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// Multiplies every row whose `q` bit is set by `phase1`, others by `phase0`.
pub(crate) fn diag1_rows<T: Real>(
    data: &mut [Cplx<T>],
    cols: usize,
    n: usize,
    q: usize,
    phase0: Cplx<T>,
    phase1: Cplx<T>,
) {
    let mask = qubit_mask(n, q);
    for (row, chunk) in data.chunks_exact_mut(cols).enumerate() {
        let p = if row & mask == 0 { phase0 } else { phase1 };
        for v in chunk {
            *v = *v * p;
        }
    }
}

/// Swaps row pairs that differ in the target bit when the control bit is set.
pub(crate) fn cnot_rows<T: Real>(data: &mut [Cplx<T>], cols: usize, n: usize, ctrl: usize, tgt: usize) {
    let cm = qubit_mask(n, ctrl);
    let tm = qubit_mask(n, tgt);
    for row in 0..(1usize << n) {
        if row & cm != 0 && row & tm == 0 {
            let other = row | tm;
            for col in 0..cols {
                data.swap(row * cols + col, other * cols + col);
            }
        }
    }
}

/// Pauli-X on qubit `q`: swaps row pairs differing in that bit.
pub(crate) fn x_rows<T: Real>(data: &mut [Cplx<T>], cols: usize, n: usize, q: usize) {
    let m = qubit_mask(n, q);
    for row in 0..(1usize << n) {
        if row & m == 0 {
            for col in 0..cols {
                data.swap(row * cols + col, (row | m) * cols + col);
            }
        }
    }
}
