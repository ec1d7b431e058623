//! Dense complex linear algebra and state evolution.
//!
//! Qubit 0 is the most significant bit of a basis index: on `n` qubits,
//! qubit `q` corresponds to bit `n - 1 - q`.

pub mod gates;
mod kernel;
mod matrix;
mod state;

pub use kernel::apply_to_rows;

pub(crate) mod kernel_ops {
    pub(crate) use super::kernel::{cnot_rows, diag1_rows, x_rows};
}
pub use matrix::{kron, UnitaryMatrix};
pub use state::{inner_product, ProbabilityDistribution, StateVector};

/// Upper bound on register width for dense simulation.
pub const MAX_QUBITS: usize = 16;

/// Bit mask of qubit `q` within an `n`-qubit basis index.
#[inline]
pub fn qubit_mask(n: usize, q: usize) -> usize {
    1usize << (n - 1 - q)
}

/// `log2(len)` when `len` is a power of two.
pub fn log2_exact(len: usize) -> Option<usize> {
    if len == 0 || !len.is_power_of_two() {
        None
    } else {
        Some(len.trailing_zeros() as usize)
    }
}

#[cfg(test)]
mod tests;
