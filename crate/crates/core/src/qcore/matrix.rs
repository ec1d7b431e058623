use std::ops::Mul;

use crate::error::{QspError, Result};
use crate::real::{cre, Cplx, Real};

use super::{apply_to_rows, log2_exact};

/// Square complex matrix of power-of-two dimension, stored row-major.
///
/// Used for gate and circuit unitaries. Unitarity is not enforced on
/// construction; see [`UnitaryMatrix::is_unitary`].
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix<T: Real> {
    dim: usize,
    entries: Vec<Cplx<T>>,
}

impl<T: Real> UnitaryMatrix<T> {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Cplx::default(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = cre(T::one());
        }
        Self { dim, entries }
    }

    pub fn from_row_major(dim: usize, entries: Vec<Cplx<T>>) -> Result<Self> {
        if log2_exact(dim).is_none() {
            return Err(QspError::NotPowerOfTwo(dim));
        }
        if entries.len() != dim * dim {
            return Err(QspError::DimensionMismatch { expected: dim * dim, got: entries.len() });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QspError::NonFinite("matrix entry".into()));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_diagonal(diag: &[Cplx<T>]) -> Result<Self> {
        let dim = diag.len();
        let mut m = Self::from_row_major(dim, vec![Cplx::default(); dim * dim])?;
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * dim + i] = *d;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> Cplx<T> {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Cplx<T>] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [Cplx<T>] {
        &mut self.entries
    }

    pub fn diagonal(&self) -> Vec<Cplx<T>> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut entries = vec![Cplx::default(); d * d];
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.entries[r * d + c].conj();
            }
        }
        Self { dim: d, entries }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(QspError::DimensionMismatch { expected: self.dim, got: rhs.dim });
        }
        let d = self.dim;
        let mut entries = vec![Cplx::default(); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..d {
                    entries[r * d + c] = entries[r * d + c] + a * rhs.entries[k * d + c];
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    pub fn apply(&self, v: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        if v.len() != self.dim {
            return Err(QspError::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(self
            .entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).fold(Cplx::default(), |acc, (a, b)| acc + *a * *b))
            .collect())
    }

    pub fn scale(&self, s: Cplx<T>) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| *z * s).collect() }
    }

    /// Left-multiplies in place by a 1- or 2-qubit gate on `targets`.
    pub fn apply_gate(&mut self, gate: &UnitaryMatrix<T>, targets: &[usize]) -> Result<()> {
        let n = self.n_qubits();
        apply_to_rows(&mut self.entries, self.dim, n, &gate.entries, targets)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest modulus among off-diagonal entries.
    pub fn max_off_diagonal(&self) -> T {
        let d = self.dim;
        let mut m = T::zero();
        for r in 0..d {
            for c in 0..d {
                if r != c {
                    m = m.max(self.entries[r * d + c].norm());
                }
            }
        }
        m
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        match self.matmul(&self.adjoint()) {
            Ok(p) => p.max_abs_diff(&Self::identity(self.dim)) < tol,
            Err(_) => false,
        }
    }

    pub fn frobenius_norm(&self) -> T {
        crate::real::compensated_sum(self.entries.iter().map(|z| z.norm_sqr())).sqrt()
    }

    pub fn trace(&self) -> Cplx<T> {
        (0..self.dim).fold(Cplx::default(), |acc, i| acc + self.get(i, i))
    }

    /// Determinant by LU factorization with partial pivoting.
    pub fn determinant(&self) -> Cplx<T> {
        let d = self.dim;
        let mut a = self.entries.clone();
        let mut det = cre(T::one());
        for col in 0..d {
            let pivot = (col..d)
                .max_by(|&x, &y| a[x * d + col].norm().partial_cmp(&a[y * d + col].norm()).unwrap())
                .unwrap();
            let p = a[pivot * d + col];
            if p.norm() == T::zero() {
                return Cplx::default();
            }
            if pivot != col {
                for c in 0..d {
                    a.swap(pivot * d + c, col * d + c);
                }
                det = -det;
            }
            det = det * p;
            for r in col + 1..d {
                let f = a[r * d + col] / p;
                for c in col..d {
                    let v = a[col * d + c];
                    a[r * d + c] = a[r * d + c] - f * v;
                }
            }
        }
        det
    }
}

impl<T: Real> Mul for &UnitaryMatrix<T> {
    type Output = UnitaryMatrix<T>;

    fn mul(self, rhs: Self) -> UnitaryMatrix<T> {
        self.matmul(rhs).expect("matrix dimensions agree")
    }
}

/// Kronecker product; `a` acts on the more significant qubits.
pub fn kron<T: Real>(a: &UnitaryMatrix<T>, b: &UnitaryMatrix<T>) -> UnitaryMatrix<T> {
    let (da, db) = (a.dim, b.dim);
    let d = da * db;
    let mut entries = vec![Cplx::default(); d * d];
    for ar in 0..da {
        for ac in 0..da {
            let x = a.entries[ar * da + ac];
            for br in 0..db {
                for bc in 0..db {
                    entries[(ar * db + br) * d + ac * db + bc] = x * b.entries[br * db + bc];
                }
            }
        }
    }
    UnitaryMatrix { dim: d, entries }
}
