//! Small dense real solvers.

use crate::real::Real;

/// Row-major real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix<T: Real> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Real> RealMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        self.data
            .chunks_exact(self.cols)
            .map(|row| crate::real::compensated_sum(row.iter().zip(x).map(|(a, b)| *a * *b)))
            .collect()
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Rank by Gaussian elimination with partial pivoting.
    pub fn rank(&self, tol: T) -> usize {
        let mut a = self.data.clone();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..n {
            if rank == m {
                break;
            }
            let pivot = (rank..m)
                .max_by(|&x, &y| a[x * n + col].abs().partial_cmp(&a[y * n + col].abs()).unwrap())
                .unwrap();
            if a[pivot * n + col].abs() <= tol {
                continue;
            }
            for c in 0..n {
                a.swap(pivot * n + c, rank * n + c);
            }
            let p = a[rank * n + col];
            for r in rank + 1..m {
                let f = a[r * n + col] / p;
                if f != T::zero() {
                    for c in col..n {
                        let v = a[rank * n + c];
                        a[r * n + c] -= f * v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Minimizes `‖A·x − b‖₂` for a full-column-rank `A` via Householder QR.
///
/// Returns `None` if a diagonal entry of `R` vanishes.
pub fn least_squares<T: Real>(a: &RealMatrix<T>, b: &[T]) -> Option<Vec<T>> {
    let (m, n) = (a.rows, a.cols);
    assert_eq!(b.len(), m);
    assert!(m >= n);
    let mut r = a.data.clone();
    let mut y = b.to_vec();
    for k in 0..n {
        let norm = (k..m).map(|i| r[i * n + k] * r[i * n + k]).sum::<T>().sqrt();
        if norm == T::zero() {
            return None;
        }
        let alpha = if r[k * n + k] > T::zero() { -norm } else { norm };
        let mut v: Vec<T> = (k..m).map(|i| r[i * n + k]).collect();
        v[0] -= alpha;
        let vnorm2: T = v.iter().map(|x| *x * *x).sum();
        if vnorm2 == T::zero() {
            continue;
        }
        let two = T::lit(2.0);
        for c in k..n {
            let dot: T = (k..m).map(|i| v[i - k] * r[i * n + c]).sum();
            let f = two * dot / vnorm2;
            for i in k..m {
                r[i * n + c] -= f * v[i - k];
            }
        }
        let dot: T = (k..m).map(|i| v[i - k] * y[i]).sum();
        let f = two * dot / vnorm2;
        for i in k..m {
            y[i] -= f * v[i - k];
        }
    }
    let scale = (0..n).map(|k| r[k * n + k].abs()).fold(T::zero(), T::max);
    let mut x = vec![T::zero(); n];
    for k in (0..n).rev() {
        let d = r[k * n + k];
        if d.abs() <= scale * T::epsilon() * T::from_usize_lossy(m) {
            return None;
        }
        let s: T = (k + 1..n).map(|c| r[k * n + c] * x[c]).sum();
        x[k] = (y[k] - s) / d;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overdetermined_consistent_system() {
        let a = RealMatrix { rows: 3, cols: 2, data: vec![1.0, 0.0, 0.0, 1.0, 1.0, 1.0f64] };
        let x = least_squares(&a, &[2.0, 3.0, 5.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-14 && (x[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn least_squares_fit() {
        // best fit of a constant to [1, 2, 6] is the mean
        let a = RealMatrix { rows: 3, cols: 1, data: vec![1.0, 1.0, 1.0f64] };
        let x = least_squares(&a, &[1.0, 2.0, 6.0]).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rank_detects_dependency() {
        let a = RealMatrix { rows: 3, cols: 3, data: vec![1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0f64] };
        assert_eq!(a.rank(1e-12), 2);
        assert!(least_squares(&a, &[1.0, 2.0, 0.0]).is_none());
    }
}
