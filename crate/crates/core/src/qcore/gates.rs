//! Standard gate matrices.

use crate::real::{c, cis, cre, Cplx, Real};

use super::UnitaryMatrix;

fn m2<T: Real>(e: [Cplx<T>; 4]) -> UnitaryMatrix<T> {
    UnitaryMatrix::from_row_major(2, e.to_vec()).expect("2x2 gate")
}

pub fn identity2<T: Real>() -> UnitaryMatrix<T> {
    UnitaryMatrix::identity(2)
}

pub fn pauli_x<T: Real>() -> UnitaryMatrix<T> {
    let (o, z) = (cre(T::one()), Cplx::default());
    m2([z, o, o, z])
}

pub fn pauli_z<T: Real>() -> UnitaryMatrix<T> {
    let (o, z) = (cre(T::one()), Cplx::default());
    m2([o, z, z, -o])
}

pub fn hadamard<T: Real>() -> UnitaryMatrix<T> {
    let h = cre(T::FRAC_1_SQRT_2());
    m2([h, h, h, -h])
}

pub fn s_gate<T: Real>() -> UnitaryMatrix<T> {
    let (o, z) = (cre(T::one()), Cplx::default());
    m2([o, z, z, c(T::zero(), T::one())])
}

pub fn sdg_gate<T: Real>() -> UnitaryMatrix<T> {
    let (o, z) = (cre(T::one()), Cplx::default());
    m2([o, z, z, c(T::zero(), -T::one())])
}

/// `diag(e^{-i·theta/2}, e^{i·theta/2})`.
pub fn rz<T: Real>(theta: T) -> UnitaryMatrix<T> {
    let half = theta / T::lit(2.0);
    m2([cis(-half), Cplx::default(), Cplx::default(), cis(half)])
}

/// `[[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]`.
pub fn ry<T: Real>(theta: T) -> UnitaryMatrix<T> {
    let half = theta / T::lit(2.0);
    let (s, co) = (half.sin(), half.cos());
    m2([cre(co), cre(-s), cre(s), cre(co)])
}

/// `diag(1, e^{i·phi})`.
pub fn phase_shift<T: Real>(phi: T) -> UnitaryMatrix<T> {
    m2([cre(T::one()), Cplx::default(), Cplx::default(), cis(phi)])
}

/// Controlled-X in the basis `|control target⟩`.
pub fn cnot<T: Real>() -> UnitaryMatrix<T> {
    let (o, z) = (cre(T::one()), Cplx::default());
    UnitaryMatrix::from_row_major(
        4,
        vec![o, z, z, z, z, o, z, z, z, z, z, o, z, z, o, z],
    )
    .expect("4x4 gate")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ry_from_dressed_rz() {
        // S·H·Rz(g)·H·S† = Ry(g)
        for &g in &[0.0, 0.3, -1.7, 2.9f64] {
            let lhs = &(&(&s_gate() * &hadamard()) * &rz(g)) * &(&hadamard() * &sdg_gate());
            assert!(lhs.max_abs_diff(&ry(g)) < 1e-14);
        }
    }

    #[test]
    fn all_gates_unitary() {
        let gates: Vec<UnitaryMatrix<f64>> =
            vec![pauli_x(), pauli_z(), hadamard(), s_gate(), sdg_gate(), rz(0.4), ry(1.1), phase_shift(-0.8), cnot()];
        for g in gates {
            assert!(g.is_unitary(1e-14));
        }
    }
}
