use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gates::*;
use super::*;
use crate::error::QspError;
use crate::real::{c, Cplx};
use crate::statelib::haar_state;

const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn cv(v: &[(f64, f64)]) -> Vec<Cplx<f64>> {
    v.iter().map(|&(r, i)| c(r, i)).collect()
}

#[test]
fn x_flips_zero() {
    let s = StateVector::<f64>::zero(1).apply_gate(&pauli_x(), &[0]).unwrap();
    assert_eq!(s, StateVector::basis(1, 1));
}

#[test]
fn identity_leaves_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let psi = haar_state::<f64>(3, &mut rng);
    let out = psi.apply_gate(&identity2(), &[1]).unwrap();
    assert!(out.max_abs_diff(&psi) < 1e-15);
}

#[test]
fn cnot_builds_bell_pair() {
    let input = StateVector::new(cv(&[(S2, 0.0), (0.0, 0.0), (S2, 0.0), (0.0, 0.0)])).unwrap();
    let out = input.apply_gate(&cnot(), &[0, 1]).unwrap();
    let bell = StateVector::new(cv(&[(S2, 0.0), (0.0, 0.0), (0.0, 0.0), (S2, 0.0)])).unwrap();
    assert!(out.max_abs_diff(&bell) < 1e-15);
}

#[test]
fn apply_gate_errors() {
    let s = StateVector::<f64>::zero(2);
    assert!(matches!(s.apply_gate(&pauli_x(), &[2]), Err(QspError::QubitOutOfRange { .. })));
    assert!(matches!(s.apply_gate(&cnot(), &[1, 1]), Err(QspError::DuplicateQubit(1))));
    assert!(matches!(s.apply_gate(&cnot(), &[0]), Err(QspError::DimensionMismatch { .. })));
    assert!(matches!(s.apply_gate(&pauli_x(), &[0, 1]), Err(QspError::DimensionMismatch { .. })));
}


#[test]
fn inner_product_examples() {
    let zero = StateVector::<f64>::zero(1);
    let one = StateVector::<f64>::basis(1, 1);
    let plus = StateVector::<f64>::from_real(&[1.0, 1.0]).unwrap();
    assert!((inner_product(&plus, &plus).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    assert_eq!(inner_product(&zero, &one).unwrap(), c(0.0, 0.0));
    assert!((inner_product(&zero, &plus).unwrap().re - S2).abs() < 1e-15);
    assert!(inner_product(&zero, &StateVector::zero(2)).is_err());
}

#[test]
fn inner_product_conjugates_first_argument() {
    let a = StateVector::new(cv(&[(0.0, 1.0), (0.0, 0.0)])).unwrap();
    let b = StateVector::<f64>::zero(1);
    assert!((inner_product(&a, &b).unwrap() - c(0.0, -1.0)).norm() < 1e-15);
}

#[test]
fn probabilities_examples() {
    assert_eq!(StateVector::<f64>::zero(1).probabilities().probs(), &[1.0, 0.0]);
    let plus = StateVector::<f64>::from_real(&[1.0, 1.0]).unwrap();
    for p in plus.probabilities().probs() {
        assert!((p - 0.5).abs() < 1e-15);
    }
    let ex = StateVector::from_real(&[0.1f64.sqrt(), 0.2f64.sqrt(), 0.4f64.sqrt(), 0.3f64.sqrt()]).unwrap();
    for (p, want) in ex.probabilities().probs().iter().zip([0.1, 0.2, 0.4, 0.3]) {
        assert!((p - want).abs() < 1e-15);
    }
}

#[test]
fn kron_examples() {
    let i4 = kron(&identity2::<f64>(), &identity2());
    assert_eq!(i4, UnitaryMatrix::identity(4));
    let zi = kron(&pauli_z::<f64>(), &identity2());
    let want = UnitaryMatrix::from_diagonal(&cv(&[(1.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)])).unwrap();
    assert_eq!(zi, want);
    let hh = kron(&hadamard::<f64>(), &hadamard());
    let out = StateVector::zero(2).evolve(&hh).unwrap();
    for a in out.amplitudes() {
        assert!((a - c(0.5, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn state_constructor_rejects_bad_input() {
    assert!(matches!(StateVector::<f64>::new(cv(&[(1.0, 0.0); 3])), Err(QspError::NotPowerOfTwo(3))));
    assert!(matches!(StateVector::<f64>::new(cv(&[(0.0, 0.0); 2])), Err(QspError::ZeroVector)));
    assert!(matches!(StateVector::<f64>::new(cv(&[(f64::NAN, 0.0), (1.0, 0.0)])), Err(QspError::NonFinite(_))));
    let s = StateVector::<f64>::new(cv(&[(3.0, 0.0), (0.0, 4.0)])).unwrap();
    assert!((s.norm() - 1.0).abs() < 1e-15);
}

#[test]
fn determinant_of_known_matrices() {
    let d = cnot::<f64>().determinant();
    assert!((d - c(-1.0, 0.0)).norm() < 1e-15);
    let d = kron(&s_gate::<f64>(), &hadamard()).determinant();
    // det(A⊗B) = det(A)^2 det(B)^2 for 2x2 factors: (i)^2 (-1)^2 = -1
    assert!((d - c(-1.0, 0.0)).norm() < 1e-14);
}

fn random_u2(rng: &mut ChaCha8Rng) -> UnitaryMatrix<f64> {
    let (a, b, g) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
    &(&rz(a) * &ry(b)) * &(&rz(g) * &phase_shift(rng.gen_range(-3.0..3.0)))
}

fn embed(n: usize, gate: &UnitaryMatrix<f64>, q: usize) -> UnitaryMatrix<f64> {
    let left = UnitaryMatrix::identity(1 << q);
    let right = UnitaryMatrix::identity(1 << (n - 1 - q));
    kron(&kron(&left, gate), &right)
}

#[test]
fn norm_preserved_over_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..10_000 {
        let n = 1 + i % 5;
        let psi = haar_state::<f64>(n, &mut rng);
        let out = if n >= 2 && i % 2 == 0 {
            let a = rng.gen_range(0..n);
            let b = (a + 1 + rng.gen_range(0..n - 1)) % n;
            let g4 = kron(&random_u2(&mut rng), &random_u2(&mut rng)).matmul(&cnot()).unwrap();
            psi.apply_gate(&g4, &[a, b]).unwrap()
        } else {
            psi.apply_gate(&random_u2(&mut rng), &[rng.gen_range(0..n)]).unwrap()
        };
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn single_qubit_application_matches_kron_embedding() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=3 {
        for q in 0..n {
            let g = random_u2(&mut rng);
            let psi = haar_state::<f64>(n, &mut rng);
            let direct = psi.apply_gate(&g, &[q]).unwrap();
            let full = psi.evolve(&embed(n, &g, q)).unwrap();
            assert!(direct.max_abs_diff(&full) < 1e-12);
        }
    }
}

#[test]
fn composition_matches_matrix_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 1..=3 {
        for _ in 0..20 {
            let (qa, qb) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let (ga, gb) = (random_u2(&mut rng), random_u2(&mut rng));
            let psi = haar_state::<f64>(n, &mut rng);
            let seq = psi.apply_gate(&ga, &[qa]).unwrap().apply_gate(&gb, &[qb]).unwrap();
            let prod = embed(n, &gb, qb).matmul(&embed(n, &ga, qa)).unwrap();
            assert!(seq.max_abs_diff(&psi.evolve(&prod).unwrap()) < 1e-10);
        }
    }
}

proptest! {
    #[test]
    fn two_qubit_gate_on_reversed_wires(seed in 0u64..500) {
        // CNOT(1,0) equals (H⊗H)·CNOT(0,1)·(H⊗H)
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = haar_state::<f64>(2, &mut rng);
        let a = psi.apply_gate(&cnot(), &[1, 0]).unwrap();
        let hh = kron(&hadamard(), &hadamard());
        let b = psi.evolve(&hh).unwrap().apply_gate(&cnot(), &[0, 1]).unwrap().evolve(&hh).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
    }
}
