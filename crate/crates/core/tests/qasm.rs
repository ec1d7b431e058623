use srbb_qsp::circuit::{from_qasm, to_qasm, GateTag};
use srbb_qsp::exact::exact_prepare;
use srbb_qsp::qcore::StateVector;
use srbb_qsp::statelib::{realize, BellVariant, StateSpec};
use srbb_qsp::{Circuit64, C64};

const BELL_MINUS: &str = include_str!("data/bell_minus.qasm");

fn bell_minus() -> StateVector<f64> {
    realize(&StateSpec::Bell { n: 2, variant: BellVariant::PhiMinus }).unwrap()
}

#[test]
fn bell_minus_matches_golden() {
    let prep = exact_prepare(bell_minus().amplitudes()).unwrap();
    let text = to_qasm(&prep.circuit).unwrap();
    if std::env::var_os("SRBB_BLESS").is_some() {
        std::fs::write(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/bell_minus.qasm"), &text).unwrap();
    }
    assert_eq!(text, BELL_MINUS);
}

#[test]
fn golden_file_prepares_bell_minus() {
    let circ: Circuit64 = from_qasm(BELL_MINUS).unwrap();
    let out = circ.run(&StateVector::zero(2)).unwrap();
    assert!(out.max_abs_diff(&bell_minus()) < 1e-12);
    assert_eq!(circ.gates().iter().filter(|g| g.tag == GateTag::PhaseTail).count(), 4);
    let st = circ.stats();
    assert_eq!((st.n_cnot, st.n_rot), (4, 7));
}

#[test]
fn round_trip_preserves_exact_circuits() {
    for n in 2..=4 {
        let psi = realize::<f64>(&StateSpec::HaarRandom { n, seed: 3 }).unwrap();
        let prep = exact_prepare(psi.amplitudes()).unwrap();
        let back: Circuit64 = from_qasm(&to_qasm(&prep.circuit).unwrap()).unwrap();
        assert_eq!(back, prep.circuit);
        let out = back.run(&StateVector::zero(n)).unwrap();
        assert!(out.max_abs_diff(&psi) < 1e-9);
    }
}

#[test]
fn reader_accepts_comments_and_blank_lines() {
    let text = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n\n// prepared by hand\nqubit[2] q;\nh q[0];\ncx q[0], q[1];\n";
    let circ: Circuit64 = from_qasm(text).unwrap();
    let out = circ.run(&StateVector::zero(2)).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!((out.amplitudes()[3] - C64::new(r, 0.0)).norm() < 1e-15);
}
