use proptest::prelude::*;

use super::*;

fn dist(v: &[f64]) -> ProbabilityDistribution<f64> {
    ProbabilityDistribution::new(v.to_vec()).unwrap()
}

fn real_amps(s: &StateVector<f64>) -> Vec<f64> {
    assert!(s.amplitudes().iter().all(|z| z.im == 0.0));
    s.amplitudes().iter().map(|z| z.re).collect()
}

#[test]
fn named_states_exact() {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let bell = realize::<f64>(&StateSpec::Bell { n: 2, variant: BellVariant::PhiPlus }).unwrap();
    assert_eq!(real_amps(&bell), vec![r, 0.0, 0.0, r]);
    let uni = realize::<f64>(&StateSpec::Uniform { n: 2 }).unwrap();
    assert_eq!(real_amps(&uni), vec![0.5; 4]);
    let ghz = realize::<f64>(&StateSpec::Ghz { n: 3 }).unwrap();
    assert_eq!(real_amps(&ghz), vec![r, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, r]);
    let psi_minus = realize::<f64>(&StateSpec::Bell { n: 2, variant: BellVariant::PsiMinus }).unwrap();
    assert_eq!(real_amps(&psi_minus), vec![0.0, r, -r, 0.0]);
    let e5 = realize::<f64>(&StateSpec::Basis { n: 3, index: 5 }).unwrap();
    assert_eq!(e5, StateVector::basis(3, 5));
}

#[test]
fn uniform_three_qubits_is_one_over_root_eight() {
    let u = realize::<f64>(&StateSpec::Uniform { n: 3 }).unwrap();
    for a in real_amps(&u) {
        assert!((a - 0.125f64.sqrt()).abs() < 1e-16);
    }
}

#[test]
fn benchmark_states_realize() {
    let states = benchmark_states();
    assert_eq!(states.len(), 13);
    let counts = [2, 3, 4].map(|n| states.iter().filter(|(_, s)| s.n() == n).count());
    assert_eq!(counts, [5, 5, 3]);
    for (label, spec) in &states {
        let s = realize::<f64>(spec).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15, "{label}");
    }
}

#[test]
fn realize_errors() {
    assert!(realize::<f64>(&StateSpec::Bell { n: 3, variant: BellVariant::PhiPlus }).is_err());
    assert!(realize::<f64>(&StateSpec::Basis { n: 2, index: 4 }).is_err());
    assert!(realize::<f64>(&StateSpec::Uniform { n: 0 }).is_err());
    assert_eq!(realize::<f64>(&StateSpec::Explicit { n: 1, entries: vec![[0.0, 0.0]; 2] }), Err(QspError::ZeroVector));
    assert!(matches!(
        realize::<f64>(&StateSpec::Explicit { n: 1, entries: vec![[1.0, 0.0], [1.0, 0.0]] }),
        Err(QspError::NotNormalized { .. })
    ));
    assert!(realize::<f64>(&StateSpec::Explicit { n: 2, entries: vec![[1.0, 0.0]] }).is_err());
    assert!(realize::<f64>(&StateSpec::Sparse { n: 1, entries: vec![(2, 1.0, 0.0)] }).is_err());
}

#[test]
fn explicit_and_sparse() {
    let e = realize::<f64>(&StateSpec::Explicit { n: 1, entries: vec![[0.6, 0.0], [0.0, 0.8]] }).unwrap();
    assert_eq!(e.amplitudes()[1], Cplx::new(0.0, 0.8));
    let s = realize::<f64>(&StateSpec::Sparse { n: 2, entries: vec![(0, 0.6, 0.0), (3, 0.0, -0.8)] }).unwrap();
    assert_eq!(s.amplitudes()[3], Cplx::new(0.0, -0.8));
    assert_eq!(s.amplitudes()[1], Cplx::new(0.0, 0.0));
}

#[test]
fn spec_json_field_names() {
    let spec: StateSpec = serde_json::from_str(r#"{"kind":"explicit","n":1,"entries":[[0.6,0.0],[0.0,0.8]]}"#).unwrap();
    assert_eq!(spec, StateSpec::Explicit { n: 1, entries: vec![[0.6, 0.0], [0.0, 0.8]] });
    let spec: StateSpec = serde_json::from_str(r#"{"kind":"bell"}"#).unwrap();
    assert_eq!(spec, StateSpec::Bell { n: 2, variant: BellVariant::PhiPlus });
    let spec: StateSpec = serde_json::from_str(r#"{"kind":"haar_random","n":3,"seed":7}"#).unwrap();
    assert_eq!(spec.n(), 3);
    let spec: StateSpec = serde_json::from_str(r#"{"kind":"sparse","n":2,"entries":[[0,0.5,0.0],[3,-0.5,0.0]]}"#).unwrap();
    let back: StateSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
    assert_eq!(back, spec);
}

#[test]
fn haar_realize_is_deterministic() {
    let spec = StateSpec::HaarRandom { n: 4, seed: 99 };
    assert_eq!(realize::<f64>(&spec).unwrap(), realize::<f64>(&spec).unwrap());
    assert_ne!(realize::<f64>(&spec).unwrap(), realize::<f64>(&StateSpec::HaarRandom { n: 4, seed: 98 }).unwrap());
}

#[test]
fn corpus_independent_of_thread_count() {
    let a = haar_corpus::<f64>(3, 64, 5);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| haar_corpus::<f64>(3, 64, 5));
    assert_eq!(corpus_hash(&a), corpus_hash(&b));
    assert_ne!(a[0], a[1]);
}

#[test]
fn hellinger_examples() {
    let p = dist(&[0.2, 0.3, 0.5]);
    assert_eq!(hellinger(&p, &p).unwrap(), 0.0);
    assert!((hellinger(&dist(&[1.0, 0.0]), &dist(&[0.0, 1.0])).unwrap() - 1.0).abs() < 1e-15);
    let h = hellinger(&dist(&[1.0, 0.0]), &dist(&[0.5, 0.5])).unwrap();
    assert!((h - (1.0 - std::f64::consts::FRAC_1_SQRT_2).sqrt()).abs() < 1e-15);
    assert!((h - 0.5412).abs() < 1e-4);
    assert!(hellinger(&dist(&[1.0]), &dist(&[0.5, 0.5])).is_err());
}

#[test]
fn haar_mean_examples() {
    let s = haar_mean_check(2, 10_000, 2024).unwrap();
    assert!(s.means.iter().all(|m| (m - 0.25).abs() < 0.01));
    assert!(s.within_three_se);
    let s1 = haar_mean_check(1, 4000, 1).unwrap();
    assert!((s1.means[0] + s1.means[1] - 1.0).abs() < 1e-12);
    assert!((s1.means[0] - 0.5).abs() < 3.0 * s1.std_errors[0] + 1e-12);
    let again = haar_mean_check(2, 10_000, 2024).unwrap();
    assert_eq!(s.corpus_hash, again.corpus_hash);
    assert!(haar_mean_check(2, 50, 0).is_err());
}

fn random_dist(raw: &[f64]) -> ProbabilityDistribution<f64> {
    let s: f64 = raw.iter().sum();
    ProbabilityDistribution::new(raw.iter().map(|x| x / s).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn hellinger_axioms(
        a in prop::collection::vec(0.01f64..1.0, 4),
        b in prop::collection::vec(0.01f64..1.0, 4),
        c in prop::collection::vec(0.01f64..1.0, 4),
    ) {
        let (p, q, r) = (random_dist(&a), random_dist(&b), random_dist(&c));
        let pq = hellinger(&p, &q).unwrap();
        prop_assert!((pq - hellinger(&q, &p).unwrap()).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&pq));
        prop_assert!(pq <= hellinger(&p, &r).unwrap() + hellinger(&r, &q).unwrap() + 1e-12);
        prop_assert!(hellinger(&p, &p).unwrap() <= 1e-12);
    }
}
