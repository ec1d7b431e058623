use srbb_qsp::statelib::StateSpec;
use srbb_qsp_cli::bench::{run_bench, BenchTable};
use srbb_qsp_cli::commands::{
    analyze, exact_prepare_run, export_qasm, replay, simulate_qasm, simulate_record, train_run,
};
use srbb_qsp_cli::config::{BenchSettings, GridEntry, Loss, Optimizer, TrainSettings};
use srbb_qsp_cli::{parse_n_range, CliConfig, CliError, RunRecord};

fn worked_example_spec() -> StateSpec {
    let entries = [0.1f64, 0.2, 0.4, 0.3].iter().map(|p| [p.sqrt(), 0.0]).collect();
    StateSpec::Explicit { n: 2, entries }
}

fn adam_trace() -> TrainSettings {
    TrainSettings { optimizer: Optimizer::Adam, loss: Some(Loss::Trace), ..TrainSettings::default() }
}

#[test]
fn analyze_rows_match_closed_forms() {
    let rows = analyze(&[2, 3]).unwrap();
    let triple = |i: usize| (rows[i].predicted.depth, rows[i].predicted.n_rot, rows[i].predicted.n_cnot);
    assert_eq!(triple(0), (12, 7, 4));
    assert_eq!(triple(1), (30, 18, 14));
    let all = analyze(&(2..=8).collect::<Vec<_>>()).unwrap();
    assert!(all.iter().all(|r| r.pass), "{all:?}");
}

#[test]
fn analyze_rejects_out_of_range_n() {
    assert!(matches!(analyze(&[1]), Err(CliError::Validation(_))));
    assert!(matches!(analyze(&[13]), Err(CliError::Validation(_))));
}

#[test]
fn n_range_syntax() {
    assert_eq!(parse_n_range("5").unwrap(), vec![5]);
    assert_eq!(parse_n_range("2-4").unwrap(), vec![2, 3, 4]);
    assert_eq!(parse_n_range("2..=4").unwrap(), vec![2, 3, 4]);
    assert_eq!(parse_n_range("2..4").unwrap(), vec![2, 3]);
    assert_eq!(parse_n_range("2,5").unwrap(), vec![2, 5]);
    assert!(parse_n_range("4-2").is_err());
    assert!(parse_n_range("x").is_err());
}

#[test]
fn exact_prepare_worked_example_and_basis() {
    let p = exact_prepare_run(&worked_example_spec()).unwrap();
    assert!(p.metrics().final_error < 1e-9, "{}", p.metrics().final_error);
    assert!(p.metrics().converged);
    let p = exact_prepare_run(&StateSpec::Basis { n: 3, index: 5 }).unwrap();
    assert!(p.metrics().final_error < 1e-12);
}

#[test]
fn exact_prepare_ghz_probabilities() {
    let p = exact_prepare_run(&StateSpec::Ghz { n: 3 }).unwrap();
    let out = p.metrics().output().unwrap();
    let probs = out.probabilities();
    for (i, q) in probs.probs().iter().enumerate() {
        let want = if i == 0 || i == 7 { 0.5 } else { 0.0 };
        assert!((q - want).abs() < 1e-9, "p[{i}] = {q}");
    }
}

#[test]
fn exact_prepare_rejects_unnormalized_spec() {
    let spec = StateSpec::Explicit { n: 2, entries: vec![[1.0, 0.0]; 4] };
    assert!(matches!(exact_prepare_run(&spec), Err(CliError::Validation(_))));
}

#[test]
fn train_nelder_mead_two_qubits() {
    let p = train_run(&StateSpec::HaarRandom { n: 2, seed: 11 }, &TrainSettings::default(), 11).unwrap();
    assert!(p.metrics().final_error <= 1e-10, "{}", p.metrics().final_error);
    assert_eq!(p.stages.len(), 2);
}

#[test]
fn train_adam_trace_two_qubits() {
    let p = train_run(&StateSpec::HaarRandom { n: 2, seed: 12 }, &adam_trace(), 12).unwrap();
    let e = p.metrics().final_error;
    assert!((1e-5..1e-2).contains(&e), "{e}");
}

#[test]
fn train_is_deterministic_and_replayable() {
    let spec = StateSpec::HaarRandom { n: 2, seed: 5 };
    let a = train_run(&spec, &adam_trace(), 5).unwrap();
    let b = train_run(&spec, &adam_trace(), 5).unwrap();
    assert_eq!(a.record.metrics, b.record.metrics);
    assert_eq!(a.params, b.params);
    let again = replay(&a.record).unwrap();
    let (m, r) = (a.metrics(), again.metrics());
    assert!((m.final_error - r.final_error).abs() < 1e-12);
    assert!((m.hellinger - r.hellinger).abs() < 1e-12);
    assert_eq!((m.depth, m.n_cnot, m.n_rot), (r.depth, r.n_cnot, r.n_rot));
}

#[test]
fn train_rejects_nonstandard_pairing_unless_allowed() {
    let spec = StateSpec::HaarRandom { n: 2, seed: 1 };
    let mut s = TrainSettings { optimizer: Optimizer::Adam, loss: Some(Loss::Frobenius), ..TrainSettings::default() };
    assert!(matches!(train_run(&spec, &s, 1), Err(CliError::Validation(_))));
    s.allow_any_pairing = true;
    s.adam.epochs = Some(2);
    assert!(train_run(&spec, &s, 1).is_ok());
}

#[test]
fn train_below_budget_is_not_converged() {
    let mut s = TrainSettings::default();
    s.nelder_mead.max_evals = Some(20);
    s.nelder_mead.fresh_starts = Some(0);
    let p = train_run(&StateSpec::HaarRandom { n: 2, seed: 2 }, &s, 2).unwrap();
    assert!(!p.metrics().converged);
    assert!(srbb_qsp_cli::commands::check_converged(&p.record).is_err());
}

#[test]
fn record_round_trips_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let (record, path) = train_run(&StateSpec::HaarRandom { n: 3, seed: 9 }, &TrainSettings::default(), 9)
        .unwrap()
        .persist(dir.path())
        .unwrap();
    let loaded = RunRecord::load(&path).unwrap();
    assert_eq!(loaded, record);
    assert_eq!(loaded.seed, 9);
    let bits = |r: &RunRecord| r.metrics.as_ref().unwrap().output_state.iter().flatten().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&loaded), bits(&record));
    assert_eq!(loaded.to_json().unwrap(), record.to_json().unwrap());
}

#[test]
fn persisted_qasm_resimulates_to_recorded_state() {
    let dir = tempfile::tempdir().unwrap();
    for prepared in [
        exact_prepare_run(&worked_example_spec()).unwrap(),
        exact_prepare_run(&StateSpec::HaarRandom { n: 4, seed: 3 }).unwrap(),
        train_run(&StateSpec::HaarRandom { n: 2, seed: 4 }, &TrainSettings::default(), 4).unwrap(),
    ] {
        let (_, path) = prepared.persist(dir.path()).unwrap();
        let report = simulate_record(&path).unwrap();
        assert!(report.record_difference.unwrap() < 1e-10);
    }
}

#[test]
fn run_directories_are_distinct() {
    let dir = tempfile::tempdir().unwrap();
    let (_, a) = exact_prepare_run(&worked_example_spec()).unwrap().persist(dir.path()).unwrap();
    let (_, b) = exact_prepare_run(&worked_example_spec()).unwrap().persist(dir.path()).unwrap();
    assert_ne!(a.parent(), b.parent());
}

#[test]
fn exported_qasm_matches_params_file() {
    let dir = tempfile::tempdir().unwrap();
    let (record, path) = exact_prepare_run(&worked_example_spec()).unwrap().persist(dir.path()).unwrap();
    let params = path.parent().unwrap().join(record.artifacts.params.as_ref().unwrap());
    let text = export_qasm(None, Some(&params)).unwrap();
    let target = srbb_qsp::statelib::realize::<f64>(&worked_example_spec()).unwrap();
    let report = simulate_qasm(&text, Some(&target)).unwrap();
    assert!(report.trace_distance.unwrap() < 1e-9);
    assert_eq!(text, export_qasm(Some(&worked_example_spec()), None).unwrap());
    assert!(export_qasm(None, None).is_err());
}

#[test]
fn config_file_parses_with_defaults() {
    let cfg = CliConfig::parse(
        r#"
        seed = 7
        [train]
        optimizer = "adam"
        loss = "trace"
        [train.adam]
        epochs = 3
        [bench]
        trials = 2
        grid = [{ optimizer = "nelder-mead", loss = "frobenius" }]
        "#,
    )
    .unwrap();
    assert_eq!(cfg.seed, 7);
    assert_eq!(cfg.train.loss(), Loss::Trace);
    assert_eq!(cfg.train.adam.epochs, Some(3));
    assert_eq!(cfg.bench.n, vec![2, 3, 4]);
    assert_eq!(cfg.bench.trials, 2);
    assert!(matches!(CliConfig::parse("bogus = 1"), Err(CliError::Validation(_))));
}

#[test]
fn default_bench_covers_two_to_four_qubits() {
    let b = BenchSettings::default();
    assert_eq!(b.n, vec![2, 3, 4]);
    assert_eq!(b.trials, 5);
}

#[test]
fn bench_table_schema_and_error_scales() {
    let settings = BenchSettings {
        n: vec![2, 3],
        trials: 2,
        grid: vec![
            GridEntry { optimizer: Optimizer::NelderMead, loss: Loss::Frobenius },
            GridEntry { optimizer: Optimizer::Adam, loss: Loss::Trace },
        ],
    };
    let table = run_bench(&settings, &TrainSettings::default(), 21).unwrap();
    assert_eq!(table.ns(), vec![2, 3]);
    assert_eq!(table.rows.len(), 4);
    for r in &table.rows {
        assert_eq!(r.trials, 2);
        assert!(r.mean_time >= 0.0);
        match r.optimizer {
            Optimizer::NelderMead => assert!(r.max_error <= 1e-10, "{r:?}"),
            Optimizer::Adam => assert!((1e-4..=1e-2).contains(&r.mean_error), "{r:?}"),
        }
    }
    let csv = table.to_csv().unwrap();
    assert!(csv.starts_with("n,optimizer,loss,trials,mean_time,mean_error,max_error,threshold,converged\n"));
    assert_eq!(BenchTable::from_csv(&csv).unwrap(), table);
}
