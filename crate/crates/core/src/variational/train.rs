use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind};
use crate::error::{QspError, Result};
use crate::exact::{bst_build, modulus_params_exact, modulus_reference_unitary, natural_angles, target_phases};
use crate::ladder::{global_phase_tail, QspTemplate};
use crate::qcore::{inner_product, log2_exact, StateVector, UnitaryMatrix};
use crate::real::{cis, compensated_sum, norm_tolerance, Cplx, Real};
use crate::statelib::{haar_corpus, hellinger};

use super::adam::{Adam, AdamConfig};
use super::loss::{frobenius_loss, trace_distance, trace_distance_from_fidelity, LossKind};
use super::nelder_mead::{minimize, NelderMeadConfig};
use super::su::{select_su_representative, su_candidates};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "optimizer", rename_all = "snake_case")]
pub enum OptimizerConfig {
    Adam(AdamConfig),
    NelderMead(NelderMeadConfig),
}

impl OptimizerConfig {
    pub fn name(&self) -> &'static str {
        match self {
            OptimizerConfig::Adam(_) => "adam",
            OptimizerConfig::NelderMead(_) => "nelder-mead",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub optimizer: String,
    pub loss: LossKind,
    /// Batch loss per Adam step, or best simplex value per Nelder–Mead
    /// iteration.
    pub loss_curve: Vec<f64>,
    pub final_loss: f64,
    /// Trace distance between target and circuit outputs on the probe state
    /// (`|0…0⟩` for the modulus stage).
    pub final_error: f64,
    /// Mean trace distance over the random-input dataset, when one is used.
    pub mean_dataset_error: Option<f64>,
    pub wall_time: f64,
    /// Circuit evaluations (full operators built).
    pub evals: usize,
    pub converged: bool,
}

/// Loss of a parametrized template against a target operator, with exact
/// parameter-shift gradients.
pub struct StageObjective<'a, T: Real> {
    template: &'a Circuit<T>,
    target: &'a UnitaryMatrix<T>,
    loss: LossKind,
    inputs: Vec<Vec<Cplx<T>>>,
    expected: Vec<Vec<Cplx<T>>>,
}

fn dot<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>]) -> Cplx<T> {
    let re = compensated_sum(a.iter().zip(b).map(|(x, y)| (x.conj() * y).re));
    let im = compensated_sum(a.iter().zip(b).map(|(x, y)| (x.conj() * y).im));
    Cplx::new(re, im)
}

impl<'a, T: Real> StageObjective<'a, T> {
    pub fn new(
        template: &'a Circuit<T>,
        target: &'a UnitaryMatrix<T>,
        loss: LossKind,
        dataset: &[StateVector<T>],
    ) -> Result<Self> {
        let dim = 1usize << template.n_qubits();
        if target.dim() != dim {
            return Err(QspError::DimensionMismatch { expected: dim, got: target.dim() });
        }
        if loss.uses_dataset() && dataset.is_empty() {
            return Err(QspError::Config(format!("{loss} loss needs a non-empty dataset")));
        }
        let (inputs, expected) = if loss.uses_dataset() {
            let inputs: Vec<Vec<Cplx<T>>> = dataset.iter().map(|s| s.amplitudes().to_vec()).collect();
            let expected = inputs.iter().map(|v| target.apply(v)).collect::<Result<_>>()?;
            (inputs, expected)
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(Self { template, target, loss, inputs, expected })
    }

    pub fn dataset_len(&self) -> usize {
        self.inputs.len()
    }

    pub fn loss_kind(&self) -> LossKind {
        self.loss
    }

    fn fidelities(&self, u: &UnitaryMatrix<T>, batch: &[usize]) -> Result<Vec<T>> {
        batch
            .par_iter()
            .map(|&i| {
                let out = u.apply(&self.inputs[i])?;
                Ok(dot(&self.expected[i], &out).norm_sqr().min(T::one()))
            })
            .collect()
    }

    fn sample_loss(&self, f: T) -> T {
        match self.loss {
            LossKind::Fidelity => T::one() - f,
            LossKind::TraceDistance => trace_distance_from_fidelity(f),
            LossKind::Frobenius => unreachable!(),
        }
    }

    fn mean(values: impl IntoIterator<Item = T>, len: usize) -> T {
        compensated_sum(values) / T::from_usize_lossy(len.max(1))
    }

    /// Loss of an already-built circuit operator on `batch`.
    pub fn loss_of_unitary(&self, u: &UnitaryMatrix<T>, batch: &[usize]) -> Result<T> {
        if self.loss == LossKind::Frobenius {
            return frobenius_loss(self.target, u);
        }
        let f = self.fidelities(u, batch)?;
        Ok(Self::mean(f.into_iter().map(|f| self.sample_loss(f)), batch.len()))
    }

    pub fn loss(&self, params: &[T], batch: &[usize]) -> Result<T> {
        self.loss_of_unitary(&self.template.unitary_with(params)?, batch)
    }

    /// Mean loss over the whole dataset (or the matrix loss).
    pub fn full_loss(&self, params: &[T]) -> Result<T> {
        let all: Vec<usize> = (0..self.inputs.len()).collect();
        self.loss(params, &all)
    }

    fn re_overlap(&self, u: &UnitaryMatrix<T>) -> T {
        compensated_sum(self.target.entries().iter().zip(u.entries()).map(|(a, b)| (a.conj() * b).re))
    }

    /// Checks that every slot feeds exactly one RY or RZ, which makes the
    /// shift rules below exact.
    pub fn check_shift_rule(&self) -> Result<()> {
        for s in 0..self.template.n_slots() {
            match self.template.slot_gate(s).map(|g| g.kind) {
                Some(GateKind::Ry) | Some(GateKind::Rz) => {}
                _ => {
                    return Err(QspError::Config(format!(
                        "slot {s} must feed exactly one RY or RZ for parameter-shift gradients"
                    )))
                }
            }
        }
        Ok(())
    }

    /// Parameter-shift gradient of [`Self::loss`].
    ///
    /// Fidelities are sinusoidal in each angle with unit frequency, so
    /// `∂F = (F(θ+π/2) − F(θ−π/2))/2`. The Frobenius overlap `Re tr(U_t†U)`
    /// has frequency ½, so `∂g = (g(θ+π) − g(θ−π))/4` and `∂‖U_t − U‖ =
    /// −∂g / ‖U_t − U‖`.
    pub fn gradient(&self, params: &[T], batch: &[usize]) -> Result<Vec<T>> {
        let shift = match self.loss {
            LossKind::Frobenius => T::PI(),
            _ => T::FRAC_PI_2(),
        };
        let shifted = |s: usize, sign: T| -> Result<UnitaryMatrix<T>> {
            let mut p = params.to_vec();
            p[s] += sign * shift;
            self.template.unitary_with(&p)
        };
        match self.loss {
            LossKind::Frobenius => {
                let u = self.template.unitary_with(params)?;
                let l = frobenius_loss(self.target, &u)?;
                (0..params.len())
                    .into_par_iter()
                    .map(|s| {
                        if l <= T::zero() {
                            return Ok(T::zero());
                        }
                        let gp = self.re_overlap(&shifted(s, T::one())?);
                        let gm = self.re_overlap(&shifted(s, -T::one())?);
                        Ok(-(gp - gm) / T::lit(4.0) / l)
                    })
                    .collect()
            }
            _ => {
                let u = self.template.unitary_with(params)?;
                let f0 = self.fidelities(&u, batch)?;
                let dldf: Vec<T> = f0
                    .iter()
                    .map(|&f| match self.loss {
                        LossKind::Fidelity => -T::one(),
                        _ => {
                            let t = trace_distance_from_fidelity(f);
                            if t > T::zero() {
                                -T::one() / (t + t)
                            } else {
                                T::zero()
                            }
                        }
                    })
                    .collect();
                (0..params.len())
                    .into_par_iter()
                    .map(|s| {
                        let fp = self.fidelities(&shifted(s, T::one())?, batch)?;
                        let fm = self.fidelities(&shifted(s, -T::one())?, batch)?;
                        let terms = dldf.iter().zip(fp.iter().zip(&fm)).map(|(d, (p, m))| *d * (*p - *m) / T::lit(2.0));
                        Ok(Self::mean(terms, batch.len()))
                    })
                    .collect()
            }
        }
    }
}

/// Uniform draws in `[−scale, scale]`.
pub fn random_init<T: Real>(n_params: usize, scale: f64, seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_params).map(|_| T::lit(rng.gen_range(-scale..=scale))).collect()
}

fn check_finite<T: Real>(v: T, what: &str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(QspError::NonFinite(what.to_string()))
    }
}

/// Trains `template` toward `target` from `init`.
///
/// `probe` is the input on which the report's `final_error` is measured.
pub fn train_stage<T: Real>(
    template: &Circuit<T>,
    target: &UnitaryMatrix<T>,
    loss: LossKind,
    optimizer: &OptimizerConfig,
    dataset: &[StateVector<T>],
    init: &[T],
    probe: &StateVector<T>,
) -> Result<(Vec<T>, TrainReport)> {
    if init.len() != template.n_slots() {
        return Err(QspError::ParamLength { expected: template.n_slots(), got: init.len() });
    }
    let start = Instant::now();
    let objective = StageObjective::new(template, target, loss, dataset)?;
    let data_len = objective.dataset_len();
    let mut params = init.to_vec();
    let mut curve = Vec::new();
    let mut evals = 0usize;
    let converged;
    match optimizer {
        OptimizerConfig::Adam(cfg) => {
            cfg.validate(data_len)?;
            objective.check_shift_rule()?;
            let tol = T::lit(cfg.tolerance);
            let mut adam = Adam::new(cfg, params.len());
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut order: Vec<usize> = (0..data_len).collect();
            let batches: Vec<std::ops::Range<usize>> = if data_len == 0 {
                vec![0..0]
            } else {
                (0..data_len).step_by(cfg.batch_size).map(|s| s..(s + cfg.batch_size).min(data_len)).collect()
            };
            let mut done = false;
            'epochs: for _ in 0..cfg.epochs {
                order.shuffle(&mut rng);
                for range in &batches {
                    let batch = &order[range.clone()];
                    let l = objective.loss(&params, batch)?;
                    evals += 1;
                    check_finite(l, "training loss")?;
                    curve.push(l.to_f64_lossy());
                    if l <= tol {
                        done = true;
                        break 'epochs;
                    }
                    let g = objective.gradient(&params, batch)?;
                    evals += 2 * params.len() + 1;
                    if g.iter().any(|v| !v.is_finite()) {
                        return Err(QspError::NonFinite("gradient".into()));
                    }
                    adam.step(&mut params, &g);
                }
            }
            converged = done;
        }
        OptimizerConfig::NelderMead(cfg) => {
            let res = minimize(|p: &[T]| objective.full_loss(p), &params, cfg)?;
            params = res.x;
            evals = res.evals;
            converged = res.converged;
            curve = res.best_curve.iter().map(|v| v.to_f64_lossy()).collect();
        }
    }
    let u = template.unitary_with(&params)?;
    let final_loss = objective.full_loss(&params)?;
    check_finite(final_loss, "final loss")?;
    let want = probe.evolve(target)?;
    let got = probe.evolve(&u)?;
    let final_error = trace_distance(&want, &got)?;
    let mean_dataset_error = if data_len > 0 {
        let all: Vec<usize> = (0..data_len).collect();
        let f = objective.fidelities(&u, &all)?;
        Some(compensated_sum(f.into_iter().map(trace_distance_from_fidelity)).to_f64_lossy() / data_len as f64)
    } else {
        None
    };
    if curve.is_empty() {
        curve.push(final_loss.to_f64_lossy());
    }
    let report = TrainReport {
        optimizer: optimizer.name().to_string(),
        loss,
        loss_curve: curve,
        final_loss: final_loss.to_f64_lossy(),
        final_error: final_error.to_f64_lossy(),
        mean_dataset_error,
        wall_time: start.elapsed().as_secs_f64(),
        evals,
        converged,
    };
    Ok((params, report))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageConfig {
    pub loss: LossKind,
    pub optimizer: OptimizerConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoStageConfig {
    pub modulus: StageConfig,
    pub phase: StageConfig,
    pub seed: u64,
    /// Number of Haar-random input states for state losses.
    pub dataset_size: usize,
    /// Start the modulus stage from the closed-form solution.
    pub warm_start: bool,
    /// Half-width of the uniform parameter initialization.
    pub init_scale: f64,
    /// Append the global-phase correction to the returned circuit.
    pub global_phase_tail: bool,
}

impl TwoStageConfig {
    fn with_stage(stage: StageConfig, seed: u64) -> Self {
        Self {
            modulus: stage.clone(),
            phase: stage,
            seed,
            dataset_size: 1000,
            warm_start: false,
            init_scale: 0.1,
            global_phase_tail: false,
        }
    }

    /// Frobenius loss with Nelder–Mead in both stages.
    pub fn nelder_mead(n: usize, seed: u64) -> Self {
        Self::with_stage(
            StageConfig { loss: LossKind::Frobenius, optimizer: OptimizerConfig::NelderMead(NelderMeadConfig::for_qubits(n)) },
            seed,
        )
    }

    /// A state loss with Adam in both stages.
    pub fn adam(loss: LossKind, seed: u64) -> Self {
        Self::with_stage(StageConfig { loss, optimizer: OptimizerConfig::Adam(AdamConfig::default()) }, seed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoStageOutcome<T: Real> {
    /// Bound modulus and phase parts, plus the tail when requested.
    pub circuit: Circuit<T>,
    pub theta_modulus: Vec<T>,
    pub theta_phase: Vec<T>,
    /// Phase aligning the circuit output with the target.
    pub global_phase: T,
    pub su_candidate: usize,
    pub reports: Vec<TrainReport>,
    pub output: StateVector<T>,
    /// Trace distance between the target and the prepared state.
    pub final_error: T,
    pub hellinger: T,
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("stage {stage} failed: {error}")]
pub struct TwoStageFailure {
    pub stage: usize,
    pub error: QspError,
    /// Reports of the stages that finished before the failure.
    pub completed: Vec<TrainReport>,
}

fn fail(stage: usize, completed: &[TrainReport]) -> impl FnOnce(QspError) -> TwoStageFailure + '_ {
    move |error| TwoStageFailure { stage, error, completed: completed.to_vec() }
}

/// Trains the modulus part toward the natural-ladder operator, then, with
/// the modulus frozen, the phase part toward one special-unitary rescaling
/// of the target phase operator.
pub fn two_stage_train<T: Real>(
    amps: &[Cplx<T>],
    config: &TwoStageConfig,
) -> std::result::Result<TwoStageOutcome<T>, TwoStageFailure> {
    let mut reports = Vec::new();
    let target = StateVector::new(amps.to_vec()).map_err(fail(0, &reports))?;
    let n = log2_exact(amps.len()).ok_or(QspError::NotPowerOfTwo(amps.len())).map_err(fail(0, &reports))?;
    let norm = compensated_sum(amps.iter().map(|z| z.norm_sqr())).sqrt();
    if (norm - T::one()).abs() > norm_tolerance(amps.len()) {
        return Err(fail(0, &reports)(QspError::NotNormalized { norm: norm.to_f64_lossy() }));
    }
    let tpl = QspTemplate::<T>::new(n).map_err(fail(0, &reports))?;

    let needs_data = config.modulus.loss.uses_dataset() || config.phase.loss.uses_dataset();
    let dataset = if needs_data { haar_corpus::<T>(n, config.dataset_size, config.seed) } else { Vec::new() };
    let zero = StateVector::<T>::zero(n);

    // Stage 1: moduli.
    let moduli: Vec<T> = target.amplitudes().iter().map(|z| z.norm()).collect();
    let u_modulus = bst_build(&moduli)
        .map(|b| natural_angles(&b))
        .and_then(|a| modulus_reference_unitary(&a))
        .map_err(fail(1, &reports))?;
    let init_mod = if config.warm_start {
        modulus_params_exact(&moduli).map_err(fail(1, &reports))?
    } else {
        random_init(tpl.modulus.n_slots(), config.init_scale, config.seed)
    };
    let opt1 = reseed(&config.modulus.optimizer, config.seed, 1);
    let (theta_modulus, rep1) =
        train_stage(&tpl.modulus, &u_modulus, config.modulus.loss, &opt1, &dataset, &init_mod, &zero)
            .map_err(fail(1, &reports))?;
    reports.push(rep1);

    // Stage 2: phases, on top of the frozen modulus part.
    let phases = target_phases(target.amplitudes());
    let diag: Vec<Cplx<T>> = phases.iter().map(|&p| cis(p)).collect();
    let u_phase = UnitaryMatrix::from_diagonal(&diag).map_err(fail(2, &reports))?;
    let candidates = su_candidates(&u_phase).map_err(fail(2, &reports))?;
    let (su_candidate, _) = select_su_representative(&candidates).expect("at least one candidate");
    let su_target = &candidates[su_candidate];
    let probe = tpl.modulus.run_with(&theta_modulus, &zero).map_err(fail(2, &reports))?;
    let init_phase = random_init(tpl.phase.n_slots(), config.init_scale, config.seed.wrapping_add(1));
    let opt2 = reseed(&config.phase.optimizer, config.seed, 2);
    let (theta_phase, rep2) =
        train_stage(&tpl.phase, su_target, config.phase.loss, &opt2, &dataset, &init_phase, &probe)
            .map_err(fail(2, &reports))?;
    reports.push(rep2);

    let assemble = || -> Result<(Circuit<T>, StateVector<T>, T, T, T)> {
        let params: Vec<T> = theta_modulus.iter().chain(&theta_phase).copied().collect();
        let mut circuit = tpl.combined()?.bind(&params)?;
        let out = circuit.run(&zero)?;
        let global_phase = inner_product(&out, &target)?.arg();
        if config.global_phase_tail {
            for g in global_phase_tail(0, global_phase) {
                circuit.push(g)?;
            }
        }
        let output = circuit.run(&zero)?;
        let err = trace_distance(&target, &output)?;
        let hel = hellinger(&target.probabilities(), &output.probabilities())?;
        Ok((circuit, output, global_phase, err, hel))
    };
    let (circuit, output, global_phase, final_error, hel) = assemble().map_err(fail(2, &reports))?;
    Ok(TwoStageOutcome {
        circuit,
        theta_modulus,
        theta_phase,
        global_phase,
        su_candidate,
        reports,
        output,
        final_error,
        hellinger: hel,
    })
}

fn reseed(opt: &OptimizerConfig, seed: u64, stage: u64) -> OptimizerConfig {
    match opt {
        OptimizerConfig::Adam(a) => OptimizerConfig::Adam(AdamConfig { seed: seed.wrapping_add(stage), ..a.clone() }),
        OptimizerConfig::NelderMead(c) => {
            OptimizerConfig::NelderMead(NelderMeadConfig { seed: seed.wrapping_add(stage), ..c.clone() })
        }
    }
}
