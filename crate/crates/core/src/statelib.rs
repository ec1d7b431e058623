//! Target-state corpus and distribution metrics.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{QspError, Result};
use crate::qcore::{ProbabilityDistribution, StateVector, MAX_QUBITS};
use crate::real::{c, compensated_sum, norm_tolerance, Cplx, Real};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellVariant {
    /// `(|00⟩ + |11⟩)/√2`
    #[default]
    PhiPlus,
    /// `(|00⟩ − |11⟩)/√2`
    PhiMinus,
    /// `(|01⟩ + |10⟩)/√2`
    PsiPlus,
    /// `(|01⟩ − |10⟩)/√2`
    PsiMinus,
}

/// Target state description; the JSON form is internally tagged by `kind`.
///
/// ```json
/// {"kind": "explicit", "n": 1, "entries": [[0.6, 0.0], [0.0, 0.8]]}
/// {"kind": "sparse", "n": 2, "entries": [[0, 0.5, 0.0], [3, -0.5, 0.0]]}
/// {"kind": "haar_random", "n": 3, "seed": 7}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSpec {
    HaarRandom { n: usize, seed: u64 },
    Basis { n: usize, index: usize },
    Uniform { n: usize },
    Bell {
        #[serde(default = "two")]
        n: usize,
        #[serde(default)]
        variant: BellVariant,
    },
    Ghz { n: usize },
    /// `entries[i] = [re, im]` of amplitude `i`.
    Explicit { n: usize, entries: Vec<[f64; 2]> },
    /// `entries = [[index, re, im], …]`; unlisted amplitudes are zero.
    Sparse { n: usize, entries: Vec<(usize, f64, f64)> },
}

fn two() -> usize {
    2
}

/// Tolerance on the norm of explicit and sparse entries, widened to
/// [`norm_tolerance`] for single precision.
pub const SPEC_NORM_TOLERANCE: f64 = 1e-9;

impl StateSpec {
    pub fn n(&self) -> usize {
        match *self {
            StateSpec::HaarRandom { n, .. }
            | StateSpec::Basis { n, .. }
            | StateSpec::Uniform { n }
            | StateSpec::Bell { n, .. }
            | StateSpec::Ghz { n }
            | StateSpec::Explicit { n, .. }
            | StateSpec::Sparse { n, .. } => n,
        }
    }
}

/// Sparse and uniform benchmark targets on 2 to 4 qubits, with labels in
/// amplitude-list form.
pub fn benchmark_states() -> Vec<(String, StateSpec)> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let sparse = |n: usize, e: &[(usize, f64)]| StateSpec::Sparse {
        n,
        entries: e.iter().map(|&(i, re)| (i, re, 0.0)).collect(),
    };
    vec![
        ("[1/√2, 0, 0, 1/√2]".into(), StateSpec::Bell { n: 2, variant: BellVariant::PhiPlus }),
        ("[1/√2, 0, 1/√2, 0]".into(), sparse(2, &[(0, r), (2, r)])),
        ("[0.5, 0.5, 0.5, 0.5]".into(), StateSpec::Uniform { n: 2 }),
        ("[0, 0, 1/√2, −1/√2]".into(), sparse(2, &[(2, r), (3, -r)])),
        ("[−1/√2, 1/√2, 0, 0]".into(), sparse(2, &[(0, -r), (1, r)])),
        ("GHZ(3)".into(), StateSpec::Ghz { n: 3 }),
        ("uniform(3)".into(), StateSpec::Uniform { n: 3 }),
        ("[1/√2, 1/√2, 0, 0, 0, 0, 0, 0]".into(), sparse(3, &[(0, r), (1, r)])),
        ("[0, 0, 0, 0, 0, 0, 1/√2, −1/√2]".into(), sparse(3, &[(6, r), (7, -r)])),
        ("[0, 1/√2, 0, 0, 0, −1/√2, 0, 0]".into(), sparse(3, &[(1, r), (5, -r)])),
        ("uniform(4)".into(), StateSpec::Uniform { n: 4 }),
        ("e14/√2 − e15/√2 (4 qubits)".into(), sparse(4, &[(14, r), (15, -r)])),
        ("−e0/√2 + e1/√2 (4 qubits)".into(), sparse(4, &[(0, -r), (1, r)])),
    ]
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(QspError::InvalidSpec("n must be positive".into()));
    }
    if n > MAX_QUBITS {
        return Err(QspError::TooManyQubits(n));
    }
    Ok(())
}

fn normalized_entries<T: Real>(amps: Vec<Cplx<T>>) -> Result<StateVector<T>> {
    let norm = compensated_sum(amps.iter().map(|z| z.norm_sqr())).sqrt();
    if norm == T::zero() {
        return Err(QspError::ZeroVector);
    }
    if (norm - T::one()).abs() > T::lit(SPEC_NORM_TOLERANCE).max(norm_tolerance(amps.len())) {
        return Err(QspError::NotNormalized { norm: norm.to_f64_lossy() });
    }
    StateVector::new(amps)
}

/// One Haar-random state: `2^n` standard complex Gaussians, normalized.
pub fn haar_state<T: Real>(n: usize, rng: &mut ChaCha8Rng) -> StateVector<T> {
    let amps = (0..1usize << n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            c(T::lit(re), T::lit(im))
        })
        .collect();
    StateVector::new(amps).expect("Gaussian draw is nonzero")
}

/// `count` Haar-random states; state `i` draws from stream `i` of the
/// seeded generator, so the corpus does not depend on thread scheduling.
pub fn haar_corpus<T: Real>(n: usize, count: usize, seed: u64) -> Vec<StateVector<T>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            haar_state(n, &mut rng)
        })
        .collect()
}

pub fn realize<T: Real>(spec: &StateSpec) -> Result<StateVector<T>> {
    let n = spec.n();
    check_n(n)?;
    let dim = 1usize << n;
    let zero = Cplx::<T>::default();
    let r = T::FRAC_1_SQRT_2();
    match spec {
        StateSpec::HaarRandom { seed, .. } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok(haar_state(n, &mut rng))
        }
        StateSpec::Basis { index, .. } => {
            if *index >= dim {
                return Err(QspError::InvalidSpec(format!("basis index {index} out of range for n={n}")));
            }
            Ok(StateVector::basis(n, *index))
        }
        StateSpec::Uniform { .. } => {
            let a = T::one() / T::from_usize_lossy(dim).sqrt();
            StateVector::new(vec![c(a, T::zero()); dim])
        }
        StateSpec::Bell { variant, .. } => {
            if n != 2 {
                return Err(QspError::InvalidSpec(format!("bell state needs n=2, got {n}")));
            }
            let mut amps = vec![zero; 4];
            let (i, j, sign) = match variant {
                BellVariant::PhiPlus => (0, 3, T::one()),
                BellVariant::PhiMinus => (0, 3, -T::one()),
                BellVariant::PsiPlus => (1, 2, T::one()),
                BellVariant::PsiMinus => (1, 2, -T::one()),
            };
            amps[i] = c(r, T::zero());
            amps[j] = c(sign * r, T::zero());
            StateVector::new(amps)
        }
        StateSpec::Ghz { .. } => {
            let mut amps = vec![zero; dim];
            amps[0] = c(r, T::zero());
            amps[dim - 1] = c(r, T::zero());
            StateVector::new(amps)
        }
        StateSpec::Explicit { entries, .. } => {
            if entries.len() != dim {
                return Err(QspError::InvalidSpec(format!(
                    "explicit spec has {} entries, n={n} needs {dim}",
                    entries.len()
                )));
            }
            normalized_entries(entries.iter().map(|[re, im]| c(T::lit(*re), T::lit(*im))).collect())
        }
        StateSpec::Sparse { entries, .. } => {
            let mut amps = vec![zero; dim];
            for &(i, re, im) in entries {
                if i >= dim {
                    return Err(QspError::InvalidSpec(format!("sparse index {i} out of range for n={n}")));
                }
                amps[i] = amps[i] + c(T::lit(re), T::lit(im));
            }
            normalized_entries(amps)
        }
    }
}

/// `(1/√2)·‖√p − √q‖₂`, in `[0, 1]`.
pub fn hellinger<T: Real>(p: &ProbabilityDistribution<T>, q: &ProbabilityDistribution<T>) -> Result<T> {
    if p.len() != q.len() {
        return Err(QspError::DimensionMismatch { expected: p.len(), got: q.len() });
    }
    let ss = compensated_sum(p.probs().iter().zip(q.probs()).map(|(a, b)| {
        let d = a.sqrt() - b.sqrt();
        d * d
    }));
    Ok((ss / T::lit(2.0)).sqrt().min(T::one()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HaarSummary {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    /// Sample mean of `|c_i|²` per basis index.
    pub means: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// Every mean lies within three standard errors of `2^{-n}`.
    pub within_three_se: bool,
    /// SHA-256 of the corpus amplitudes (little-endian `f64` pairs).
    pub corpus_hash: String,
}

pub fn corpus_hash<T: Real>(corpus: &[StateVector<T>]) -> String {
    let mut h = Sha256::new();
    for s in corpus {
        for z in s.amplitudes() {
            h.update(z.re.to_f64_lossy().to_le_bytes());
            h.update(z.im.to_f64_lossy().to_le_bytes());
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Checks per-component mean probabilities of a Haar corpus against `2^{-n}`.
pub fn haar_mean_check(n: usize, count: usize, seed: u64) -> Result<HaarSummary> {
    check_n(n)?;
    if count < 100 {
        return Err(QspError::Config(format!("haar_mean_check needs at least 100 samples, got {count}")));
    }
    let corpus = haar_corpus::<f64>(n, count, seed);
    let dim = 1usize << n;
    let expected = 1.0 / dim as f64;
    let cnt = count as f64;
    let mut means = Vec::with_capacity(dim);
    let mut std_errors = Vec::with_capacity(dim);
    for i in 0..dim {
        let vals: Vec<f64> = corpus.iter().map(|s| s.amplitudes()[i].norm_sqr()).collect();
        let mean = compensated_sum(vals.iter().copied()) / cnt;
        let var = compensated_sum(vals.iter().map(|v| (v - mean) * (v - mean))) / (cnt - 1.0);
        means.push(mean);
        std_errors.push((var / cnt).sqrt());
    }
    let within_three_se = means.iter().zip(&std_errors).all(|(m, se)| (m - expected).abs() <= 3.0 * se);
    Ok(HaarSummary { n, count, seed, means, std_errors, within_three_se, corpus_hash: corpus_hash(&corpus) })
}

#[cfg(test)]
mod tests;
