//! Derivative-free downhill simplex.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QspError, Result};
use crate::real::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NelderMeadConfig {
    /// Stops once the best vertex value is at or below this.
    pub target_error: f64,
    /// Evaluation budget shared by all starts.
    pub max_evals: usize,
    /// Offset of each initial vertex from the start point, per coordinate.
    pub initial_step: f64,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Rebuilds the simplex around the best vertex when it collapses before
    /// reaching the target.
    pub max_restarts: usize,
    /// A start is abandoned after this many consecutive rebuilds that fail
    /// to halve the best value.
    pub stall_restarts: usize,
    /// Additional starts from uniform points in `[−start_scale, start_scale]`
    /// once a start stalls with budget left.
    pub fresh_starts: usize,
    pub start_scale: f64,
    pub seed: u64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            target_error: 1e-15,
            max_evals: 200_000,
            initial_step: 0.05,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            max_restarts: 50,
            stall_restarts: 3,
            fresh_starts: 16,
            start_scale: std::f64::consts::PI,
            seed: 0,
        }
    }
}

impl NelderMeadConfig {
    /// `1e-15` up to three qubits, `1e-10` beyond.
    pub fn for_qubits(n: usize) -> Self {
        Self { target_error: if n <= 3 { 1e-15 } else { 1e-10 }, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_error > 0.0) {
            return Err(QspError::Config("target_error must be positive".into()));
        }
        if !(self.initial_step > 0.0) || self.max_evals == 0 {
            return Err(QspError::Config("initial_step and max_evals must be positive".into()));
        }
        if !(self.start_scale >= 0.0) {
            return Err(QspError::Config("start_scale must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NelderMeadResult<T: Real> {
    pub x: Vec<T>,
    pub f: T,
    pub evals: usize,
    /// Best value found so far after each iteration; non-increasing.
    pub best_curve: Vec<T>,
    pub converged: bool,
    /// Simplex rebuilds, over all starts.
    pub restarts: usize,
    /// Starts used, including the first.
    pub starts: usize,
}

struct Counted<F> {
    f: F,
    evals: usize,
}

impl<F> Counted<F> {
    fn call<T: Real>(&mut self, x: &[T]) -> Result<T>
    where
        F: FnMut(&[T]) -> Result<T>,
    {
        self.evals += 1;
        let v = (self.f)(x)?;
        if !v.is_finite() {
            return Err(QspError::NonFinite(format!("objective value at evaluation {}", self.evals)));
        }
        Ok(v)
    }
}

fn lerp<T: Real>(from: &[T], to: &[T], t: T) -> Vec<T> {
    from.iter().zip(to).map(|(a, b)| *a + t * (*b - *a)).collect()
}

struct StartOutcome<T> {
    x: Vec<T>,
    f: T,
    restarts: usize,
}

pub fn minimize<T, F>(objective: F, x0: &[T], config: &NelderMeadConfig) -> Result<NelderMeadResult<T>>
where
    T: Real,
    F: FnMut(&[T]) -> Result<T>,
{
    config.validate()?;
    let mut obj = Counted { f: objective, evals: 0 };
    let target = T::lit(config.target_error);
    let mut best_curve = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut start = x0.to_vec();
    let mut best: Option<(Vec<T>, T)> = None;
    let mut restarts = 0;
    let mut starts = 0;
    loop {
        starts += 1;
        let out = run_start(&mut obj, &start, config, &mut best_curve, best.as_ref().map(|b| b.1))?;
        restarts += out.restarts;
        if best.as_ref().map_or(true, |b| out.f < b.1) {
            best = Some((out.x, out.f));
        }
        let f_best = best.as_ref().unwrap().1;
        if f_best <= target || obj.evals >= config.max_evals || starts > config.fresh_starts || x0.is_empty() {
            break;
        }
        start = (0..x0.len())
            .map(|_| T::lit(rng.gen_range(-config.start_scale..=config.start_scale)))
            .collect();
    }
    let (x, f) = best.unwrap();
    Ok(NelderMeadResult { converged: f <= target, x, f, evals: obj.evals, best_curve, restarts, starts })
}

fn run_start<T, F>(
    obj: &mut Counted<F>,
    x0: &[T],
    config: &NelderMeadConfig,
    best_curve: &mut Vec<T>,
    prior_best: Option<T>,
) -> Result<StartOutcome<T>>
where
    T: Real,
    F: FnMut(&[T]) -> Result<T>,
{
    let dim = x0.len();
    let target = T::lit(config.target_error);
    let (alpha, gamma, rho, sigma) = (
        T::lit(config.reflection),
        T::lit(config.expansion),
        T::lit(config.contraction),
        T::lit(config.shrink),
    );
    let step = T::lit(config.initial_step);
    let record = |curve: &mut Vec<T>, f: T| {
        let f = prior_best.map_or(f, |p| p.min(f));
        let f = curve.last().map_or(f, |&l: &T| l.min(f));
        curve.push(f);
    };

    let f0 = obj.call(x0)?;
    if dim == 0 || f0 <= target {
        record(best_curve, f0);
        return Ok(StartOutcome { x: x0.to_vec(), f: f0, restarts: 0 });
    }

    let build = |center: &[T], fc: T, obj: &mut Counted<F>| -> Result<Vec<(Vec<T>, T)>> {
        let mut s = vec![(center.to_vec(), fc)];
        for i in 0..dim {
            let mut x = center.to_vec();
            x[i] += step;
            let fx = obj.call(&x)?;
            s.push((x, fx));
        }
        Ok(s)
    };

    let mut simplex = build(x0, f0, obj)?;
    let mut restarts = 0;
    let mut stalled = 0;
    let mut f_at_restart = T::infinity();
    let sort = |s: &mut Vec<(Vec<T>, T)>| s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());

    loop {
        sort(&mut simplex);
        let f_best = simplex[0].1;
        record(best_curve, f_best);
        if f_best <= target || obj.evals >= config.max_evals {
            break;
        }

        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (*a - *b).abs()))
            .fold(T::zero(), T::max);
        let scale = simplex[0].0.iter().fold(T::one(), |m, v| m.max(v.abs()));
        if diameter <= T::epsilon() * scale * T::lit(4.0) {
            if f_best > f_at_restart * T::lit(0.5) {
                stalled += 1;
            } else {
                stalled = 0;
            }
            if restarts >= config.max_restarts || stalled >= config.stall_restarts.max(1) {
                break;
            }
            f_at_restart = f_best;
            restarts += 1;
            let (xb, fb) = simplex[0].clone();
            simplex = build(&xb, fb, obj)?;
            continue;
        }

        let worst = dim;
        let mut centroid = vec![T::zero(); dim];
        for (x, _) in &simplex[..worst] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += *v;
            }
        }
        let inv = T::one() / T::from_usize_lossy(dim);
        centroid.iter_mut().for_each(|c| *c *= inv);

        let f_second = simplex[worst - 1].1;
        let f_worst = simplex[worst].1;
        let xr = lerp(&centroid, &simplex[worst].0, -alpha);
        let fr = obj.call(&xr)?;

        if fr < f_best {
            let xe = lerp(&centroid, &xr, gamma);
            let fe = obj.call(&xe)?;
            simplex[worst] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            simplex[worst] = (xr, fr);
            continue;
        }
        let accepted = if fr < f_worst {
            let xc = lerp(&centroid, &xr, rho);
            let fc = obj.call(&xc)?;
            if fc <= fr {
                simplex[worst] = (xc, fc);
                true
            } else {
                false
            }
        } else {
            let xc = lerp(&centroid, &simplex[worst].0, rho);
            let fc = obj.call(&xc)?;
            if fc < f_worst {
                simplex[worst] = (xc, fc);
                true
            } else {
                false
            }
        };
        if !accepted {
            let best = simplex[0].0.clone();
            for v in simplex.iter_mut().skip(1) {
                let x = lerp(&best, &v.0, sigma);
                let fx = obj.call(&x)?;
                *v = (x, fx);
            }
        }
    }

    sort(&mut simplex);
    let (x, f) = simplex.swap_remove(0);
    Ok(StartOutcome { x, f, restarts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock_2d() {
        let rosen = |x: &[f64]| Ok((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2));
        let cfg = NelderMeadConfig { target_error: 1e-20, max_evals: 20_000, initial_step: 0.5, ..Default::default() };
        let r = minimize(rosen, &[-1.2, 1.0], &cfg).unwrap();
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6, "{:?}", r.x);
    }

    #[test]
    fn best_curve_is_monotone() {
        let f = |x: &[f64]| Ok(x.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * (v - 0.3).powi(2)).sum::<f64>());
        let r = minimize(f, &[0.0; 5], &NelderMeadConfig { max_evals: 5000, ..Default::default() }).unwrap();
        assert!(r.best_curve.windows(2).all(|w| w[1] <= w[0]));
        assert!(r.f < 1e-10);
    }

    #[test]
    fn stops_at_eval_cap() {
        let f = |x: &[f64]| Ok(x[0].abs() + 1.0);
        let cfg = NelderMeadConfig { max_evals: 30, max_restarts: 0, fresh_starts: 0, ..Default::default() };
        let r = minimize(f, &[3.0], &cfg).unwrap();
        assert!(!r.converged);
        assert!(r.evals <= 32);
    }

    #[test]
    fn fresh_starts_escape_a_local_basin() {
        // Local minimum at x = −2 (value 1), global at x = 2 (value 0).
        let f = |x: &[f64]| Ok(((x[0] - 2.0).powi(2) * (x[0] + 2.0).powi(2) / 16.0 + 0.25 * (2.0 - x[0])).max(0.0));
        let single = NelderMeadConfig { target_error: 1e-12, fresh_starts: 0, ..Default::default() };
        let r = minimize(f, &[-2.5], &single).unwrap();
        assert!(!r.converged);
        assert_eq!(r.starts, 1);
        let multi = NelderMeadConfig { target_error: 1e-12, start_scale: 4.0, ..Default::default() };
        let r = minimize(f, &[-2.5], &multi).unwrap();
        assert!(r.converged, "{r:?}");
        assert!(r.starts > 1);
        assert!(r.best_curve.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn non_finite_objective_aborts() {
        let f = |x: &[f64]| Ok(if x[0] > 0.01 { f64::NAN } else { 1.0 + x[0] });
        assert!(matches!(minimize(f, &[0.0], &NelderMeadConfig::default()), Err(QspError::NonFinite(_))));
    }
}
