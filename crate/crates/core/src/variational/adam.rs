use serde::{Deserialize, Serialize};

use crate::error::{QspError, Result};
use crate::real::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Stops early once a batch loss is at or below this value.
    pub tolerance: f64,
    /// Seeds the per-epoch shuffle.
    pub seed: u64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            epochs: 50,
            batch_size: 64,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            tolerance: 0.0,
            seed: 0,
        }
    }
}

impl AdamConfig {
    pub fn validate(&self, dataset_len: usize) -> Result<()> {
        let positive = [self.learning_rate, self.beta1, self.beta2, self.epsilon];
        if positive.iter().any(|v| !(*v > 0.0) || !v.is_finite()) || self.beta1 >= 1.0 || self.beta2 >= 1.0 {
            return Err(QspError::Config("Adam rates and moments must be positive and below 1".into()));
        }
        if self.epochs == 0 || self.batch_size == 0 {
            return Err(QspError::Config("Adam epochs and batch size must be positive".into()));
        }
        if dataset_len > 0 && self.batch_size > dataset_len {
            return Err(QspError::Config(format!(
                "batch size {} exceeds dataset size {dataset_len}",
                self.batch_size
            )));
        }
        Ok(())
    }
}

/// First/second moment state of the Adam update rule.
#[derive(Clone, Debug)]
pub struct Adam<T: Real> {
    lr: T,
    beta1: T,
    beta2: T,
    eps: T,
    m: Vec<T>,
    v: Vec<T>,
    t: i32,
}

impl<T: Real> Adam<T> {
    pub fn new(config: &AdamConfig, n_params: usize) -> Self {
        Self {
            lr: T::lit(config.learning_rate),
            beta1: T::lit(config.beta1),
            beta2: T::lit(config.beta2),
            eps: T::lit(config.epsilon),
            m: vec![T::zero(); n_params],
            v: vec![T::zero(); n_params],
            t: 0,
        }
    }

    pub fn step(&mut self, params: &mut [T], grad: &[T]) {
        self.t += 1;
        let one = T::one();
        let bc1 = one - self.beta1.powi(self.t);
        let bc2 = one - self.beta2.powi(self.t);
        for (((p, g), m), v) in params.iter_mut().zip(grad).zip(&mut self.m).zip(&mut self.v) {
            *m = self.beta1 * *m + (one - self.beta1) * *g;
            *v = self.beta2 * *v + (one - self.beta2) * *g * *g;
            let m_hat = *m / bc1;
            let v_hat = *v / bc2;
            *p -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic() {
        let cfg = AdamConfig { learning_rate: 0.05, ..Default::default() };
        let mut adam = Adam::<f64>::new(&cfg, 2);
        let mut x = vec![1.0, -2.0];
        for _ in 0..2000 {
            let g = vec![2.0 * (x[0] - 0.5), 2.0 * (x[1] + 0.25)];
            adam.step(&mut x, &g);
        }
        assert!((x[0] - 0.5).abs() < 1e-3 && (x[1] + 0.25).abs() < 1e-3);
    }

    #[test]
    fn first_step_has_learning_rate_magnitude() {
        let cfg = AdamConfig::default();
        let mut adam = Adam::<f64>::new(&cfg, 1);
        let mut x = vec![0.0];
        adam.step(&mut x, &[3.0]);
        assert!((x[0] + 0.01).abs() < 1e-8);
    }

    #[test]
    fn rejects_oversized_batch() {
        let cfg = AdamConfig::default();
        assert!(cfg.validate(10).is_err());
        assert!(cfg.validate(1000).is_ok());
    }
}
