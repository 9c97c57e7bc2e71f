use serde::{Deserialize, Serialize};

use super::model::Model;
use crate::error::{Error, Result};

/// Optimizer hyperparameters. Defaults: momentum 0.9, weight decay 5e-5,
/// base learning rate 0.1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub lr: f64,
    pub momentum: f64,
    pub weight_decay: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            lr: 0.1,
            momentum: 0.9,
            weight_decay: 5e-5,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(Error::InvalidArgument(format!("lr must be positive, got {}", self.lr)));
        }
        if !(0.0..=1.0).contains(&self.momentum) {
            return Err(Error::InvalidArgument(format!(
                "momentum must lie in [0, 1], got {}",
                self.momentum
            )));
        }
        if !(self.weight_decay >= 0.0 && self.weight_decay.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "weight decay must be nonnegative, got {}",
                self.weight_decay
            )));
        }
        Ok(())
    }
}

/// SGD with heavy-ball momentum and L2 weight decay folded into the gradient:
///
/// ```text
/// v <- momentum * v + (grad + weight_decay * theta)
/// theta <- theta - lr * v
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    pub momentum_buffer: Vec<f64>,
    pub momentum_coefficient: f64,
    pub weight_decay: f64,
    pub base_lr: f64,
}

impl OptimizerState {
    pub fn new(model: &Model, config: &OptimizerConfig) -> Result<Self> {
        config.validate()?;
        Ok(OptimizerState {
            momentum_buffer: vec![0.0; model.num_params()],
            momentum_coefficient: config.momentum,
            weight_decay: config.weight_decay,
            base_lr: config.lr,
        })
    }

    /// Applies one update. A non-finite gradient leaves the model untouched
    /// and returns [`Error::Diverged`].
    pub fn sgd_step(&mut self, model: &mut Model, grad: &[f64], lr: f64) -> Result<()> {
        let params = model.params_mut();
        if grad.len() != params.len() || self.momentum_buffer.len() != params.len() {
            return Err(Error::ShapeMismatch(format!(
                "gradient {} / momentum {} / parameters {}",
                grad.len(),
                self.momentum_buffer.len(),
                params.len()
            )));
        }
        if !(lr > 0.0 && lr.is_finite()) {
            return Err(Error::InvalidArgument(format!("lr must be positive, got {lr}")));
        }
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Diverged("non-finite gradient".into()));
        }
        let (mu, wd) = (self.momentum_coefficient, self.weight_decay);
        for ((theta, v), &g) in params.iter_mut().zip(&mut self.momentum_buffer).zip(grad) {
            *v = mu * *v + (g + wd * *theta);
            *theta -= lr * *v;
        }
        Ok(())
    }
}

/// Cosine decay indexed from 1: `eta0 * 0.5 * (1 + cos(pi * (t - 1) / T))`.
pub fn cosine_lr(t: usize, total: usize, eta0: f64) -> Result<f64> {
    if t == 0 || t > total {
        return Err(Error::OutOfRange {
            what: "step",
            detail: format!("t = {t} outside [1, {total}]"),
        });
    }
    let phase = (t - 1) as f64 / total as f64;
    Ok(eta0 * 0.5 * (1.0 + (std::f64::consts::PI * phase).cos()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::ArchSpec;

    fn model() -> Model {
        Model::init(&ArchSpec::mlp(&[3, 2]), 4).unwrap()
    }

    fn config(momentum: f64, weight_decay: f64) -> OptimizerConfig {
        OptimizerConfig {
            lr: 0.1,
            momentum,
            weight_decay,
        }
    }

    #[test]
    fn plain_gradient_descent_without_momentum() {
        let mut m = model();
        let before = m.params().to_vec();
        let grad: Vec<f64> = (0..m.num_params()).map(|i| i as f64 * 0.5 - 1.0).collect();
        let mut opt = OptimizerState::new(&m, &config(0.0, 0.0)).unwrap();
        opt.sgd_step(&mut m, &grad, 0.3).unwrap();
        for ((a, b), g) in m.params().iter().zip(&before).zip(&grad) {
            assert_eq!(*a, b - 0.3 * g);
        }
    }

    #[test]
    fn zero_gradient_is_a_fixed_point() {
        let mut m = model();
        let before = m.params().to_vec();
        let mut opt = OptimizerState::new(&m, &config(0.9, 0.0)).unwrap();
        opt.sgd_step(&mut m, &vec![0.0; before.len()], 0.1).unwrap();
        assert_eq!(m.params(), &before[..]);
    }

    #[test]
    fn two_momentum_steps_move_by_2_9_lr_g() {
        let mut m = model();
        let before = m.params().to_vec();
        let g = vec![0.25; before.len()];
        let mut opt = OptimizerState::new(&m, &config(0.9, 0.0)).unwrap();
        opt.sgd_step(&mut m, &g, 0.1).unwrap();
        opt.sgd_step(&mut m, &g, 0.1).unwrap();
        for (a, b) in m.params().iter().zip(&before) {
            assert!(((b - a) - 0.1 * 2.9 * 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn weight_decay_pulls_toward_zero() {
        let mut m = model();
        let before = m.params().to_vec();
        let mut opt = OptimizerState::new(&m, &config(0.0, 0.5)).unwrap();
        opt.sgd_step(&mut m, &vec![0.0; before.len()], 0.1).unwrap();
        for (a, b) in m.params().iter().zip(&before) {
            assert!((a - b * 0.95).abs() < 1e-15);
        }
    }

    #[test]
    fn non_finite_gradient_is_rejected() {
        let mut m = model();
        let before = m.params().to_vec();
        let mut grad = vec![0.0; before.len()];
        grad[1] = f64::NAN;
        let mut opt = OptimizerState::new(&m, &OptimizerConfig::default()).unwrap();
        assert!(matches!(opt.sgd_step(&mut m, &grad, 0.1), Err(Error::Diverged(_))));
        assert_eq!(m.params(), &before[..]);
    }

    #[test]
    fn cosine_schedule_endpoints() {
        assert_eq!(cosine_lr(1, 100, 0.1).unwrap(), 0.1);
        assert!((cosine_lr(51, 100, 0.1).unwrap() - 0.05).abs() < 1e-15);
        for total in [10usize, 11, 100, 352, 1760] {
            assert!(cosine_lr(total, total, 0.1).unwrap() < 0.1 / total as f64);
        }
        assert!(cosine_lr(0, 10, 0.1).is_err());
        assert!(cosine_lr(11, 10, 0.1).is_err());
    }

    #[test]
    fn cosine_schedule_is_nonincreasing() {
        for total in 2..60 {
            let lrs: Vec<f64> = (1..=total).map(|t| cosine_lr(t, total, 1.0).unwrap()).collect();
            assert!(lrs.windows(2).all(|w| w[1] <= w[0]), "T = {total}");
        }
    }
}
