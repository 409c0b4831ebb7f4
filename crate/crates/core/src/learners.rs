//! Linear binary base classifiers: L2-regularized logistic regression
//! trained either by batch gradient descent with backtracking line search or
//! by stochastic gradient descent with a decaying step size.
//!
//! The objective is mean logistic loss plus `(ridge/2)·‖w‖²` with an
//! unregularized bias. Training is deterministic given the config seed and
//! input order.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_for;
use crate::scalar::{dot, Scalar};

/// Which optimizer trains the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Solver {
    /// Full-batch gradient descent with backtracking line search.
    Batch,
    /// Per-example stochastic gradient descent, `epochs` passes with a
    /// seeded shuffle each pass and step size `learning_rate / sqrt(t)`.
    Sgd,
}

/// Base-learner hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// L2 penalty on the weights (the paper-style ridge value R).
    pub ridge: f64,
    pub solver: Solver,
    /// Number of SGD passes over the data.
    pub epochs: usize,
    /// Initial SGD step size.
    pub learning_rate: f64,
    /// Batch solver stops when the gradient norm falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            ridge: 1.0,
            solver: Solver::Batch,
            epochs: 50,
            learning_rate: 0.01,
            tolerance: 1e-6,
            max_iterations: 1000,
            seed: 0,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if self.ridge < 0.0 || !self.ridge.is_finite() {
            return Err(Error::Contract("ridge must be a finite nonnegative real".into()));
        }
        if self.epochs == 0 || self.max_iterations == 0 {
            return Err(Error::Contract("epochs and max_iterations must be positive".into()));
        }
        if self.learning_rate <= 0.0 || self.tolerance <= 0.0 {
            return Err(Error::Contract("learning_rate and tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// A trained linear model: weights over the feature vector plus a bias.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel<S: Scalar> {
    pub weights: Vec<S>,
    pub bias: S,
}

impl<S: Scalar> LinearModel<S> {
    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    /// Sigmoid of the linear score, `1/(1+exp(-(w·x+b)))`.
    pub fn predict_prob(&self, x: &[S]) -> Result<S> {
        if x.len() != self.weights.len() {
            return Err(Error::Contract(format!(
                "feature vector has {} components, model expects {}",
                x.len(),
                self.weights.len()
            )));
        }
        Ok(self.prob_unchecked(x))
    }

    pub(crate) fn prob_unchecked(&self, x: &[S]) -> S {
        sigmoid(dot(&self.weights, x) + self.bias)
    }

    /// 1 iff the predicted probability is at least `threshold` (boundary
    /// inclusive).
    pub fn predict_binary(&self, x: &[S], threshold: S) -> Result<bool> {
        Ok(self.predict_prob(x)? >= threshold)
    }
}

fn sigmoid<S: Scalar>(z: S) -> S {
    if z >= S::zero() {
        S::one() / (S::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (S::one() + e)
    }
}

/// log(1 + exp(z)) without overflow.
fn log1p_exp<S: Scalar>(z: S) -> S {
    z.max(S::zero()) + (-z.abs()).exp().ln_1p()
}

fn check_training_input<S: Scalar>(x: &[Vec<S>], y: &[bool]) -> Result<usize> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::Contract(format!(
            "need matching nonempty features and targets, got {} rows and {} targets",
            x.len(),
            y.len()
        )));
    }
    let dim = x[0].len();
    for (i, row) in x.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::Contract(format!(
                "feature row {i} has {} components, expected {dim}",
                row.len()
            )));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract(format!("non-finite feature in row {i}")));
        }
    }
    Ok(dim)
}

/// Intercept-only model for a constant target column: smoothed log-odds of
/// the base rate, so one-class labels never abort a run.
fn prior_only_model<S: Scalar>(dim: usize, y: &[bool]) -> LinearModel<S> {
    let positives = y.iter().filter(|&&v| v).count() as f64;
    let negatives = y.len() as f64 - positives;
    let bias = ((positives + 1.0) / (negatives + 1.0)).ln();
    LinearModel {
        weights: vec![S::zero(); dim],
        bias: S::of(bias),
    }
}

/// Regularized objective and its gradient at (weights, bias): mean logistic
/// loss plus `(ridge/2)·‖w‖²`, bias unregularized.
pub fn objective_and_gradient<S: Scalar>(
    x: &[Vec<S>],
    y: &[bool],
    weights: &[S],
    bias: S,
    ridge: f64,
) -> (S, Vec<S>, S) {
    let n = S::of(x.len() as f64);
    let ridge = S::of(ridge);
    let mut loss = S::zero();
    let mut grad_w = vec![S::zero(); weights.len()];
    let mut grad_b = S::zero();
    for (row, &target) in x.iter().zip(y) {
        let z = dot(weights, row) + bias;
        let t = if target { S::one() } else { S::zero() };
        loss += log1p_exp(z) - t * z;
        let residual = sigmoid(z) - t;
        for (g, &v) in grad_w.iter_mut().zip(row) {
            *g += residual * v;
        }
        grad_b += residual;
    }
    loss /= n;
    grad_b /= n;
    let half = S::of(0.5);
    for (g, &w) in grad_w.iter_mut().zip(weights) {
        *g = *g / n + ridge * w;
        loss += half * ridge * w * w;
    }
    (loss, grad_w, grad_b)
}

/// Train by batch gradient descent with backtracking (Armijo) line search.
/// Stops when the gradient norm is at most `cfg.tolerance` or after
/// `cfg.max_iterations` steps.
pub fn train_logistic<S: Scalar>(
    x: &[Vec<S>],
    y: &[bool],
    cfg: &TrainConfig,
) -> Result<LinearModel<S>> {
    cfg.validate()?;
    let dim = check_training_input(x, y)?;
    if y.iter().all(|&v| v) || y.iter().all(|&v| !v) {
        return Ok(prior_only_model(dim, y));
    }

    let armijo = S::of(1e-4);
    let half = S::of(0.5);
    let mut weights = vec![S::zero(); dim];
    let mut bias = S::zero();
    let (mut loss, mut grad_w, mut grad_b) =
        objective_and_gradient(x, y, &weights, bias, cfg.ridge);

    // line search warm start: grow from the last accepted step so flat
    // objectives are not capped at unit steps
    let mut step_start = S::one();
    for _ in 0..cfg.max_iterations {
        let grad_sq = dot(&grad_w, &grad_w) + grad_b * grad_b;
        if grad_sq.sqrt() <= S::of(cfg.tolerance) {
            break;
        }
        let mut step = step_start;
        let mut accepted = false;
        for _ in 0..100 {
            let cand_w: Vec<S> = weights
                .iter()
                .zip(&grad_w)
                .map(|(&w, &g)| w - step * g)
                .collect();
            let cand_b = bias - step * grad_b;
            let (cand_loss, cand_gw, cand_gb) =
                objective_and_gradient(x, y, &cand_w, cand_b, cfg.ridge);
            if cand_loss <= loss - armijo * step * grad_sq {
                weights = cand_w;
                bias = cand_b;
                loss = cand_loss;
                grad_w = cand_gw;
                grad_b = cand_gb;
                accepted = true;
                step_start = (step + step).min(S::of(1e8));
                break;
            }
            step *= half;
        }
        if !accepted {
            break; // no descent step representable; at numerical optimum
        }
    }
    Ok(LinearModel { weights, bias })
}

/// Train by SGD: `cfg.epochs` passes over the data, each pass visiting the
/// examples in a freshly seeded shuffle, stepping `learning_rate / sqrt(t)`
/// along the per-example gradient of the regularized objective.
pub fn train_sgd<S: Scalar>(x: &[Vec<S>], y: &[bool], cfg: &TrainConfig) -> Result<LinearModel<S>> {
    cfg.validate()?;
    let dim = check_training_input(x, y)?;
    if y.iter().all(|&v| v) || y.iter().all(|&v| !v) {
        return Ok(prior_only_model(dim, y));
    }

    let ridge = S::of(cfg.ridge);
    let mut weights = vec![S::zero(); dim];
    let mut bias = S::zero();
    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut t = 0u64;
    for epoch in 0..cfg.epochs {
        let mut rng = rng_for(cfg.seed, epoch as u64);
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = S::of(cfg.learning_rate / (t as f64).sqrt());
            let target = if y[i] { S::one() } else { S::zero() };
            let residual = sigmoid(dot(&weights, &x[i]) + bias) - target;
            for (w, &v) in weights.iter_mut().zip(&x[i]) {
                *w -= eta * (residual * v + ridge * *w);
            }
            bias -= eta * residual;
        }
    }
    Ok(LinearModel { weights, bias })
}

/// Train with the solver named in the config.
pub fn train<S: Scalar>(x: &[Vec<S>], y: &[bool], cfg: &TrainConfig) -> Result<LinearModel<S>> {
    match cfg.solver {
        Solver::Batch => train_logistic(x, y, cfg),
        Solver::Sgd => train_sgd(x, y, cfg),
    }
}

// --- serialization ---------------------------------------------------------

const MODEL_MAGIC: &[u8; 4] = b"ICDL";
const MODEL_VERSION: u32 = 1;

/// JSON wire form of a linear model with its training config echoed.
#[derive(Debug, Serialize, Deserialize)]
pub struct LinearModelJson {
    pub version: u32,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub config: TrainConfig,
}

impl<S: Scalar> LinearModel<S> {
    /// Canonical JSON serialization: weights, bias, config echo.
    pub fn to_json(&self, cfg: &TrainConfig) -> Result<String> {
        Ok(serde_json::to_string(&LinearModelJson {
            version: MODEL_VERSION,
            weights: self.weights.iter().map(|w| w.as_f64()).collect(),
            bias: self.bias.as_f64(),
            config: cfg.clone(),
        })?)
    }

    pub fn from_json(json: &str) -> Result<(Self, TrainConfig)> {
        let parsed: LinearModelJson = serde_json::from_str(json)?;
        if parsed.version != MODEL_VERSION {
            return Err(Error::Data(format!(
                "unsupported model version {}",
                parsed.version
            )));
        }
        Ok((
            LinearModel {
                weights: parsed.weights.iter().map(|&w| S::of(w)).collect(),
                bias: S::of(parsed.bias),
            },
            parsed.config,
        ))
    }

    /// Versioned little-endian binary serialization.
    pub fn to_bytes(&self, cfg: &TrainConfig) -> Vec<u8> {
        let mut out = Vec::with_capacity(64 + 8 * self.weights.len());
        out.extend_from_slice(MODEL_MAGIC);
        out.extend_from_slice(&MODEL_VERSION.to_le_bytes());
        out.extend_from_slice(&cfg.ridge.to_le_bytes());
        out.push(match cfg.solver {
            Solver::Batch => 0,
            Solver::Sgd => 1,
        });
        out.extend_from_slice(&(cfg.epochs as u32).to_le_bytes());
        out.extend_from_slice(&cfg.learning_rate.to_le_bytes());
        out.extend_from_slice(&cfg.tolerance.to_le_bytes());
        out.extend_from_slice(&(cfg.max_iterations as u32).to_le_bytes());
        out.extend_from_slice(&cfg.seed.to_le_bytes());
        out.extend_from_slice(&(self.weights.len() as u32).to_le_bytes());
        for w in &self.weights {
            out.extend_from_slice(&w.as_f64().to_le_bytes());
        }
        out.extend_from_slice(&self.bias.as_f64().to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<(Self, TrainConfig)> {
        let bad = || Error::Data("malformed binary model".into());
        let mut pos = 0usize;
        let take = |pos: &mut usize, n: usize| -> Result<&[u8]> {
            let slice = bytes.get(*pos..*pos + n).ok_or_else(bad)?;
            *pos += n;
            Ok(slice)
        };
        let f64_at = |pos: &mut usize| -> Result<f64> {
            Ok(f64::from_le_bytes(take(pos, 8)?.try_into().unwrap()))
        };
        let u32_at = |pos: &mut usize| -> Result<u32> {
            Ok(u32::from_le_bytes(take(pos, 4)?.try_into().unwrap()))
        };

        if take(&mut pos, 4)? != MODEL_MAGIC {
            return Err(bad());
        }
        if u32_at(&mut pos)? != MODEL_VERSION {
            return Err(Error::Data("unsupported model version".into()));
        }
        let ridge = f64_at(&mut pos)?;
        let solver = match take(&mut pos, 1)?[0] {
            0 => Solver::Batch,
            1 => Solver::Sgd,
            _ => return Err(bad()),
        };
        let epochs = u32_at(&mut pos)? as usize;
        let learning_rate = f64_at(&mut pos)?;
        let tolerance = f64_at(&mut pos)?;
        let max_iterations = u32_at(&mut pos)? as usize;
        let seed = u64::from_le_bytes(take(&mut pos, 8)?.try_into().unwrap());
        let dim = u32_at(&mut pos)? as usize;
        let mut weights = Vec::with_capacity(dim);
        for _ in 0..dim {
            weights.push(S::of(f64_at(&mut pos)?));
        }
        let bias = S::of(f64_at(&mut pos)?);
        if pos != bytes.len() {
            return Err(bad());
        }
        Ok((
            LinearModel { weights, bias },
            TrainConfig {
                ridge,
                solver,
                epochs,
                learning_rate,
                tolerance,
                max_iterations,
                seed,
            },
        ))
    }
}
