//! Multi-label k-nearest-neighbor classifier with per-label Bayesian
//! calibration of neighbor label counts.
//!
//! Training estimates, for every label, the prior probability of the label
//! and the distribution of "how many of an instance's k nearest neighbors
//! carry the label", separately for instances that do and do not carry it,
//! all smoothed by `s`. Prediction counts the label among the query's k
//! nearest training points and applies the maximum-a-posteriori rule.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;
use crate::multilabel::MultiLabelClassifier;
use crate::scalar::{dist2, Scalar};

#[derive(Debug, Clone)]
pub struct MlknnModel<S: Scalar> {
    pub k: usize,
    pub smoothing: f64,
    train_x: Vec<Vec<S>>,
    train_y: BinaryMatrix,
    /// P(H_l): prior probability that an instance carries label l.
    priors: Vec<f64>,
    /// P(C_j | H_l) for j in 0..=k, per label.
    posterior_pos: Vec<Vec<f64>>,
    /// P(C_j | not H_l) for j in 0..=k, per label.
    posterior_neg: Vec<Vec<f64>>,
}

/// Indices of the k nearest points to `query` among `points`, Euclidean
/// distance, ties broken by index. `skip` excludes one index (self).
fn k_nearest<S: Scalar>(
    points: &[Vec<S>],
    query: &[S],
    k: usize,
    skip: Option<usize>,
) -> Vec<usize> {
    let mut by_distance: Vec<(S, usize)> = points
        .iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != skip)
        .map(|(i, p)| (dist2(p, query), i))
        .collect();
    by_distance.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite distances")
            .then(a.1.cmp(&b.1))
    });
    by_distance.truncate(k);
    by_distance.into_iter().map(|(_, i)| i).collect()
}

fn count_label(neighbors: &[usize], y: &BinaryMatrix, label: usize) -> usize {
    neighbors.iter().filter(|&&i| y.get(i, label)).count()
}

/// Train an MLkNN model. Requires `k <= N - 1` so every training instance
/// has k neighbors besides itself, and `s > 0`.
pub fn mlknn_train<S: Scalar>(
    x: &[Vec<S>],
    y: &BinaryMatrix,
    k: usize,
    smoothing: f64,
) -> Result<MlknnModel<S>> {
    let n = x.len();
    if n == 0 || n != y.rows() {
        return Err(Error::Contract(
            "features and labels must be nonempty and aligned".into(),
        ));
    }
    if k == 0 || k > n.saturating_sub(1) {
        return Err(Error::Contract(format!(
            "k = {k} must be in 1..=N-1 (N = {n})"
        )));
    }
    if !(smoothing > 0.0) {
        return Err(Error::Contract("smoothing must be positive".into()));
    }

    let n_labels = y.cols();
    let s = smoothing;

    let priors: Vec<f64> = (0..n_labels)
        .map(|l| (s + y.count_in_column(l) as f64) / (2.0 * s + n as f64))
        .collect();

    // k nearest neighbors of each training instance, excluding itself
    let neighbor_sets: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| k_nearest(x, &x[i], k, Some(i)))
        .collect();

    let mut posterior_pos = Vec::with_capacity(n_labels);
    let mut posterior_neg = Vec::with_capacity(n_labels);
    for l in 0..n_labels {
        let mut c_pos = vec![0usize; k + 1];
        let mut c_neg = vec![0usize; k + 1];
        for (i, neighbors) in neighbor_sets.iter().enumerate() {
            let j = count_label(neighbors, y, l);
            if y.get(i, l) {
                c_pos[j] += 1;
            } else {
                c_neg[j] += 1;
            }
        }
        let pos_total: usize = c_pos.iter().sum();
        let neg_total: usize = c_neg.iter().sum();
        posterior_pos.push(
            c_pos
                .iter()
                .map(|&c| (s + c as f64) / (s * (k as f64 + 1.0) + pos_total as f64))
                .collect(),
        );
        posterior_neg.push(
            c_neg
                .iter()
                .map(|&c| (s + c as f64) / (s * (k as f64 + 1.0) + neg_total as f64))
                .collect(),
        );
    }

    Ok(MlknnModel {
        k,
        smoothing,
        train_x: x.to_vec(),
        train_y: y.clone(),
        priors,
        posterior_pos,
        posterior_neg,
    })
}

impl<S: Scalar> MlknnModel<S> {
    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn posterior_pos(&self) -> &[Vec<f64>] {
        &self.posterior_pos
    }

    pub fn posterior_neg(&self) -> &[Vec<f64>] {
        &self.posterior_neg
    }

    fn check_query(&self, x: &[S]) -> Result<()> {
        let dim = self.train_x[0].len();
        if x.len() != dim {
            return Err(Error::Contract(format!(
                "query has {} components, model expects {dim}",
                x.len()
            )));
        }
        Ok(())
    }

    /// Per-label (P(H)·P(C_j|H), P(¬H)·P(C_j|¬H)) for a query.
    fn evidence(&self, x: &[S]) -> Result<Vec<(f64, f64)>> {
        self.check_query(x)?;
        let neighbors = k_nearest(&self.train_x, x, self.k, None);
        Ok((0..self.train_y.cols())
            .map(|l| {
                let j = count_label(&neighbors, &self.train_y, l);
                let with = self.priors[l] * self.posterior_pos[l][j];
                let without = (1.0 - self.priors[l]) * self.posterior_neg[l][j];
                (with, without)
            })
            .collect())
    }
}

impl<S: Scalar> MultiLabelClassifier<S> for MlknnModel<S> {
    fn n_labels(&self) -> usize {
        self.train_y.cols()
    }

    fn predict(&self, x: &[S]) -> Result<Vec<bool>> {
        Ok(self
            .evidence(x)?
            .into_iter()
            .map(|(with, without)| with >= without)
            .collect())
    }

    fn predict_scores(&self, x: &[S]) -> Result<Vec<S>> {
        Ok(self
            .evidence(x)?
            .into_iter()
            .map(|(with, without)| S::of(with / (with + without)))
            .collect())
    }
}

// --- serialization ----------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct MlknnJson {
    version: u32,
    k: usize,
    smoothing: f64,
    train_x: Vec<Vec<f64>>,
    train_y: Vec<Vec<bool>>,
    priors: Vec<f64>,
    posterior_pos: Vec<Vec<f64>>,
    posterior_neg: Vec<Vec<f64>>,
}

impl<S: Scalar> MlknnModel<S> {
    pub fn to_json(&self) -> Result<String> {
        let train_y: Vec<Vec<bool>> = (0..self.train_y.rows())
            .map(|r| self.train_y.row(r).to_vec())
            .collect();
        Ok(serde_json::to_string(&MlknnJson {
            version: 1,
            k: self.k,
            smoothing: self.smoothing,
            train_x: self
                .train_x
                .iter()
                .map(|row| row.iter().map(|v| v.as_f64()).collect())
                .collect(),
            train_y,
            priors: self.priors.clone(),
            posterior_pos: self.posterior_pos.clone(),
            posterior_neg: self.posterior_neg.clone(),
        })?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let parsed: MlknnJson = serde_json::from_str(json)?;
        if parsed.version != 1 {
            return Err(Error::Data(format!(
                "unsupported mlknn version {}",
                parsed.version
            )));
        }
        Ok(MlknnModel {
            k: parsed.k,
            smoothing: parsed.smoothing,
            train_x: parsed
                .train_x
                .iter()
                .map(|row| row.iter().map(|&v| S::of(v)).collect())
                .collect(),
            train_y: BinaryMatrix::from_rows(&parsed.train_y)?,
            priors: parsed.priors,
            posterior_pos: parsed.posterior_pos,
            posterior_neg: parsed.posterior_neg,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prior_formula_hand_value() {
        // N=4, one label with 2 positives, s=1: (1+2)/(2+4) = 0.5
        let x: Vec<Vec<f64>> = vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]];
        let y = BinaryMatrix::from_rows(&[
            vec![true],
            vec![true],
            vec![false],
            vec![false],
        ])
        .unwrap();
        let model = mlknn_train(&x, &y, 2, 1.0).unwrap();
        assert_eq!(model.priors()[0], 0.5);
        // priors strictly inside (0,1)
        assert!(model.priors()[0] > 0.0 && model.priors()[0] < 1.0);
    }

    #[test]
    fn posterior_rows_sum_to_one() {
        let x: Vec<Vec<f64>> = (0..8).map(|i| vec![i as f64, (i * i % 5) as f64]).collect();
        let rows: Vec<Vec<bool>> = (0..8).map(|i| vec![i % 2 == 0, i < 3]).collect();
        let y = BinaryMatrix::from_rows(&rows).unwrap();
        let model = mlknn_train(&x, &y, 3, 1.0).unwrap();
        for l in 0..2 {
            let sum_pos: f64 = model.posterior_pos()[l].iter().sum();
            let sum_neg: f64 = model.posterior_neg()[l].iter().sum();
            assert!((sum_pos - 1.0).abs() < 1e-12);
            assert!((sum_neg - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unanimous_labels_propagate() {
        let x: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64]).collect();
        let rows: Vec<Vec<bool>> = (0..5).map(|_| vec![true, false]).collect();
        let y = BinaryMatrix::from_rows(&rows).unwrap();
        let model = mlknn_train(&x, &y, 2, 1.0).unwrap();
        for q in [vec![-3.0], vec![2.2], vec![10.0]] {
            assert_eq!(model.predict(&q).unwrap(), vec![true, false]);
        }
    }

    #[test]
    fn k_bounds_enforced() {
        let x: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64]).collect();
        let y = BinaryMatrix::from_rows(&vec![vec![true]; 4]).unwrap();
        assert!(mlknn_train(&x, &y, 3, 1.0).is_ok());
        assert!(mlknn_train(&x, &y, 4, 1.0).is_err()); // k > N-1
        assert!(mlknn_train(&x, &y, 0, 1.0).is_err());
        assert!(mlknn_train(&x, &y, 2, 0.0).is_err());
    }

    #[test]
    fn neighbor_ties_break_by_index() {
        let points = vec![vec![1.0f64], vec![1.0], vec![1.0], vec![5.0]];
        let neighbors = k_nearest(&points, &[1.0], 2, None);
        assert_eq!(neighbors, vec![0, 1]);
        let neighbors = k_nearest(&points, &[1.0], 2, Some(0));
        assert_eq!(neighbors, vec![1, 2]);
    }

    /// Independent brute-force implementation of the published procedure,
    /// kept free of the production code paths.
    mod oracle {
        pub fn run(
            train_x: &[Vec<f64>],
            train_y: &[Vec<bool>],
            k: usize,
            s: f64,
            query: &[f64],
        ) -> Vec<bool> {
            let n = train_x.len();
            let n_labels = train_y[0].len();
            let dist = |a: &[f64], b: &[f64]| -> f64 {
                a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
            };
            let knn = |q: &[f64], exclude: isize| -> Vec<usize> {
                let mut all: Vec<(f64, usize)> = (0..n)
                    .filter(|&i| i as isize != exclude)
                    .map(|i| (dist(q, &train_x[i]), i))
                    .collect();
                all.sort_by(|a, b| a.partial_cmp(b).unwrap());
                all.iter().take(k).map(|&(_, i)| i).collect()
            };
            let mut out = Vec::new();
            for l in 0..n_labels {
                let positives = (0..n).filter(|&i| train_y[i][l]).count();
                let prior = (s + positives as f64) / (2.0 * s + n as f64);
                // count-of-neighbors-with-label histograms over training data
                let mut hist_pos = vec![0usize; k + 1];
                let mut hist_neg = vec![0usize; k + 1];
                for i in 0..n {
                    let c = knn(&train_x[i], i as isize)
                        .iter()
                        .filter(|&&j| train_y[j][l])
                        .count();
                    if train_y[i][l] {
                        hist_pos[c] += 1;
                    } else {
                        hist_neg[c] += 1;
                    }
                }
                let c_query = knn(query, -1).iter().filter(|&&j| train_y[j][l]).count();
                let p_c_given_pos = (s + hist_pos[c_query] as f64)
                    / (s * (k as f64 + 1.0) + positives as f64);
                let p_c_given_neg = (s + hist_neg[c_query] as f64)
                    / (s * (k as f64 + 1.0) + (n - positives) as f64);
                out.push(prior * p_c_given_pos >= (1.0 - prior) * p_c_given_neg);
            }
            out
        }
    }

    #[test]
    fn matches_brute_force_oracle_on_fixture() {
        // fixed N=6, L=2, k=2 fixture; all training points and fresh points
        let train_x: Vec<Vec<f64>> = vec![
            vec![0.0, 0.0],
            vec![0.1, 0.2],
            vec![0.9, 1.1],
            vec![1.0, 1.0],
            vec![0.5, 0.4],
            vec![1.2, 0.8],
        ];
        let train_y_rows = vec![
            vec![true, false],
            vec![true, false],
            vec![false, true],
            vec![false, true],
            vec![true, true],
            vec![false, false],
        ];
        let y = BinaryMatrix::from_rows(&train_y_rows).unwrap();
        let model = mlknn_train(&train_x, &y, 2, 1.0).unwrap();

        let mut queries = train_x.clone();
        queries.push(vec![0.05, 0.1]);
        queries.push(vec![1.05, 0.95]);
        queries.push(vec![0.6, 0.6]);
        for q in &queries {
            let expected = oracle::run(&train_x, &train_y_rows, 2, 1.0, q);
            assert_eq!(model.predict(q).unwrap(), expected, "query {q:?}");
        }
    }

    #[test]
    fn scores_follow_decision() {
        // two tight clusters so the neighbor-count posteriors are sharp:
        // positives always see 2 positive neighbors, negatives see 0
        let train_x: Vec<Vec<f64>> = vec![
            vec![0.0],
            vec![0.1],
            vec![0.2],
            vec![1.0],
            vec![1.1],
            vec![1.2],
        ];
        let y = BinaryMatrix::from_rows(&[
            vec![true],
            vec![true],
            vec![true],
            vec![false],
            vec![false],
            vec![false],
        ])
        .unwrap();
        let model = mlknn_train(&train_x, &y, 2, 1.0).unwrap();
        // P(C_2|H) = (1+3)/(3+3), P(C_2|notH) = (1+0)/(3+3), prior 0.5:
        // unanimous positive neighborhood scores (1/3)/(1/3 + 1/12) = 0.8
        let score = model.predict_scores(&[0.05]).unwrap()[0];
        assert!((score - 0.8).abs() < 1e-12, "score {score}");
        assert!(model.predict(&[0.05]).unwrap()[0]);
        let score = model.predict_scores(&[1.05]).unwrap()[0];
        assert!((score - 0.2).abs() < 1e-12, "score {score}");
        assert!(!model.predict(&[1.05]).unwrap()[0]);
    }

    #[test]
    fn json_roundtrip_preserves_predictions() {
        let x: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64, (7 * i % 4) as f64]).collect();
        let rows: Vec<Vec<bool>> = (0..6).map(|i| vec![i % 2 == 0, i > 2]).collect();
        let y = BinaryMatrix::from_rows(&rows).unwrap();
        let model = mlknn_train(&x, &y, 2, 1.0).unwrap();
        let json = model.to_json().unwrap();
        let loaded = MlknnModel::<f64>::from_json(&json).unwrap();
        for q in &x {
            assert_eq!(model.predict(q).unwrap(), loaded.predict(q).unwrap());
        }
    }
}
