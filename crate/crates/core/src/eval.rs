//! F-measure computation (per-label, micro, macro) and seeded k-fold
//! cross-validation with pooled predictions.

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;
use crate::rng::rng_for;
use crate::scalar::Scalar;

/// Binary confusion counts over a set of (instance, label) decisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub tpc: usize,
    pub fpc: usize,
    pub fnc: usize,
    pub tnc: usize,
}

impl ConfusionCounts {
    pub fn from_pairs<'a>(
        truth: impl IntoIterator<Item = &'a bool>,
        predicted: impl IntoIterator<Item = &'a bool>,
    ) -> Self {
        let mut counts = ConfusionCounts::default();
        for (&t, &p) in truth.into_iter().zip(predicted) {
            match (t, p) {
                (true, true) => counts.tpc += 1,
                (false, true) => counts.fpc += 1,
                (true, false) => counts.fnc += 1,
                (false, false) => counts.tnc += 1,
            }
        }
        counts
    }

    pub fn total(&self) -> usize {
        self.tpc + self.fpc + self.fnc + self.tnc
    }

    /// F1 = 2tp / (2tp + fp + fn), pinned to 0 when the denominator is 0.
    pub fn f1(&self) -> f64 {
        let denominator = 2 * self.tpc + self.fpc + self.fnc;
        if denominator == 0 {
            0.0
        } else {
            2.0 * self.tpc as f64 / denominator as f64
        }
    }
}

fn check_shapes(truth: &BinaryMatrix, predicted: &BinaryMatrix) -> Result<()> {
    if !truth.same_shape(predicted) {
        return Err(Error::Contract(format!(
            "shape mismatch: {}x{} truth vs {}x{} predictions",
            truth.rows(),
            truth.cols(),
            predicted.rows(),
            predicted.cols()
        )));
    }
    Ok(())
}

/// Confusion counts for one label column.
pub fn label_confusion(
    truth: &BinaryMatrix,
    predicted: &BinaryMatrix,
    label: usize,
) -> Result<ConfusionCounts> {
    check_shapes(truth, predicted)?;
    Ok(ConfusionCounts::from_pairs(
        &truth.column(label),
        &predicted.column(label),
    ))
}

/// F1 of one label column.
pub fn f1_per_label(truth: &BinaryMatrix, predicted: &BinaryMatrix, label: usize) -> Result<f64> {
    Ok(label_confusion(truth, predicted, label)?.f1())
}

/// F1 of every label column.
pub fn per_label_f1(truth: &BinaryMatrix, predicted: &BinaryMatrix) -> Result<Vec<f64>> {
    check_shapes(truth, predicted)?;
    (0..truth.cols())
        .map(|l| f1_per_label(truth, predicted, l))
        .collect()
}

/// Micro F1: confusion counts pooled over all labels, then F1.
pub fn micro_f1(truth: &BinaryMatrix, predicted: &BinaryMatrix) -> Result<f64> {
    check_shapes(truth, predicted)?;
    let mut pooled = ConfusionCounts::default();
    for l in 0..truth.cols() {
        let c = label_confusion(truth, predicted, l)?;
        pooled.tpc += c.tpc;
        pooled.fpc += c.fpc;
        pooled.fnc += c.fnc;
        pooled.tnc += c.tnc;
    }
    Ok(pooled.f1())
}

/// Macro F1: unweighted mean of per-label F1.
pub fn macro_f1(truth: &BinaryMatrix, predicted: &BinaryMatrix) -> Result<f64> {
    let scores = per_label_f1(truth, predicted)?;
    if scores.is_empty() {
        return Err(Error::Contract("macro F1 of an empty label set".into()));
    }
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}

/// A partition of instances into folds of near-equal size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldSplit {
    pub n_folds: usize,
    pub seed: u64,
    /// `assignment[i]` is the fold of instance i.
    pub assignment: Vec<usize>,
}

impl FoldSplit {
    pub fn n_instances(&self) -> usize {
        self.assignment.len()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.n_folds];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }

    /// (train, test) instance indices for one held-out fold, both ascending.
    pub fn train_test(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (i, &f) in self.assignment.iter().enumerate() {
            if f == fold {
                test.push(i);
            } else {
                train.push(i);
            }
        }
        (train, test)
    }
}

/// Seeded shuffle followed by round-robin fold assignment; fold sizes differ
/// by at most one.
pub fn kfold_split(n_instances: usize, n_folds: usize, seed: u64) -> Result<FoldSplit> {
    if n_folds < 2 {
        return Err(Error::Contract("need at least 2 folds".into()));
    }
    if n_instances < n_folds {
        return Err(Error::Contract(format!(
            "cannot split {n_instances} instances into {n_folds} folds"
        )));
    }
    let mut order: Vec<usize> = (0..n_instances).collect();
    order.shuffle(&mut rng_for(seed, 0));
    let mut assignment = vec![0usize; n_instances];
    for (position, &instance) in order.iter().enumerate() {
        assignment[instance] = position % n_folds;
    }
    Ok(FoldSplit {
        n_folds,
        seed,
        assignment,
    })
}

/// Outcome of one cross-validated run: predictions from all held-out folds
/// pooled into a single matrix (aligned with instance order), scored once.
#[derive(Debug, Clone)]
pub struct CvOutcome {
    pub predictions: BinaryMatrix,
    pub per_label_f1: Vec<f64>,
    pub micro_f1: f64,
    pub macro_f1: f64,
}

/// Train on k-1 folds and predict the held-out fold, for every fold; fold
/// jobs run in parallel. `run_fold(fold, train_x, train_y, test_x)` returns
/// the predicted label rows for `test_x` in order.
pub fn cross_validate<S, F>(
    x: &[Vec<S>],
    y: &BinaryMatrix,
    split: &FoldSplit,
    run_fold: F,
) -> Result<CvOutcome>
where
    S: Scalar,
    F: Fn(usize, &[Vec<S>], &BinaryMatrix, &[Vec<S>]) -> Result<Vec<Vec<bool>>> + Sync,
{
    if x.len() != y.rows() || x.len() != split.n_instances() {
        return Err(Error::Contract(
            "features, labels and fold split must cover the same instances".into(),
        ));
    }

    let fold_outputs: Vec<(Vec<usize>, Vec<Vec<bool>>)> = (0..split.n_folds)
        .into_par_iter()
        .map(|fold| {
            let (train_idx, test_idx) = split.train_test(fold);
            let train_x: Vec<Vec<S>> = train_idx.iter().map(|&i| x[i].clone()).collect();
            let train_rows: Vec<Vec<bool>> =
                train_idx.iter().map(|&i| y.row(i).to_vec()).collect();
            let train_y = BinaryMatrix::from_rows(&train_rows)?;
            let test_x: Vec<Vec<S>> = test_idx.iter().map(|&i| x[i].clone()).collect();
            let predicted = run_fold(fold, &train_x, &train_y, &test_x)?;
            if predicted.len() != test_idx.len() {
                return Err(Error::Contract(format!(
                    "fold {fold} returned {} predictions for {} test instances",
                    predicted.len(),
                    test_idx.len()
                )));
            }
            Ok((test_idx, predicted))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut predictions = BinaryMatrix::zeros(y.rows(), y.cols());
    for (test_idx, rows) in fold_outputs {
        for (&i, row) in test_idx.iter().zip(&rows) {
            predictions.set_row(i, row);
        }
    }
    let per_label = per_label_f1(y, &predictions)?;
    Ok(CvOutcome {
        micro_f1: micro_f1(y, &predictions)?,
        macro_f1: macro_f1(y, &predictions)?,
        per_label_f1: per_label,
        predictions,
    })
}
