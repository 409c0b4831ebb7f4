//! Multi-label strategies over linear base learners: binary relevance,
//! classifier chains, and ensembles of randomly ordered chains.
//!
//! All predictors are deterministic functions of (model, x). Chain training
//! feeds ground-truth earlier labels as extra features; chain prediction
//! feeds thresholded predicted labels forward.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::{train, LinearModel, TrainConfig};
use crate::matrix::BinaryMatrix;
use crate::mlknn::MlknnModel;
use crate::rng::{derive_seed, rng_for};
use crate::scalar::Scalar;

/// Inclusive decision threshold shared by all strategies.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Common predictor surface of the four strategies.
pub trait MultiLabelClassifier<S: Scalar> {
    fn n_labels(&self) -> usize;
    /// Predicted binary label vector for one instance.
    fn predict(&self, x: &[S]) -> Result<Vec<bool>>;
    /// Per-label real scores: probabilities (BR/CC), vote fractions (ECC)
    /// or calibrated posteriors (MLkNN).
    fn predict_scores(&self, x: &[S]) -> Result<Vec<S>>;
}

fn check_dims<S: Scalar>(x: &[Vec<S>], y: &BinaryMatrix) -> Result<usize> {
    if x.len() != y.rows() || x.is_empty() {
        return Err(Error::Contract(format!(
            "features ({} rows) and labels ({} rows) must be nonempty and aligned",
            x.len(),
            y.rows()
        )));
    }
    Ok(x[0].len())
}

// --- binary relevance -------------------------------------------------------

/// One independent binary model per label, in label-space order.
#[derive(Debug, Clone, PartialEq)]
pub struct BrModel<S: Scalar> {
    pub models: Vec<LinearModel<S>>,
    pub config: TrainConfig,
}

/// Train one binary model per label column, each on the full feature matrix.
pub fn br_train<S: Scalar>(
    x: &[Vec<S>],
    y: &BinaryMatrix,
    cfg: &TrainConfig,
) -> Result<BrModel<S>> {
    check_dims(x, y)?;
    let models = (0..y.cols())
        .into_par_iter()
        .map(|label| train(x, &y.column(label), cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(BrModel {
        models,
        config: cfg.clone(),
    })
}

impl<S: Scalar> MultiLabelClassifier<S> for BrModel<S> {
    fn n_labels(&self) -> usize {
        self.models.len()
    }

    fn predict(&self, x: &[S]) -> Result<Vec<bool>> {
        let threshold = S::of(DEFAULT_THRESHOLD);
        self.models
            .iter()
            .map(|m| m.predict_binary(x, threshold))
            .collect()
    }

    fn predict_scores(&self, x: &[S]) -> Result<Vec<S>> {
        self.models.iter().map(|m| m.predict_prob(x)).collect()
    }
}

// --- classifier chain -------------------------------------------------------

/// A chain of binary models; the model at position `p` consumes the
/// embedding plus the `p` earlier chain labels as 0/1 features, appended in
/// chain order.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainModel<S: Scalar> {
    /// Permutation of label indices: `order[p]` is the label predicted at
    /// position `p`.
    pub order: Vec<usize>,
    pub models: Vec<LinearModel<S>>,
    pub config: TrainConfig,
}

fn check_order(order: &[usize], n_labels: usize) -> Result<()> {
    if order.len() != n_labels {
        return Err(Error::Contract(format!(
            "chain order has {} entries for {n_labels} labels",
            order.len()
        )));
    }
    let mut seen = vec![false; n_labels];
    for &l in order {
        if l >= n_labels || seen[l] {
            return Err(Error::Contract("chain order is not a permutation".into()));
        }
        seen[l] = true;
    }
    Ok(())
}

/// Train a chain in the given label order. Position `p` is trained with the
/// ground-truth values of the earlier chain labels appended to the features.
pub fn cc_train<S: Scalar>(
    x: &[Vec<S>],
    y: &BinaryMatrix,
    order: &[usize],
    cfg: &TrainConfig,
) -> Result<ChainModel<S>> {
    check_dims(x, y)?;
    check_order(order, y.cols())?;

    let mut augmented: Vec<Vec<S>> = x.to_vec();
    let mut models = Vec::with_capacity(order.len());
    for (position, &label) in order.iter().enumerate() {
        let targets = y.column(label);
        models.push(train(&augmented, &targets, cfg)?);
        if position + 1 < order.len() {
            for (row, &target) in augmented.iter_mut().zip(&targets) {
                row.push(if target { S::one() } else { S::zero() });
            }
        }
    }
    Ok(ChainModel {
        order: order.to_vec(),
        models,
        config: cfg.clone(),
    })
}

impl<S: Scalar> ChainModel<S> {
    /// Probabilities per label (indexed by label, not chain position),
    /// produced by feeding thresholded predictions forward.
    fn chain_probs(&self, x: &[S]) -> Result<Vec<S>> {
        let threshold = S::of(DEFAULT_THRESHOLD);
        let mut features = x.to_vec();
        let mut probs = vec![S::zero(); self.order.len()];
        for (position, &label) in self.order.iter().enumerate() {
            let prob = self.models[position].predict_prob(&features)?;
            probs[label] = prob;
            if position + 1 < self.order.len() {
                features.push(if prob >= threshold { S::one() } else { S::zero() });
            }
        }
        Ok(probs)
    }
}

impl<S: Scalar> MultiLabelClassifier<S> for ChainModel<S> {
    fn n_labels(&self) -> usize {
        self.order.len()
    }

    fn predict(&self, x: &[S]) -> Result<Vec<bool>> {
        let threshold = S::of(DEFAULT_THRESHOLD);
        Ok(self
            .chain_probs(x)?
            .into_iter()
            .map(|p| p >= threshold)
            .collect())
    }

    fn predict_scores(&self, x: &[S]) -> Result<Vec<S>> {
        self.chain_probs(x)
    }
}

// --- ensemble of classifier chains ------------------------------------------

/// Randomly ordered chains polled by averaging their binary votes per label.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleModel<S: Scalar> {
    pub chains: Vec<ChainModel<S>>,
    /// Seed each chain's base config was derived from.
    pub chain_seeds: Vec<u64>,
    pub vote_threshold: f64,
}

/// The chain order used for ensemble member `chain_index` under `seed`:
/// a seeded Fisher-Yates shuffle of the identity permutation.
pub fn draw_chain_order(n_labels: usize, seed: u64, chain_index: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut order: Vec<usize> = (0..n_labels).collect();
    order.shuffle(&mut rng_for(seed, chain_index));
    order
}

/// Per-chain base-learner seed for ensemble member `chain_index`.
pub fn chain_seed(seed: u64, chain_index: u64) -> u64 {
    derive_seed(seed, chain_index)
}

/// Train `ensemble_size` chains with independently seeded random orders.
pub fn ecc_train<S: Scalar>(
    x: &[Vec<S>],
    y: &BinaryMatrix,
    ensemble_size: usize,
    cfg: &TrainConfig,
    seed: u64,
) -> Result<EnsembleModel<S>> {
    if ensemble_size == 0 {
        return Err(Error::Contract("ensemble size must be at least 1".into()));
    }
    check_dims(x, y)?;
    let chains = (0..ensemble_size)
        .into_par_iter()
        .map(|c| {
            let order = draw_chain_order(y.cols(), seed, c as u64);
            let chain_cfg = TrainConfig {
                seed: chain_seed(seed, c as u64),
                ..cfg.clone()
            };
            cc_train(x, y, &order, &chain_cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnsembleModel {
        chains,
        chain_seeds: (0..ensemble_size)
            .map(|c| chain_seed(seed, c as u64))
            .collect(),
        vote_threshold: DEFAULT_THRESHOLD,
    })
}

impl<S: Scalar> EnsembleModel<S> {
    /// Fraction of chains voting each label in.
    fn vote_fractions(&self, x: &[S]) -> Result<Vec<S>> {
        let n_labels = self.n_labels();
        let mut votes = vec![0usize; n_labels];
        for chain in &self.chains {
            for (label, hit) in chain.predict(x)?.into_iter().enumerate() {
                if hit {
                    votes[label] += 1;
                }
            }
        }
        let total = S::of(self.chains.len() as f64);
        Ok(votes
            .into_iter()
            .map(|v| S::of(v as f64) / total)
            .collect())
    }
}

impl<S: Scalar> MultiLabelClassifier<S> for EnsembleModel<S> {
    fn n_labels(&self) -> usize {
        self.chains.first().map_or(0, |c| c.n_labels())
    }

    fn predict(&self, x: &[S]) -> Result<Vec<bool>> {
        let threshold = S::of(self.vote_threshold);
        Ok(self
            .vote_fractions(x)?
            .into_iter()
            .map(|v| v >= threshold)
            .collect())
    }

    fn predict_scores(&self, x: &[S]) -> Result<Vec<S>> {
        self.vote_fractions(x)
    }
}

// --- strategy wrapper and bundle serialization ------------------------------

/// Any trained strategy, for uniform dispatch and bundle I/O.
#[derive(Debug, Clone)]
pub enum AnyModel<S: Scalar> {
    Br(BrModel<S>),
    Cc(ChainModel<S>),
    Ecc(EnsembleModel<S>),
    Mlknn(MlknnModel<S>),
}

impl<S: Scalar> MultiLabelClassifier<S> for AnyModel<S> {
    fn n_labels(&self) -> usize {
        match self {
            AnyModel::Br(m) => m.n_labels(),
            AnyModel::Cc(m) => m.n_labels(),
            AnyModel::Ecc(m) => m.n_labels(),
            AnyModel::Mlknn(m) => m.n_labels(),
        }
    }

    fn predict(&self, x: &[S]) -> Result<Vec<bool>> {
        match self {
            AnyModel::Br(m) => m.predict(x),
            AnyModel::Cc(m) => m.predict(x),
            AnyModel::Ecc(m) => m.predict(x),
            AnyModel::Mlknn(m) => m.predict(x),
        }
    }

    fn predict_scores(&self, x: &[S]) -> Result<Vec<S>> {
        match self {
            AnyModel::Br(m) => m.predict_scores(x),
            AnyModel::Cc(m) => m.predict_scores(x),
            AnyModel::Ecc(m) => m.predict_scores(x),
            AnyModel::Mlknn(m) => m.predict_scores(x),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct BundleManifest {
    format_version: u32,
    strategy: String,
    n_labels: usize,
    threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orders: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    chain_seeds: Option<Vec<u64>>,
}

const BUNDLE_VERSION: u32 = 1;

fn write_learner<S: Scalar>(
    dir: &Path,
    name: &str,
    model: &LinearModel<S>,
    cfg: &TrainConfig,
) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, model.to_json(cfg)?).map_err(|e| Error::io(path, e))
}

fn read_learner<S: Scalar>(dir: &Path, name: &str) -> Result<(LinearModel<S>, TrainConfig)> {
    let path = dir.join(name);
    let json = fs::read_to_string(&path).map_err(|e| Error::io(path, e))?;
    LinearModel::from_json(&json)
}

impl<S: Scalar> AnyModel<S> {
    pub fn strategy_name(&self) -> &'static str {
        match self {
            AnyModel::Br(_) => "br",
            AnyModel::Cc(_) => "cc",
            AnyModel::Ecc(_) => "ecc",
            AnyModel::Mlknn(_) => "mlknn",
        }
    }

    /// Write this model as a directory bundle: a manifest plus one JSON
    /// file per base learner (or the kNN state).
    pub fn save_bundle(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut manifest = BundleManifest {
            format_version: BUNDLE_VERSION,
            strategy: self.strategy_name().to_string(),
            n_labels: self.n_labels(),
            threshold: DEFAULT_THRESHOLD,
            order: None,
            orders: None,
            chain_seeds: None,
        };
        match self {
            AnyModel::Br(m) => {
                for (label, learner) in m.models.iter().enumerate() {
                    write_learner(dir, &format!("label_{label:03}.json"), learner, &m.config)?;
                }
            }
            AnyModel::Cc(m) => {
                manifest.order = Some(m.order.clone());
                for (pos, learner) in m.models.iter().enumerate() {
                    write_learner(dir, &format!("pos_{pos:03}.json"), learner, &m.config)?;
                }
            }
            AnyModel::Ecc(m) => {
                manifest.threshold = m.vote_threshold;
                manifest.orders = Some(m.chains.iter().map(|c| c.order.clone()).collect());
                manifest.chain_seeds = Some(m.chain_seeds.clone());
                for (c, chain) in m.chains.iter().enumerate() {
                    for (pos, learner) in chain.models.iter().enumerate() {
                        write_learner(
                            dir,
                            &format!("chain_{c:03}_pos_{pos:03}.json"),
                            learner,
                            &chain.config,
                        )?;
                    }
                }
            }
            AnyModel::Mlknn(m) => {
                let path = dir.join("mlknn.json");
                fs::write(&path, m.to_json()?).map_err(|e| Error::io(path, e))?;
            }
        }
        let path = dir.join("manifest.json");
        fs::write(&path, serde_json::to_string_pretty(&manifest)?).map_err(|e| Error::io(path, e))
    }

    pub fn load_bundle(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let manifest_path = dir.join("manifest.json");
        let manifest: BundleManifest = serde_json::from_str(
            &fs::read_to_string(&manifest_path).map_err(|e| Error::io(manifest_path, e))?,
        )?;
        if manifest.format_version != BUNDLE_VERSION {
            return Err(Error::Data(format!(
                "unsupported bundle version {}",
                manifest.format_version
            )));
        }
        let bad = |msg: &str| Error::Data(format!("bundle {}: {msg}", dir.display()));
        match manifest.strategy.as_str() {
            "br" => {
                let mut models = Vec::with_capacity(manifest.n_labels);
                let mut config = None;
                for label in 0..manifest.n_labels {
                    let (m, c) = read_learner(dir, &format!("label_{label:03}.json"))?;
                    models.push(m);
                    config = Some(c);
                }
                Ok(AnyModel::Br(BrModel {
                    models,
                    config: config.ok_or_else(|| bad("empty label set"))?,
                }))
            }
            "cc" => {
                let order = manifest.order.ok_or_else(|| bad("missing chain order"))?;
                let mut models = Vec::with_capacity(order.len());
                let mut config = None;
                for pos in 0..order.len() {
                    let (m, c) = read_learner(dir, &format!("pos_{pos:03}.json"))?;
                    models.push(m);
                    config = Some(c);
                }
                Ok(AnyModel::Cc(ChainModel {
                    order,
                    models,
                    config: config.ok_or_else(|| bad("empty chain"))?,
                }))
            }
            "ecc" => {
                let orders = manifest.orders.ok_or_else(|| bad("missing chain orders"))?;
                let chain_seeds = manifest
                    .chain_seeds
                    .ok_or_else(|| bad("missing chain seeds"))?;
                let mut chains = Vec::with_capacity(orders.len());
                for (c, order) in orders.into_iter().enumerate() {
                    let mut models = Vec::with_capacity(order.len());
                    let mut config = None;
                    for pos in 0..order.len() {
                        let (m, cf) =
                            read_learner(dir, &format!("chain_{c:03}_pos_{pos:03}.json"))?;
                        models.push(m);
                        config = Some(cf);
                    }
                    chains.push(ChainModel {
                        order,
                        models,
                        config: config.ok_or_else(|| bad("empty chain"))?,
                    });
                }
                Ok(AnyModel::Ecc(EnsembleModel {
                    chains,
                    chain_seeds,
                    vote_threshold: manifest.threshold,
                }))
            }
            "mlknn" => {
                let path = dir.join("mlknn.json");
                let json = fs::read_to_string(&path).map_err(|e| Error::io(path, e))?;
                Ok(AnyModel::Mlknn(MlknnModel::from_json(&json)?))
            }
            other => Err(bad(&format!("unknown strategy {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::train_logistic;

    fn toy_data() -> (Vec<Vec<f64>>, BinaryMatrix) {
        // label 0 follows the sign of x0, label 1 the sign of x1
        let x: Vec<Vec<f64>> = (0..24)
            .map(|i| {
                vec![
                    if i % 2 == 0 { 1.0 } else { -1.0 },
                    if (i / 2) % 2 == 0 { 1.0 } else { -1.0 },
                ]
            })
            .collect();
        let rows: Vec<Vec<bool>> = x.iter().map(|r| vec![r[0] > 0.0, r[1] > 0.0]).collect();
        (x, BinaryMatrix::from_rows(&rows).unwrap())
    }

    fn cfg() -> TrainConfig {
        TrainConfig::default()
    }

    #[test]
    fn br_equals_independent_binary_trainings() {
        let (x, y) = toy_data();
        let br = br_train(&x, &y, &cfg()).unwrap();
        for label in 0..y.cols() {
            let solo = train_logistic(&x, &y.column(label), &cfg()).unwrap();
            assert_eq!(br.models[label], solo, "label {label}");
        }
    }

    #[test]
    fn br_constant_label_predicts_constant() {
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let rows: Vec<Vec<bool>> = (0..10).map(|i| vec![i >= 5, false]).collect();
        let y = BinaryMatrix::from_rows(&rows).unwrap();
        let br = br_train(&x, &y, &cfg()).unwrap();
        for row in &x {
            assert!(!br.predict(row).unwrap()[1]);
        }
    }

    #[test]
    fn br_identical_columns_give_identical_models() {
        let x: Vec<Vec<f64>> = (0..12).map(|i| vec![(i as f64) - 6.0]).collect();
        let rows: Vec<Vec<bool>> = (0..12).map(|i| vec![i % 3 == 0, i % 3 == 0]).collect();
        let y = BinaryMatrix::from_rows(&rows).unwrap();
        let br = br_train(&x, &y, &cfg()).unwrap();
        assert_eq!(br.models[0], br.models[1]);
    }

    #[test]
    fn cc_single_label_equals_br() {
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![(i as f64) - 4.5]).collect();
        let rows: Vec<Vec<bool>> = (0..10).map(|i| vec![i >= 5]).collect();
        let y = BinaryMatrix::from_rows(&rows).unwrap();
        let br = br_train(&x, &y, &cfg()).unwrap();
        let cc = cc_train(&x, &y, &[0], &cfg()).unwrap();
        assert_eq!(br.models[0], cc.models[0]);
        for row in &x {
            assert_eq!(br.predict(row).unwrap(), cc.predict(row).unwrap());
        }
    }

    #[test]
    fn cc_feature_layout_grows_along_chain() {
        let (x, y) = toy_data();
        let cc = cc_train(&x, &y, &[1, 0], &cfg()).unwrap();
        assert_eq!(cc.models[0].dimension(), 2);
        assert_eq!(cc.models[1].dimension(), 3);
    }

    #[test]
    fn cc_rejects_bad_orders() {
        let (x, y) = toy_data();
        assert!(cc_train(&x, &y, &[0, 0], &cfg()).is_err());
        assert!(cc_train(&x, &y, &[0], &cfg()).is_err());
        assert!(cc_train(&x, &y, &[0, 2], &cfg()).is_err());
    }

    #[test]
    fn cc_prefix_is_stable_under_ablation() {
        // position p depends only on x and earlier positions
        let (x, y) = toy_data();
        let cc = cc_train(&x, &y, &[0, 1], &cfg()).unwrap();
        let truncated = ChainModel {
            order: vec![0],
            models: vec![cc.models[0].clone()],
            config: cc.config.clone(),
        };
        for row in &x {
            let full = cc.predict(row).unwrap();
            let short = truncated.predict(row).unwrap();
            assert_eq!(full[0], short[0]);
        }
    }

    #[test]
    fn label_permutation_equivariance() {
        let (x, y) = toy_data();
        let swapped_rows: Vec<Vec<bool>> = (0..y.rows())
            .map(|r| vec![y.get(r, 1), y.get(r, 0)])
            .collect();
        let y_swapped = BinaryMatrix::from_rows(&swapped_rows).unwrap();

        let br = br_train(&x, &y, &cfg()).unwrap();
        let br_swapped = br_train(&x, &y_swapped, &cfg()).unwrap();
        for row in &x {
            let a = br.predict(row).unwrap();
            let b = br_swapped.predict(row).unwrap();
            assert_eq!(a[0], b[1]);
            assert_eq!(a[1], b[0]);
        }

        let cc = cc_train(&x, &y, &[0, 1], &cfg()).unwrap();
        let cc_swapped = cc_train(&x, &y_swapped, &[1, 0], &cfg()).unwrap();
        for row in &x {
            let a = cc.predict(row).unwrap();
            let b = cc_swapped.predict(row).unwrap();
            assert_eq!(a[0], b[1]);
            assert_eq!(a[1], b[0]);
        }
    }

    #[test]
    fn ecc_of_one_is_a_chain() {
        let (x, y) = toy_data();
        for seed in [1u64, 7, 300] {
            let ecc = ecc_train(&x, &y, 1, &cfg(), seed).unwrap();
            let order = draw_chain_order(y.cols(), seed, 0);
            let chain_cfg = TrainConfig {
                seed: chain_seed(seed, 0),
                ..cfg()
            };
            let cc = cc_train(&x, &y, &order, &chain_cfg).unwrap();
            assert_eq!(ecc.chains[0], cc);
            for row in &x {
                assert_eq!(ecc.predict(row).unwrap(), cc.predict(row).unwrap());
            }
        }
    }

    #[test]
    fn ecc_votes_match_inclusive_threshold() {
        let (x, y) = toy_data();
        let ecc = ecc_train(&x, &y, 3, &cfg(), 5).unwrap();
        for row in x.iter().take(4) {
            let scores = ecc.predict_scores(row).unwrap();
            let preds = ecc.predict(row).unwrap();
            for (s, p) in scores.iter().zip(&preds) {
                assert_eq!(*p, *s >= 0.5);
            }
        }
    }

    #[test]
    fn ecc_requires_chains() {
        let (x, y) = toy_data();
        assert!(ecc_train(&x, &y, 0, &cfg(), 1).is_err());
    }

    #[test]
    fn draw_chain_order_is_seeded_permutation() {
        let a = draw_chain_order(6, 9, 0);
        let b = draw_chain_order(6, 9, 0);
        assert_eq!(a, b);
        let c = draw_chain_order(6, 9, 1);
        let mut sorted = c.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn bundles_roundtrip_every_strategy() {
        let (x, y) = toy_data();
        let dir = tempfile::tempdir().unwrap();
        let models: Vec<AnyModel<f64>> = vec![
            AnyModel::Br(br_train(&x, &y, &cfg()).unwrap()),
            AnyModel::Cc(cc_train(&x, &y, &[1, 0], &cfg()).unwrap()),
            AnyModel::Ecc(ecc_train(&x, &y, 2, &cfg(), 3).unwrap()),
            AnyModel::Mlknn(crate::mlknn::mlknn_train(&x, &y, 3, 1.0).unwrap()),
        ];
        for model in models {
            let path = dir.path().join(model.strategy_name());
            model.save_bundle(&path).unwrap();
            let loaded = AnyModel::<f64>::load_bundle(&path).unwrap();
            assert_eq!(loaded.strategy_name(), model.strategy_name());
            for row in &x {
                assert_eq!(loaded.predict(row).unwrap(), model.predict(row).unwrap());
                assert_eq!(
                    loaded.predict_scores(row).unwrap(),
                    model.predict_scores(row).unwrap()
                );
            }
        }
    }
}
