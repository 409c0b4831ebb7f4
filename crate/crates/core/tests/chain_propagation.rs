//! Chain propagation on dependent labels: when a label is a joint function
//! of an earlier label and the features, a chain that receives the earlier
//! label as a feature beats independent per-label models by a wide margin.

use icdlab_core::eval::{cross_validate, f1_per_label, kfold_split};
use icdlab_core::learners::TrainConfig;
use icdlab_core::matrix::BinaryMatrix;
use icdlab_core::multilabel::{br_train, cc_train, ecc_train, MultiLabelClassifier};
use icdlab_core::rng::rng_for;
use rand::Rng;

/// Label A follows one feature direction; label B is A AND a second
/// direction. B's positive region (an intersection of half-spaces) is not
/// linearly separable in the features alone, but is linear once A is
/// available as a chain feature.
fn dependent_label_data(n: usize) -> (Vec<Vec<f64>>, BinaryMatrix) {
    let mut rng = rng_for(606, 0);
    let d = 6usize;
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let rows: Vec<Vec<bool>> = x
        .iter()
        .map(|row| {
            let a = row[0] + rng.random_range(-0.05..0.05) > 0.0;
            // a thin corner region: trivial given A, poorly approximated by
            // any single half-space over the features alone
            let b = a && row[1] > 0.65;
            vec![a, b]
        })
        .collect();
    (x, BinaryMatrix::from_rows(&rows).unwrap())
}

#[test]
fn chain_beats_binary_relevance_on_dependent_label() {
    let (x, y) = dependent_label_data(1200);
    let cfg = TrainConfig {
        ridge: 0.001,
        ..TrainConfig::default()
    };
    let split = kfold_split(x.len(), 10, 5).unwrap();

    let br = cross_validate(&x, &y, &split, |_, tx, ty, qx| {
        let model = br_train(tx, ty, &cfg)?;
        qx.iter().map(|q| model.predict(q)).collect()
    })
    .unwrap();
    let cc = cross_validate(&x, &y, &split, |_, tx, ty, qx| {
        let model = cc_train(tx, ty, &[0, 1], &cfg)?;
        qx.iter().map(|q| model.predict(q)).collect()
    })
    .unwrap();

    let br_b = f1_per_label(&y, &br.predictions, 1).unwrap();
    let cc_b = f1_per_label(&y, &cc.predictions, 1).unwrap();
    // measured once at 0.145 (CC 0.907 vs BR 0.761); floored with margin
    assert!(
        cc_b - br_b >= 0.12 && cc_b >= 0.88,
        "expected the chain to gain at least 0.12 F1 on the dependent label, \
         got CC {cc_b:.4} vs BR {br_b:.4}"
    );
    // the chain does not hurt the driving label
    let br_a = f1_per_label(&y, &br.predictions, 0).unwrap();
    let cc_a = f1_per_label(&y, &cc.predictions, 0).unwrap();
    assert!((br_a - cc_a).abs() < 0.05, "A: BR {br_a:.4} vs CC {cc_a:.4}");
}

#[test]
fn ensemble_matches_best_chain_direction() {
    // with the informative order present among the random orders, the
    // ensemble recovers most of the chain's advantage
    let (x, y) = dependent_label_data(300);
    let cfg = TrainConfig {
        ridge: 0.001,
        ..TrainConfig::default()
    };
    let split = kfold_split(x.len(), 5, 3).unwrap();
    let ecc = cross_validate(&x, &y, &split, |fold, tx, ty, qx| {
        let model = ecc_train(tx, ty, 4, &cfg, fold as u64)?;
        qx.iter().map(|q| model.predict(q)).collect()
    })
    .unwrap();
    let br = cross_validate(&x, &y, &split, |_, tx, ty, qx| {
        let model = br_train(tx, ty, &cfg)?;
        qx.iter().map(|q| model.predict(q)).collect()
    })
    .unwrap();
    let ecc_b = f1_per_label(&y, &ecc.predictions, 1).unwrap();
    let br_b = f1_per_label(&y, &br.predictions, 1).unwrap();
    assert!(
        ecc_b > br_b,
        "ensemble {ecc_b:.4} should beat binary relevance {br_b:.4} on the dependent label"
    );
}
