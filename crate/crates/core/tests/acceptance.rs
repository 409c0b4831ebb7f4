//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (visible with `cargo test --test acceptance -- --nocapture`).

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use icdlab_core::embedding::{
    embed_document, embed_sections_concat, embed_stats_concat, WordVectorTable,
};
use icdlab_core::eval::{cross_validate, f1_per_label, kfold_split, macro_f1, micro_f1};
use icdlab_core::experiment::{cmd_compare, cmd_run, embed_corpus, ExperimentConfig};
use icdlab_core::icd9::{parse_code, CodeKind, CodeType, GroupTable, Icd9Code, TOP_LEVEL_GROUPS};
use icdlab_core::learners::{objective_and_gradient, train, train_logistic, TrainConfig};
use icdlab_core::matrix::BinaryMatrix;
use icdlab_core::mlknn::mlknn_train;
use icdlab_core::multilabel::{
    br_train, cc_train, chain_seed, draw_chain_order, ecc_train, MultiLabelClassifier,
};
use icdlab_core::rng::rng_for;
use icdlab_core::stats::{friedman_test, nemenyi_cd, rank_row, ScoreTable};
use icdlab_core::synth::{write_fixture, SynthConfig, SynthPaths};
use rand::Rng;

/// Chance band for null-signal macro F1, frozen from a 20-seed calibration
/// run of the 500-admission fixture (observed range 0.2398..0.3134).
const NULL_BAND: (f64, f64) = (0.20, 0.36);

fn pass(name: &str) {
    println!("ACCEPTANCE {name}: PASS");
}

fn fixture_config(
    dir: &Path,
    paths: &SynthPaths,
    overrides: &[(&str, &str)],
) -> ExperimentConfig {
    let mut pairs = BTreeMap::new();
    pairs.insert("corpus".to_string(), paths.corpus.display().to_string());
    pairs.insert("labels".to_string(), paths.labels.display().to_string());
    pairs.insert("vectors".to_string(), paths.vectors.display().to_string());
    pairs.insert("out".to_string(), dir.join("out").display().to_string());
    for (key, value) in overrides {
        pairs.insert(key.to_string(), value.to_string());
    }
    ExperimentConfig::from_pairs(&pairs).expect("valid fixture config")
}

// --- embedding contract -------------------------------------------------------

#[test]
fn embedding_contract() {
    let start = Instant::now();
    let mut rng = rng_for(501, 0);
    for &d in &[10usize, 50] {
        let entries: Vec<(String, Vec<f64>)> = (0..200)
            .map(|t| {
                let vector: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
                (format!("w{t}"), vector)
            })
            .collect();
        let table = WordVectorTable::from_entries(d, entries).unwrap();
        for _ in 0..500 {
            let len = rng.random_range(1..40);
            let tokens: Vec<String> = (0..len)
                .map(|_| {
                    if rng.random_bool(0.8) {
                        format!("w{}", rng.random_range(0..200))
                    } else {
                        "out-of-vocab".to_string()
                    }
                })
                .collect();
            let has_in_vocab = tokens.iter().any(|t| t.starts_with('w'));
            let embedded = embed_document(&tokens, &table);
            assert_eq!(embedded.len(), d);
            if has_in_vocab {
                let norm: f64 = embedded.values.iter().map(|v| v * v).sum::<f64>().sqrt();
                assert!((norm - 1.0).abs() <= 1e-9, "norm {norm}");
            }

            let sections: Vec<Vec<String>> = (0..7)
                .map(|_| {
                    (0..rng.random_range(0..6))
                        .map(|_| format!("w{}", rng.random_range(0..200)))
                        .collect()
                })
                .collect();
            assert_eq!(embed_sections_concat(&sections, &table).unwrap().len(), 7 * d);
            assert_eq!(embed_stats_concat(&tokens, &table).len(), 6 * d);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    pass("embedding contract");
}

// --- pre-processing fidelity ----------------------------------------------------

#[test]
fn preprocessing_fidelity() {
    use icdlab_core::text::{preprocess, tokenize, PreprocessConfig};
    let input = "Medications on Admission: Omeprazole 20 mg daily, Furosemide 10mg daily.";
    let got = preprocess(&tokenize(input), &PreprocessConfig::enabled(None));
    let expected: Vec<String> = "medications on admission omeprazole mg daily furosemide 10mg daily"
        .split(' ')
        .map(str::to_string)
        .collect();
    assert_eq!(got, expected);
    pass("pre-processing fidelity");
}

// --- icd9 mapping ---------------------------------------------------------------

#[test]
fn icd9_mapping() {
    let start = Instant::now();
    let table = GroupTable::builtin();
    let diag = |raw: &str| parse_code(raw, CodeType::Diagnosis).unwrap();

    assert_eq!(diag("401.9").top_level_group().unwrap(), "circ");
    assert_eq!(diag("V15.82").top_level_group().unwrap(), "e+v");
    assert_eq!(table.sub_level_group(&diag("275.0")).unwrap().name, "endo4");
    assert_eq!(table.sub_level_group(&diag("275.5")).unwrap().name, "endo4");
    assert_eq!(table.sub_level_group(&diag("V86")).unwrap().name, "v12");
    assert_eq!(table.sub_level_group(&diag("565.1")).unwrap().name, "diges6");
    assert_eq!(table.sub_level_group(&diag("565.0")).unwrap().name, "diges6");

    let probe = |kind: CodeKind, major: u16| Icd9Code {
        raw: String::new(),
        kind,
        major,
        minor: None,
        code_type: CodeType::Diagnosis,
    };
    for major in 1..=999u16 {
        let range_hits = TOP_LEVEL_GROUPS
            .iter()
            .filter(|&&(_, lo, hi)| major >= lo && major <= hi)
            .count();
        assert_eq!(range_hits, 1, "major {major}");
        probe(CodeKind::Numeric, major).top_level_group().unwrap();
    }
    for major in 800..=999u16 {
        assert_eq!(probe(CodeKind::E, major).top_level_group().unwrap(), "e+v");
    }
    for major in 1..=91u16 {
        assert_eq!(probe(CodeKind::V, major).top_level_group().unwrap(), "e+v");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass("icd9 mapping");
}

// --- binary relevance oracle ------------------------------------------------------

#[test]
fn br_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let paths = write_fixture(
        &SynthConfig {
            n_admissions: 200,
            n_labels: 18,
            dimension: 16,
            seed: 9,
            signal: 0.8,
        },
        dir.path(),
    )
    .unwrap();
    let config = fixture_config(dir.path(), &paths, &[("seed", "9")]);
    let embedded = embed_corpus(&config).unwrap();
    let mut warnings = Vec::new();
    let label_matrix =
        icdlab_core::experiment::label_stage(&config, &embedded.admission_ids, &mut warnings)
            .unwrap();
    let x = &embedded.features;
    let y = &label_matrix.matrix;
    assert_eq!(x.len(), 200);
    assert_eq!(y.cols(), 18);

    let cfg = TrainConfig::default();
    let br = br_train(x, y, &cfg).unwrap();
    for label in 0..y.cols() {
        let solo = train(x, &y.column(label), &cfg).unwrap();
        assert_eq!(br.models[label], solo, "label {label} model differs");
    }
    for row in x {
        let pooled = br.predict(row).unwrap();
        for label in 0..y.cols() {
            let solo = br.models[label].predict_binary(row, 0.5).unwrap();
            assert_eq!(pooled[label], solo);
        }
    }
    pass("binary relevance oracle");
}

// --- ensemble collapse --------------------------------------------------------------

#[test]
fn ecc_collapse() {
    let mut rng = rng_for(77, 0);
    let n = 60;
    let labels = 6;
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..5).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let rows: Vec<Vec<bool>> = x
        .iter()
        .map(|row| (0..labels).map(|l| row[l % 5] > 0.1).collect())
        .collect();
    let y = BinaryMatrix::from_rows(&rows).unwrap();
    let cfg = TrainConfig::default();

    for seed in [2u64, 19, 404] {
        let ecc = ecc_train(&x, &y, 1, &cfg, seed).unwrap();
        let order = draw_chain_order(labels, seed, 0);
        let chain_cfg = TrainConfig {
            seed: chain_seed(seed, 0),
            ..cfg.clone()
        };
        let cc = cc_train(&x, &y, &order, &chain_cfg).unwrap();
        assert_eq!(ecc.chains[0], cc, "seed {seed} models differ");
        for row in &x {
            assert_eq!(
                ecc.predict(row).unwrap(),
                cc.predict(row).unwrap(),
                "seed {seed} predictions differ"
            );
        }
    }
    pass("ensemble of one collapses to a chain");
}

// --- chain signal propagation ---------------------------------------------------------

/// Planted dataset where label B equals label A exactly and only A is
/// expressed in the features. The chain is required to beat binary
/// relevance on B's pooled-CV F1 by at least 0.2 absolute.
#[test]
fn cc_signal_propagation() {
    let mut rng = rng_for(2025, 0);
    let n = 400usize;
    let d = 8usize;
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    // A follows the first coordinate; B is an exact copy of A
    let rows: Vec<Vec<bool>> = x
        .iter()
        .map(|row| {
            let a = row[0] + rng.random_range(-0.3..0.3) > 0.0;
            vec![a, a]
        })
        .collect();
    let y = BinaryMatrix::from_rows(&rows).unwrap();
    let cfg = TrainConfig {
        ridge: 0.001,
        ..TrainConfig::default()
    };
    let split = kfold_split(n, 10, 5).unwrap();

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
    let gap = cc_b - br_b;
    assert!(
        gap >= 0.2,
        "chain gained {gap:+.4} F1 on label B (CC {cc_b:.4} vs BR {br_b:.4}); \
         expected at least +0.2. With B identical to A and both strategies \
         training on the same features and targets, the B-models see the same \
         information and this gap does not materialize; see the chain \
         propagation integration test for the dependent-label setting where \
         chaining does help."
    );
    pass("chain signal propagation");
}

// --- mlknn oracle -----------------------------------------------------------------------

/// Brute-force reimplementation of the published MLkNN procedure, written
/// against the formulas directly and kept independent of the library path.
fn mlknn_brute_force(
    train_x: &[Vec<f64>],
    train_y: &[Vec<bool>],
    k: usize,
    s: f64,
    query: &[f64],
) -> Vec<bool> {
    let n = train_x.len();
    let n_labels = train_y[0].len();
    let dist =
        |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>();
    let knn = |q: &[f64], exclude: isize| -> Vec<usize> {
        let mut all: Vec<(f64, usize)> = (0..n)
            .filter(|&i| i as isize != exclude)
            .map(|i| (dist(q, &train_x[i]), i))
            .collect();
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        all.iter().take(k).map(|&(_, i)| i).collect()
    };
    (0..n_labels)
        .map(|l| {
            let positives = (0..n).filter(|&i| train_y[i][l]).count();
            let prior = (s + positives as f64) / (2.0 * s + n as f64);
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
            let with = prior * (s + hist_pos[c_query] as f64)
                / (s * (k as f64 + 1.0) + positives as f64);
            let without = (1.0 - prior) * (s + hist_neg[c_query] as f64)
                / (s * (k as f64 + 1.0) + (n - positives) as f64);
            with >= without
        })
        .collect()
}

#[test]
fn mlknn_oracle() {
    // prior hand value: N=4, 2 positives, s=1 -> (1+2)/(2+4) = 0.5
    let x4: Vec<Vec<f64>> = vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]];
    let y4 = BinaryMatrix::from_rows(&[vec![true], vec![true], vec![false], vec![false]]).unwrap();
    let model4 = mlknn_train(&x4, &y4, 2, 1.0).unwrap();
    assert_eq!(model4.priors()[0], 0.5);

    // fixed N=6, L=2, k=2 fixture: the library must match the brute force
    // on all queries (training points and fresh ones)
    let train_x: Vec<Vec<f64>> = vec![
        vec![0.0, 0.0],
        vec![0.1, 0.2],
        vec![0.9, 1.1],
        vec![1.0, 1.0],
        vec![0.5, 0.4],
        vec![1.2, 0.8],
    ];
    let train_y = vec![
        vec![true, false],
        vec![true, false],
        vec![false, true],
        vec![false, true],
        vec![true, true],
        vec![false, false],
    ];
    let y = BinaryMatrix::from_rows(&train_y).unwrap();
    let model = mlknn_train(&train_x, &y, 2, 1.0).unwrap();
    let mut queries = train_x.clone();
    queries.extend([vec![0.05, 0.1], vec![1.05, 0.95], vec![0.6, 0.6], vec![-1.0, 2.0]]);
    for q in &queries {
        assert_eq!(
            model.predict(q).unwrap(),
            mlknn_brute_force(&train_x, &train_y, 2, 1.0, q),
            "query {q:?}"
        );
    }
    pass("mlknn oracle");
}

// --- gradient check ------------------------------------------------------------------------

#[test]
fn gradient_check() {
    let mut rng = rng_for(808, 0);
    for instance in 0..50 {
        let n = rng.random_range(2..10);
        let d = rng.random_range(1..6);
        let x: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let y: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.5..1.5)).collect();
        let b: f64 = rng.random_range(-1.5..1.5);
        let ridge: f64 = rng.random_range(0.0..3.0);

        let (_, grad_w, grad_b) = objective_and_gradient(&x, &y, &w, b, ridge);
        let h = 1e-6;
        let check = |analytic: f64, numeric: f64, what: &str| {
            let denominator = numeric.abs().max(analytic.abs()).max(1.0);
            assert!(
                (numeric - analytic).abs() / denominator < 1e-5,
                "instance {instance} {what}: analytic {analytic} vs numeric {numeric}"
            );
        };
        for j in 0..d {
            let mut wp = w.clone();
            let mut wm = w.clone();
            wp[j] += h;
            wm[j] -= h;
            let (lp, _, _) = objective_and_gradient(&x, &y, &wp, b, ridge);
            let (lm, _, _) = objective_and_gradient(&x, &y, &wm, b, ridge);
            check(grad_w[j], (lp - lm) / (2.0 * h), &format!("dw[{j}]"));
        }
        let (lp, _, _) = objective_and_gradient(&x, &y, &w, b + h, ridge);
        let (lm, _, _) = objective_and_gradient(&x, &y, &w, b - h, ridge);
        check(grad_b, (lp - lm) / (2.0 * h), "db");
    }
    pass("gradient check");
}

// --- metrics oracle --------------------------------------------------------------------------

#[test]
fn metrics_oracle() {
    let truth =
        BinaryMatrix::from_rows(&[vec![true, true], vec![false, false]]).unwrap();
    let predicted =
        BinaryMatrix::from_rows(&[vec![true, false], vec![false, true]]).unwrap();
    assert_eq!(macro_f1(&truth, &predicted).unwrap(), 0.5);
    assert_eq!(micro_f1(&truth, &predicted).unwrap(), 0.5);
    assert_eq!(micro_f1(&truth, &truth).unwrap(), 1.0);
    assert_eq!(macro_f1(&truth, &truth).unwrap(), 1.0);
    pass("metrics oracle");
}

// --- friedman / nemenyi -----------------------------------------------------------------------

#[test]
fn friedman_nemenyi() {
    // k=3, N=4 with constant ranks (1,2,3) per item: chi2 must be exactly 8
    let constant = ScoreTable::new(
        vec!["a".into(), "b".into(), "c".into()],
        (0..4).map(|i| format!("i{i}")).collect(),
        vec![vec![0.9, 0.5, 0.1]; 4],
    )
    .unwrap();
    let outcome = friedman_test(&constant, 0.05).unwrap();
    assert!((outcome.chi2 - 8.0).abs() < 1e-12, "chi2 {}", outcome.chi2);

    // reference critical difference
    let cd = nemenyi_cd(2, 18, 0.05).unwrap();
    assert!((cd - 0.4619).abs() <= 5e-4, "cd {cd}");

    // identical scores never reject
    let identical = ScoreTable::new(
        vec!["a".into(), "b".into(), "c".into()],
        (0..5).map(|i| format!("i{i}")).collect(),
        vec![vec![0.7, 0.7, 0.7]; 5],
    )
    .unwrap();
    let outcome = friedman_test(&identical, 0.05).unwrap();
    assert_eq!(outcome.chi2, 0.0);
    assert!(!outcome.reject);

    // rank computation vs an independent counting oracle on 100 random
    // tables quantized to force ties
    let mut rng = rng_for(33, 0);
    for _ in 0..100 {
        let k = rng.random_range(2..9);
        let scores: Vec<f64> = (0..k)
            .map(|_| rng.random_range(0..7) as f64 / 6.0)
            .collect();
        let ranks = rank_row(&scores);
        for (j, &s) in scores.iter().enumerate() {
            let greater = scores.iter().filter(|&&v| v > s).count() as f64;
            let equal = scores.iter().filter(|&&v| v == s).count() as f64;
            let midrank = greater + (equal - 1.0) / 2.0 + 1.0;
            assert!((ranks[j] - midrank).abs() < 1e-12, "scores {scores:?}");
        }
    }
    pass("friedman and nemenyi");
}

// --- end-to-end determinism ---------------------------------------------------------------------

#[test]
fn end_to_end_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let paths = write_fixture(
        &SynthConfig {
            n_admissions: 500,
            n_labels: 18,
            dimension: 25,
            seed: 11,
            signal: 1.0,
        },
        dir.path(),
    )
    .unwrap();

    let ecc_config = fixture_config(
        dir.path(),
        &paths,
        &[
            ("strategy", "ecc(10)"),
            ("folds", "10"),
            ("seed", "11"),
            ("ridge", "0.001"),
            ("out", &dir.path().join("ecc").display().to_string()),
        ],
    );
    let start = Instant::now();
    cmd_run(&ecc_config).unwrap();
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 300.0,
        "full run took {elapsed:?}, expected under 5 minutes"
    );
    let first = std::fs::read_to_string(dir.path().join("ecc/report.json")).unwrap();
    cmd_run(&ecc_config).unwrap();
    let second = std::fs::read_to_string(dir.path().join("ecc/report.json")).unwrap();
    let strip = |raw: &str| {
        let mut value: serde_json::Value = serde_json::from_str(raw).unwrap();
        value.as_object_mut().unwrap().remove("timings_s");
        value
    };
    assert_eq!(strip(&first), strip(&second), "reports differ beyond timings");

    // a second strategy on the same fixture, then byte-identical CD plots
    // from two compare invocations
    let br_config = fixture_config(
        dir.path(),
        &paths,
        &[
            ("strategy", "br"),
            ("folds", "10"),
            ("seed", "11"),
            ("ridge", "0.001"),
            ("out", &dir.path().join("br").display().to_string()),
        ],
    );
    cmd_run(&br_config).unwrap();
    let reports = vec![
        dir.path().join("ecc/report.json"),
        dir.path().join("br/report.json"),
    ];
    cmd_compare(&reports, 0.05, dir.path().join("cmp1")).unwrap();
    cmd_compare(&reports, 0.05, dir.path().join("cmp2")).unwrap();
    let svg1 = std::fs::read(dir.path().join("cmp1/cd_plot.svg")).unwrap();
    let svg2 = std::fs::read(dir.path().join("cmp2/cd_plot.svg")).unwrap();
    assert_eq!(svg1, svg2, "CD plot bytes differ");
    pass("end-to-end determinism");
}

// --- planted-signal sanity -------------------------------------------------------------------------

#[test]
fn planted_signal_sanity() {
    let dir = tempfile::tempdir().unwrap();

    // dimension contracts hold for every composition on the same corpus
    let paths = write_fixture(
        &SynthConfig {
            n_admissions: 80,
            n_labels: 18,
            dimension: 12,
            seed: 21,
            signal: 1.0,
        },
        dir.path().join("dims"),
    )
    .unwrap();
    for (composition, factor) in [("sum_norm", 1usize), ("section_concat", 7), ("stat_concat", 6)] {
        let config = fixture_config(dir.path(), &paths, &[("composition", composition)]);
        let embedded = embed_corpus(&config).unwrap();
        assert_eq!(embedded.features[0].len(), 12 * factor, "{composition}");
        if composition == "sum_norm" {
            for row in &embedded.features {
                let norm: f64 = row.iter().map(|v| v * v).sum::<f64>().sqrt();
                // multi-note admissions hold averaged embeddings, which are
                // shorter than unit; single-note rows are unit length
                assert!(norm <= 1.0 + 1e-9, "norm {norm}");
                assert!(norm > 0.0);
            }
        }
    }

    // high-signal run clears the regression floor
    let strong = write_fixture(
        &SynthConfig {
            n_admissions: 500,
            n_labels: 18,
            dimension: 25,
            seed: 7,
            signal: 1.0,
        },
        dir.path().join("strong"),
    )
    .unwrap();
    let config = fixture_config(
        dir.path(),
        &strong,
        &[
            ("folds", "10"),
            ("seed", "7"),
            ("ridge", "0.001"),
            ("out", &dir.path().join("strong-out").display().to_string()),
        ],
    );
    let report = cmd_run(&config).unwrap();
    assert!(
        report.macro_f1 >= 0.9,
        "high-signal macro F1 {} below the 0.9 floor",
        report.macro_f1
    );

    // null-signal runs stay inside the frozen chance band
    for seed in [100u64, 101] {
        let null = write_fixture(
            &SynthConfig {
                n_admissions: 500,
                n_labels: 18,
                dimension: 25,
                seed,
                signal: 0.0,
            },
            dir.path().join(format!("null{seed}")),
        )
        .unwrap();
        let config = fixture_config(
            dir.path(),
            &null,
            &[
                ("folds", "10"),
                ("seed", &seed.to_string()),
                ("ridge", "0.001"),
                (
                    "out",
                    &dir.path().join(format!("null-out{seed}")).display().to_string(),
                ),
            ],
        );
        let report = cmd_run(&config).unwrap();
        assert!(
            report.macro_f1 >= NULL_BAND.0 && report.macro_f1 <= NULL_BAND.1,
            "null-signal macro F1 {} outside chance band {NULL_BAND:?}",
            report.macro_f1
        );
    }
    pass("planted-signal sanity");
}
