//! Synthetic corpus generator: a desk-scale stand-in for restricted
//! clinical data.
//!
//! Generates a vocabulary with one planted token cluster per label, seven-
//! section documents with the canonical headers, diagnosis codes covering
//! all 18 top-level groups, and a consistent word-vector file. `signal`
//! controls how strongly documents reflect their labels: 0 plants nothing
//! (text independent of labels), 1 plants six cluster tokens per positive
//! label per note.

use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;
use crate::rng::rng_for;
use crate::text::SECTION_HEADERS;

/// Representative diagnosis code per top-level group, aligned with
/// [`crate::icd9::top_level_names`] order.
const GROUP_CODES: [&str; 18] = [
    "038.9",  // inf
    "174.9",  // neop
    "250.00", // endo
    "285.9",  // bld
    "296.20", // ment
    "348.3",  // nerv
    "401.9",  // circ
    "486",    // resp
    "530.81", // diges
    "584.9",  // gen
    "650",    // preg
    "682.6",  // skin
    "715.9",  // musc
    "745.5",  // cong
    "765.1",  // pren
    "780.6",  // symp
    "998.59", // inj
    "V05.3",  // e+v
];

const BACKGROUND_VOCAB: usize = 60;
const CLUSTER_TOKENS: usize = 4;
const MAX_SIGNAL_TOKENS: f64 = 8.0;
const BACKGROUND_SCALE: f64 = 0.15;

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub n_admissions: usize,
    pub n_labels: usize,
    pub dimension: usize,
    pub seed: u64,
    /// Planted signal strength in [0, 1].
    pub signal: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_admissions: 100,
            n_labels: 18,
            dimension: 25,
            seed: 42,
            signal: 1.0,
        }
    }
}

/// A generated fixture, both as in-memory data and as file contents.
#[derive(Debug, Clone)]
pub struct SynthFixture {
    pub admission_ids: Vec<String>,
    pub labels: BinaryMatrix,
    pub codes: Vec<String>,
    pub corpus_csv: String,
    pub labels_csv: String,
    pub vectors_text: String,
}

/// Paths of a fixture written to disk.
#[derive(Debug, Clone)]
pub struct SynthPaths {
    pub corpus: PathBuf,
    pub labels: PathBuf,
    pub vectors: PathBuf,
}

/// Diagnosis code string for synthetic label `l`: the 18 group
/// representatives first, then minor variants cycling through the groups.
fn code_for_label(l: usize) -> String {
    if l < GROUP_CODES.len() {
        GROUP_CODES[l].to_string()
    } else {
        let base = GROUP_CODES[l % GROUP_CODES.len()];
        let major: String = base.chars().take_while(|&c| c != '.').collect();
        format!("{major}.{:02}", 10 + l / GROUP_CODES.len())
    }
}

fn cluster_token(label: usize, j: usize) -> String {
    format!("sig{label}w{j}")
}

pub fn generate(cfg: &SynthConfig) -> Result<SynthFixture> {
    if cfg.n_admissions == 0 || cfg.n_labels == 0 || cfg.dimension == 0 {
        return Err(Error::Contract("synthetic sizes must be positive".into()));
    }
    if !(0.0..=1.0).contains(&cfg.signal) {
        return Err(Error::Contract("signal must lie in [0, 1]".into()));
    }
    let (n, labels, d) = (cfg.n_admissions, cfg.n_labels, cfg.dimension);
    let admission_ids: Vec<String> = (0..n).map(|a| format!("adm{a:05}")).collect();
    let codes: Vec<String> = (0..labels).map(code_for_label).collect();

    // label matrix: independent per-label prevalences from 0.6 down to 0.2,
    // then constant columns repaired so every label is learnable
    let mut rng = rng_for(cfg.seed, 1);
    let mut matrix = BinaryMatrix::zeros(n, labels);
    for l in 0..labels {
        let span = (labels.max(2) - 1) as f64;
        let prevalence = 0.6 - 0.4 * l as f64 / span;
        for a in 0..n {
            matrix.set(a, l, rng.random_bool(prevalence));
        }
    }
    for l in 0..labels {
        let count = matrix.count_in_column(l);
        if count == 0 {
            matrix.set(l % n, l, true);
        } else if count == n {
            matrix.set(l % n, l, false);
        }
    }

    // vocabulary and vectors: one direction per label cluster (orthogonalized
    // while the dimension allows), fainter background tokens
    let mut rng = rng_for(cfg.seed, 2);
    let mut gaussian_vec = |scale: f64| -> Vec<f64> {
        (0..d)
            .map(|_| {
                let g: f64 = StandardNormal.sample(&mut rng);
                g * scale
            })
            .collect()
    };
    let mut directions: Vec<Vec<f64>> = Vec::with_capacity(labels);
    for _ in 0..labels {
        let mut v = gaussian_vec(1.0);
        // Gram-Schmidt against earlier directions keeps clusters separable;
        // once the dimension is exhausted further directions stay random
        if directions.len() < d {
            for u in &directions {
                let proj: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                for (a, b) in v.iter_mut().zip(u) {
                    *a -= proj * b;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
        directions.push(v.into_iter().map(|x| x / norm).collect());
    }
    let mut vocab: Vec<(String, Vec<f64>)> = Vec::new();
    for (l, direction) in directions.iter().enumerate() {
        for j in 0..CLUSTER_TOKENS {
            let jitter = gaussian_vec(0.05);
            let vector: Vec<f64> = direction
                .iter()
                .zip(&jitter)
                .map(|(u, e)| u + e)
                .collect();
            vocab.push((cluster_token(l, j), vector));
        }
    }
    for j in 0..BACKGROUND_VOCAB {
        vocab.push((format!("bg{j}"), gaussian_vec(BACKGROUND_SCALE)));
    }

    let mut vectors_text = format!("{} {}\n", vocab.len(), d);
    for (token, vector) in &vocab {
        vectors_text.push_str(token);
        for value in vector {
            vectors_text.push(' ');
            vectors_text.push_str(&format!("{value}"));
        }
        vectors_text.push('\n');
    }

    // documents: 7 canonical sections, background tokens everywhere,
    // cluster tokens for positive labels scattered across sections
    let mut rng = rng_for(cfg.seed, 3);
    let signal_tokens = (MAX_SIGNAL_TOKENS * cfg.signal).round() as usize;
    let mut corpus = csv::WriterBuilder::new().from_writer(Vec::new());
    corpus
        .write_record(["admission_id", "note_id", "category", "text"])
        .map_err(|e| Error::Data(format!("corpus generation: {e}")))?;

    for (a, admission_id) in admission_ids.iter().enumerate() {
        let n_summaries = if a % 5 == 0 { 2 } else { 1 };
        for note_idx in 0..n_summaries {
            let mut sections: Vec<Vec<String>> = (0..SECTION_HEADERS.len())
                .map(|_| {
                    let len = rng.random_range(2..=6);
                    (0..len)
                        .map(|_| format!("bg{}", rng.random_range(0..BACKGROUND_VOCAB)))
                        .collect()
                })
                .collect();
            for l in 0..labels {
                if matrix.get(a, l) {
                    for _ in 0..signal_tokens {
                        let section = rng.random_range(0..sections.len());
                        let j = rng.random_range(0..CLUSTER_TOKENS);
                        sections[section].push(cluster_token(l, j));
                    }
                }
            }
            let text = sections
                .iter()
                .zip(SECTION_HEADERS)
                .map(|(tokens, header)| format!("{header}: {}", tokens.join(" ")))
                .collect::<Vec<_>>()
                .join(" ");
            corpus
                .write_record([
                    admission_id.as_str(),
                    &format!("{admission_id}-n{note_idx}"),
                    "Discharge summary",
                    &text,
                ])
                .map_err(|e| Error::Data(format!("corpus generation: {e}")))?;
        }
        if a % 7 == 3 {
            // an extra note of another category, ignored by the pipeline
            corpus
                .write_record([
                    admission_id.as_str(),
                    &format!("{admission_id}-extra"),
                    "Nursing",
                    "routine check bg0 bg1",
                ])
                .map_err(|e| Error::Data(format!("corpus generation: {e}")))?;
        }
    }
    let corpus_csv = String::from_utf8(
        corpus
            .into_inner()
            .map_err(|e| Error::Data(format!("corpus generation: {e}")))?,
    )
    .expect("generated corpus is utf-8");

    let mut labels_csv = String::from("admission_id,icd9_code,code_type\n");
    for (a, admission_id) in admission_ids.iter().enumerate() {
        for l in 0..labels {
            if matrix.get(a, l) {
                labels_csv.push_str(&format!("{admission_id},{},diag\n", codes[l]));
            }
        }
    }

    Ok(SynthFixture {
        admission_ids,
        labels: matrix,
        codes,
        corpus_csv,
        labels_csv,
        vectors_text,
    })
}

/// Generate and write `corpus.csv`, `labels.csv` and `vectors.vec`.
pub fn write_fixture(cfg: &SynthConfig, dir: impl AsRef<Path>) -> Result<SynthPaths> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let fixture = generate(cfg)?;
    let paths = SynthPaths {
        corpus: dir.join("corpus.csv"),
        labels: dir.join("labels.csv"),
        vectors: dir.join("vectors.vec"),
    };
    fs::write(&paths.corpus, &fixture.corpus_csv).map_err(|e| Error::io(&paths.corpus, e))?;
    fs::write(&paths.labels, &fixture.labels_csv).map_err(|e| Error::io(&paths.labels, e))?;
    fs::write(&paths.vectors, &fixture.vectors_text).map_err(|e| Error::io(&paths.vectors, e))?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::icd9::{parse_code, top_level_names, CodeType};

    #[test]
    fn group_codes_cover_all_18_groups() {
        let names = top_level_names();
        for (i, raw) in GROUP_CODES.iter().enumerate() {
            let code = parse_code(raw, CodeType::Diagnosis).unwrap();
            assert_eq!(code.top_level_group().unwrap(), names[i], "{raw}");
        }
    }

    #[test]
    fn extended_codes_are_distinct_and_valid() {
        let codes: Vec<String> = (0..60).map(code_for_label).collect();
        let mut unique = codes.clone();
        unique.sort();
        unique.dedup();
        assert_eq!(unique.len(), 60);
        for raw in &codes {
            parse_code(raw, CodeType::Diagnosis).unwrap();
        }
    }

    #[test]
    fn generator_contract_small() {
        let cfg = SynthConfig {
            n_admissions: 100,
            n_labels: 18,
            dimension: 10,
            seed: 7,
            signal: 1.0,
        };
        let fixture = generate(&cfg).unwrap();
        assert_eq!(fixture.labels.rows(), 100);
        assert_eq!(fixture.labels.cols(), 18);
        for l in 0..18 {
            let count = fixture.labels.count_in_column(l);
            assert!(count > 0 && count < 100, "label {l} constant");
        }
        assert!(fixture.vectors_text.starts_with(&format!(
            "{} 10\n",
            18 * CLUSTER_TOKENS + BACKGROUND_VOCAB
        )));
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = SynthConfig::default();
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(a.corpus_csv, b.corpus_csv);
        assert_eq!(a.labels_csv, b.labels_csv);
        assert_eq!(a.vectors_text, b.vectors_text);
        let other = generate(&SynthConfig {
            seed: 43,
            ..SynthConfig::default()
        })
        .unwrap();
        assert_ne!(a.corpus_csv, other.corpus_csv);
    }

    #[test]
    fn zero_signal_plants_no_cluster_tokens() {
        let cfg = SynthConfig {
            n_admissions: 20,
            n_labels: 5,
            dimension: 8,
            seed: 3,
            signal: 0.0,
        };
        let fixture = generate(&cfg).unwrap();
        assert!(!fixture.corpus_csv.contains("sig"));
    }

    #[test]
    fn fixture_files_parse_back() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = SynthConfig {
            n_admissions: 25,
            n_labels: 6,
            dimension: 5,
            seed: 11,
            signal: 0.8,
        };
        let paths = write_fixture(&cfg, dir.path()).unwrap();
        let notes = crate::text::load_corpus(&paths.corpus).unwrap();
        assert!(notes.len() >= 25);
        let table: crate::embedding::WordVectorTable<f64> =
            crate::embedding::load_vector_file(&paths.vectors).unwrap();
        assert_eq!(table.dimension(), 5);
        let assignments = crate::icd9::load_labels(&paths.labels).unwrap();
        assert!(!assignments.is_empty());
        // documents carry the canonical section headers
        assert!(notes[0].text.contains("Past Medical History:"));
    }
}
