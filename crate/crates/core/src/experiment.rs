//! Config-driven experiment pipeline: ingest corpus + labels + vectors,
//! run cross-validated multi-label training, emit reports, and compare runs
//! with the rank-based significance procedure.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cdplot;
use crate::embedding::{
    average_embeddings, embed_document, embed_sections_concat, embed_stats_concat,
    load_vector_file, DocumentEmbedding, WordVectorTable,
};
use crate::error::{Error, Result};
use crate::eval::{cross_validate, kfold_split};
use crate::icd9::{build_label_matrix, build_label_space, load_labels, GroupTable, LabelMatrix, LabelMode};
use crate::learners::{Solver, TrainConfig};
use crate::matrix::BinaryMatrix;
use crate::mlknn::mlknn_train;
use crate::multilabel::{br_train, cc_train, ecc_train, MultiLabelClassifier};
use crate::rng::derive_seed;
use crate::stats::{friedman_test, nemenyi_cd, ScoreTable};
use crate::text::{
    apply_pos_tags, apply_split_tags, load_corpus, preprocess, split_sections_full, tokenize,
    PreprocessConfig, RawNote, SectionedNote,
};

/// Note category consumed by the pipeline.
const DISCHARGE_CATEGORY: &str = "Discharge summary";

/// Document embedding composition selected for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositionChoice {
    SumNorm,
    SectionConcat,
    StatConcat,
}

impl CompositionChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            CompositionChoice::SumNorm => "sum_norm",
            CompositionChoice::SectionConcat => "section_concat",
            CompositionChoice::StatConcat => "stat_concat",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "sum_norm" | "sumnorm" => Ok(CompositionChoice::SumNorm),
            "section_concat" | "sectionconcat" => Ok(CompositionChoice::SectionConcat),
            "stat_concat" | "statconcat" => Ok(CompositionChoice::StatConcat),
            other => Err(Error::Config(format!("unknown composition {other:?}"))),
        }
    }

    /// Output width for word vectors of dimension `d`.
    pub fn output_dimension(&self, d: usize) -> usize {
        match self {
            CompositionChoice::SumNorm => d,
            CompositionChoice::SectionConcat => 7 * d,
            CompositionChoice::StatConcat => 6 * d,
        }
    }
}

/// Token tagging scheme applied before embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tagging {
    None,
    /// Prefix each token with its section index.
    SplitTags,
    /// Concatenate externally provided part-of-speech tags; the path names
    /// a CSV `admission_id,note_id,tagged_text` with `word/TAG` tokens.
    PosTags(PathBuf),
}

impl Tagging {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tagging::None => "none",
            Tagging::SplitTags => "split_tags",
            Tagging::PosTags(_) => "pos_tags",
        }
    }
}

/// Multi-label strategy selected for a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Br,
    Cc,
    Ecc { ensemble_size: usize },
    Mlknn { k: usize, smoothing: f64 },
}

impl Strategy {
    pub fn descriptor(&self, solver: Solver) -> String {
        let solver_tag = match solver {
            Solver::Batch => "lr",
            Solver::Sgd => "sgd",
        };
        match self {
            Strategy::Br => format!("br-{solver_tag}"),
            Strategy::Cc => format!("cc-{solver_tag}"),
            Strategy::Ecc { ensemble_size } => format!("ecc({ensemble_size})-{solver_tag}"),
            Strategy::Mlknn { k, smoothing } => format!("mlknn({k},{smoothing})"),
        }
    }
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub corpus_path: PathBuf,
    pub labels_path: PathBuf,
    pub vectors_path: PathBuf,
    pub output_dir: PathBuf,
    pub label_mode: LabelMode,
    pub min_support: usize,
    pub composition: CompositionChoice,
    pub tagging: Tagging,
    pub preprocess: PreprocessConfig,
    pub strategy: Strategy,
    pub base: TrainConfig,
    pub folds: usize,
    pub seed: u64,
}

/// Parse a flat `key=value` config file; `#` starts a comment.
pub fn parse_config_file(path: impl AsRef<Path>) -> Result<BTreeMap<String, String>> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut pairs = BTreeMap::new();
    for (idx, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "{}: line {}: expected key=value, got {line:?}",
                path.display(),
                idx + 1
            ))
        })?;
        pairs.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(pairs)
}

const KNOWN_KEYS: &[&str] = &[
    "corpus",
    "labels",
    "vectors",
    "out",
    "label_mode",
    "min_support",
    "composition",
    "tagging",
    "pos_tokens",
    "preprocess",
    "max_tokens",
    "strategy",
    "ensemble_size",
    "knn_k",
    "knn_smoothing",
    "ridge",
    "solver",
    "epochs",
    "learning_rate",
    "tolerance",
    "max_iterations",
    "folds",
    "seed",
];

impl ExperimentConfig {
    /// Build a config from key=value pairs (file contents merged with CLI
    /// overrides; overrides win before this is called).
    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self> {
        for key in pairs.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown config key {key:?}")));
            }
        }
        let required = |key: &str| -> Result<&String> {
            pairs
                .get(key)
                .ok_or_else(|| Error::Config(format!("missing required config key {key:?}")))
        };
        let parse_num = |key: &str, default: f64| -> Result<f64> {
            match pairs.get(key) {
                None => Ok(default),
                Some(v) => v
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad numeric value for {key}: {v:?}"))),
            }
        };
        let parse_usize = |key: &str, default: usize| -> Result<usize> {
            match pairs.get(key) {
                None => Ok(default),
                Some(v) => v
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("bad integer value for {key}: {v:?}"))),
            }
        };

        let preprocess_enabled = match pairs.get("preprocess").map(String::as_str) {
            None | Some("false") | Some("0") | Some("no") => false,
            Some("true") | Some("1") | Some("yes") => true,
            Some(other) => {
                return Err(Error::Config(format!("bad boolean for preprocess: {other:?}")))
            }
        };
        let max_tokens = match pairs.get("max_tokens").map(String::as_str) {
            None | Some("none") => None,
            Some(v) => Some(v.parse::<usize>().map_err(|_| {
                Error::Config(format!("bad integer value for max_tokens: {v:?}"))
            })?),
        };
        if max_tokens == Some(0) {
            return Err(Error::Config("max_tokens must be at least 1".into()));
        }

        let tagging = match pairs.get("tagging").map(String::as_str) {
            None | Some("none") => Tagging::None,
            Some("split_tags") | Some("split") => Tagging::SplitTags,
            Some("pos_tags") | Some("pos") => {
                let path = required("pos_tokens")
                    .map_err(|_| Error::Config("pos_tags tagging needs pos_tokens=<path>".into()))?;
                Tagging::PosTags(PathBuf::from(path))
            }
            Some(other) => return Err(Error::Config(format!("unknown tagging {other:?}"))),
        };

        let ensemble_size = parse_usize("ensemble_size", 10)?;
        let knn_k = parse_usize("knn_k", 10)?;
        let knn_smoothing = parse_num("knn_smoothing", 1.0)?;
        let strategy = match pairs.get("strategy").map(String::as_str) {
            None | Some("br") => Strategy::Br,
            Some("cc") => Strategy::Cc,
            Some(s) => parse_strategy(s, ensemble_size, knn_k, knn_smoothing)?,
        };

        let solver = match pairs.get("solver").map(String::as_str) {
            None | Some("batch") | Some("lr") => Solver::Batch,
            Some("sgd") => Solver::Sgd,
            Some(other) => return Err(Error::Config(format!("unknown solver {other:?}"))),
        };

        let config = ExperimentConfig {
            corpus_path: PathBuf::from(required("corpus")?),
            labels_path: PathBuf::from(required("labels")?),
            vectors_path: PathBuf::from(required("vectors")?),
            output_dir: PathBuf::from(required("out")?),
            label_mode: match pairs.get("label_mode") {
                None => LabelMode::Top18,
                Some(v) => LabelMode::parse(v)?,
            },
            min_support: parse_usize("min_support", 10)?,
            composition: match pairs.get("composition") {
                None => CompositionChoice::SumNorm,
                Some(v) => CompositionChoice::parse(v)?,
            },
            tagging,
            preprocess: PreprocessConfig {
                enabled: preprocess_enabled,
                max_tokens,
            },
            strategy,
            base: TrainConfig {
                ridge: parse_num("ridge", 1.0)?,
                solver,
                epochs: parse_usize("epochs", 50)?,
                learning_rate: parse_num("learning_rate", 0.01)?,
                tolerance: parse_num("tolerance", 1e-6)?,
                max_iterations: parse_usize("max_iterations", 1000)?,
                seed: 0, // derived per fold at run time
            },
            folds: parse_usize("folds", 10)?,
            seed: pairs
                .get("seed")
                .map(|v| {
                    v.parse::<u64>()
                        .map_err(|_| Error::Config(format!("bad seed {v:?}")))
                })
                .transpose()?
                .unwrap_or(42),
        };

        if config.composition == CompositionChoice::SectionConcat {
            if let Tagging::PosTags(_) = config.tagging {
                return Err(Error::Config(
                    "pos_tags cannot be combined with section_concat: external flat \
                     tag streams cannot be aligned with sections"
                        .into(),
                ));
            }
        }
        if matches!(config.tagging, Tagging::PosTags(_)) && config.preprocess.enabled {
            return Err(Error::Config(
                "pos_tags requires preprocess=false: stripping punctuation would \
                 corrupt tagged tokens"
                    .into(),
            ));
        }
        if config.folds < 2 {
            return Err(Error::Config("folds must be at least 2".into()));
        }
        Ok(config)
    }

    /// Canonical key=value listing of every resolved setting.
    pub fn canonical_pairs(&self) -> BTreeMap<String, String> {
        let mut pairs = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            pairs.insert(k.to_string(), v);
        };
        put("corpus", self.corpus_path.display().to_string());
        put("labels", self.labels_path.display().to_string());
        put("vectors", self.vectors_path.display().to_string());
        put("out", self.output_dir.display().to_string());
        put("label_mode", self.label_mode.as_str().to_string());
        put("min_support", self.min_support.to_string());
        put("composition", self.composition.as_str().to_string());
        put("tagging", self.tagging.as_str().to_string());
        if let Tagging::PosTags(path) = &self.tagging {
            put("pos_tokens", path.display().to_string());
        }
        put("preprocess", self.preprocess.enabled.to_string());
        put(
            "max_tokens",
            self.preprocess
                .max_tokens
                .map_or("none".to_string(), |m| m.to_string()),
        );
        match self.strategy {
            Strategy::Br => put("strategy", "br".into()),
            Strategy::Cc => put("strategy", "cc".into()),
            Strategy::Ecc { ensemble_size } => {
                put("strategy", "ecc".into());
                put("ensemble_size", ensemble_size.to_string());
            }
            Strategy::Mlknn { k, smoothing } => {
                put("strategy", "mlknn".into());
                put("knn_k", k.to_string());
                put("knn_smoothing", smoothing.to_string());
            }
        }
        put("ridge", self.base.ridge.to_string());
        put(
            "solver",
            match self.base.solver {
                Solver::Batch => "batch".to_string(),
                Solver::Sgd => "sgd".to_string(),
            },
        );
        put("epochs", self.base.epochs.to_string());
        put("learning_rate", self.base.learning_rate.to_string());
        put("tolerance", self.base.tolerance.to_string());
        put("max_iterations", self.base.max_iterations.to_string());
        put("folds", self.folds.to_string());
        put("seed", self.seed.to_string());
        pairs
    }

    /// Hex digest identifying the resolved configuration.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        for (key, value) in self.canonical_pairs() {
            hasher.update(key.as_bytes());
            hasher.update(b"=");
            hasher.update(value.as_bytes());
            hasher.update(b"\n");
        }
        let digest = hasher.finalize();
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

fn parse_strategy(s: &str, ensemble_size: usize, k: usize, smoothing: f64) -> Result<Strategy> {
    let lower = s.to_ascii_lowercase();
    if lower == "ecc" {
        return Ok(Strategy::Ecc { ensemble_size });
    }
    if lower == "mlknn" {
        return Ok(Strategy::Mlknn { k, smoothing });
    }
    if let Some(args) = lower.strip_prefix("ecc(").and_then(|r| r.strip_suffix(')')) {
        let size: usize = args
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad ensemble size in {s:?}")))?;
        return Ok(Strategy::Ecc {
            ensemble_size: size,
        });
    }
    if let Some(args) = lower.strip_prefix("mlknn(").and_then(|r| r.strip_suffix(')')) {
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(Error::Config(format!("expected mlknn(k,s), got {s:?}")));
        }
        let k: usize = parts[0]
            .parse()
            .map_err(|_| Error::Config(format!("bad k in {s:?}")))?;
        let smoothing: f64 = parts[1]
            .parse()
            .map_err(|_| Error::Config(format!("bad smoothing in {s:?}")))?;
        return Ok(Strategy::Mlknn { k, smoothing });
    }
    Err(Error::Config(format!("unknown strategy {s:?}")))
}

// --- embedding stage ---------------------------------------------------------

type PosTokenMap = BTreeMap<(String, String), Vec<(String, String)>>;

fn load_pos_tokens(path: &Path) -> Result<PosTokenMap> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::csv(path, 0, e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::csv(path, 0, e.to_string()))?
        .clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::csv(path, 0, format!("missing column {name:?}")))
    };
    let (c_adm, c_note, c_text) = (col("admission_id")?, col("note_id")?, col("tagged_text")?);
    let mut map = PosTokenMap::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| Error::csv(path, row, e.to_string()))?;
        let get = |i: usize| record.get(i).unwrap_or("");
        let mut pairs = Vec::new();
        for token in get(c_text).split_whitespace() {
            let (word, tag) = token.rsplit_once('/').ok_or_else(|| {
                Error::csv(path, row, format!("token {token:?} lacks a /TAG suffix"))
            })?;
            pairs.push((word.to_string(), tag.to_string()));
        }
        map.insert((get(c_adm).to_string(), get(c_note).to_string()), pairs);
    }
    Ok(map)
}

/// Statistics collected while embedding.
#[derive(Debug, Default, Clone)]
struct EmbedStats {
    repeated_headers: usize,
}

fn embed_note(
    note: &RawNote,
    table: &WordVectorTable<f64>,
    config: &ExperimentConfig,
    pos_tokens: Option<&PosTokenMap>,
    stats: &mut EmbedStats,
) -> Result<DocumentEmbedding<f64>> {
    let preprocess_sections = |note_text: &str, stats: &mut EmbedStats| -> SectionedNote {
        let (mut sectioned, warnings) = split_sections_full(note_text);
        stats.repeated_headers += warnings.len();
        for section in sectioned.sections.iter_mut() {
            *section = preprocess(section, &config.preprocess);
        }
        sectioned
    };

    let flat_tokens = |stats: &mut EmbedStats| -> Result<Vec<String>> {
        match &config.tagging {
            Tagging::None => Ok(preprocess(&tokenize(&note.text), &config.preprocess)),
            Tagging::SplitTags => {
                let sectioned = preprocess_sections(&note.text, stats);
                Ok(apply_split_tags(&sectioned))
            }
            Tagging::PosTags(path) => {
                let map = pos_tokens.expect("pos token map loaded for pos_tags runs");
                let key = (note.admission_id.clone(), note.note_id.clone());
                let pairs = map.get(&key).ok_or_else(|| {
                    Error::Data(format!(
                        "{}: no tagged tokens for note {} of admission {}",
                        path.display(),
                        note.note_id,
                        note.admission_id
                    ))
                })?;
                Ok(apply_pos_tags(pairs))
            }
        }
    };

    match config.composition {
        CompositionChoice::SumNorm => Ok(embed_document(&flat_tokens(stats)?, table)),
        CompositionChoice::StatConcat => Ok(embed_stats_concat(&flat_tokens(stats)?, table)),
        CompositionChoice::SectionConcat => {
            let sectioned = preprocess_sections(&note.text, stats);
            let sections: Vec<Vec<String>> = match config.tagging {
                Tagging::SplitTags => sectioned
                    .sections
                    .iter()
                    .enumerate()
                    .map(|(slot, tokens)| {
                        tokens.iter().map(|t| format!("{slot}_{t}")).collect()
                    })
                    .collect(),
                _ => sectioned.sections.to_vec(),
            };
            embed_sections_concat(&sections, table)
        }
    }
}

/// Embedded admissions plus bookkeeping.
#[derive(Debug, Clone)]
pub struct EmbeddedCorpus {
    pub admission_ids: Vec<String>,
    pub features: Vec<Vec<f64>>,
    pub skipped_admissions: usize,
    pub warnings: Vec<String>,
}

/// Load the corpus and vector table and embed every admission that has at
/// least one discharge summary (others are skipped with a counted warning).
/// Multi-note admissions embed each note and average.
pub fn embed_corpus(config: &ExperimentConfig) -> Result<EmbeddedCorpus> {
    let notes = load_corpus(&config.corpus_path).map_err(Error::stage("corpus"))?;
    let table: WordVectorTable<f64> =
        load_vector_file(&config.vectors_path).map_err(Error::stage("vectors"))?;
    let pos_tokens = match &config.tagging {
        Tagging::PosTags(path) => Some(load_pos_tokens(path).map_err(Error::stage("pos-tokens"))?),
        _ => None,
    };

    // group discharge summaries per admission, preserving first-appearance order
    let mut order: Vec<String> = Vec::new();
    let mut notes_of: BTreeMap<String, Vec<&RawNote>> = BTreeMap::new();
    for note in &notes {
        if !notes_of.contains_key(&note.admission_id) {
            order.push(note.admission_id.clone());
        }
        let entry = notes_of.entry(note.admission_id.clone()).or_default();
        if note.category == DISCHARGE_CATEGORY {
            entry.push(note);
        }
    }

    let mut stats = EmbedStats::default();
    let mut admission_ids = Vec::new();
    let mut features = Vec::new();
    let mut skipped = 0usize;
    for admission in &order {
        let summaries = &notes_of[admission];
        if summaries.is_empty() {
            skipped += 1;
            continue;
        }
        let per_note: Vec<DocumentEmbedding<f64>> = summaries
            .iter()
            .map(|note| embed_note(note, &table, config, pos_tokens.as_ref(), &mut stats))
            .collect::<Result<_>>()
            .map_err(Error::stage("embed"))?;
        let averaged = average_embeddings(&per_note).map_err(Error::stage("embed"))?;
        admission_ids.push(admission.clone());
        features.push(averaged.values);
    }
    if admission_ids.is_empty() {
        return Err(Error::Stage {
            stage: "embed",
            source: Box::new(Error::Data(
                "no admission has a discharge summary".into(),
            )),
        });
    }

    let mut warnings = Vec::new();
    if skipped > 0 {
        warnings.push(format!(
            "{skipped} admissions skipped: no discharge summary"
        ));
    }
    if stats.repeated_headers > 0 {
        warnings.push(format!(
            "{} repeated section headers: first occurrence used",
            stats.repeated_headers
        ));
    }
    Ok(EmbeddedCorpus {
        admission_ids,
        features,
        skipped_admissions: skipped,
        warnings,
    })
}

/// Label matrix over the embedded admissions; assignments referencing
/// admissions outside the corpus are dropped with a counted warning.
pub fn label_stage(
    config: &ExperimentConfig,
    admission_ids: &[String],
    warnings: &mut Vec<String>,
) -> Result<LabelMatrix> {
    let assignments = load_labels(&config.labels_path).map_err(Error::stage("labels"))?;
    let known: std::collections::HashSet<&str> =
        admission_ids.iter().map(String::as_str).collect();
    let (kept, dropped): (Vec<_>, Vec<_>) = assignments
        .into_iter()
        .partition(|(admission, _)| known.contains(admission.as_str()));
    if !dropped.is_empty() {
        warnings.push(format!(
            "{} label assignments dropped: admission not in embedded corpus",
            dropped.len()
        ));
    }
    let groups = GroupTable::builtin();
    let space = build_label_space(&kept, config.label_mode, config.min_support, &groups)
        .map_err(Error::stage("labels"))?;
    build_label_matrix(admission_ids, &kept, &space, &groups).map_err(Error::stage("labels"))
}

// --- embed command ------------------------------------------------------------

/// Write the admission x embedding matrix as CSV with a header line carrying
/// the shape, composition, seed and config hash. Returns the file path.
pub fn cmd_embed(config: &ExperimentConfig) -> Result<PathBuf> {
    let embedded = embed_corpus(config)?;
    fs::create_dir_all(&config.output_dir).map_err(|e| Error::io(&config.output_dir, e))?;
    let path = config.output_dir.join("embeddings.csv");
    let mut out = format!(
        "#icdlab-embeddings v1 n={} m={} composition={} seed={} config={}\n",
        embedded.features.len(),
        embedded.features.first().map_or(0, Vec::len),
        config.composition.as_str(),
        config.seed,
        config.hash()
    );
    for (admission, row) in embedded.admission_ids.iter().zip(&embedded.features) {
        out.push_str(admission);
        for value in row {
            out.push(',');
            out.push_str(&format!("{value}"));
        }
        out.push('\n');
    }
    let tmp = config.output_dir.join("embeddings.csv.tmp");
    fs::write(&tmp, &out).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

// --- run command ---------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LabelReport {
    pub name: String,
    pub support: usize,
    pub f1: f64,
}

/// Results of one cross-validated experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub format_version: u32,
    pub config_hash: String,
    pub seed: u64,
    pub strategy: String,
    pub label_mode: String,
    pub composition: String,
    pub folds: usize,
    /// Predictions from all folds are pooled into one confusion matrix
    /// before scoring.
    pub pooled_folds: bool,
    pub n_admissions: usize,
    pub skipped_admissions: usize,
    pub feature_dimension: usize,
    pub labels: Vec<LabelReport>,
    pub micro_f1: f64,
    pub macro_f1: f64,
    pub warnings: Vec<String>,
    pub config: BTreeMap<String, String>,
    /// Wall-clock seconds per stage; the only non-reproducible fields.
    pub timings_s: BTreeMap<String, f64>,
}

/// Run the full pipeline: embed, build labels, cross-validate the strategy,
/// pool fold predictions, and write `report.json` + `per_label_f1.csv` into
/// the output directory.
pub fn cmd_run(config: &ExperimentConfig) -> Result<RunReport> {
    let mut timings = BTreeMap::new();
    let clock = Instant::now();
    let embedded = embed_corpus(config)?;
    timings.insert("embed".to_string(), clock.elapsed().as_secs_f64());

    let mut warnings = embedded.warnings.clone();
    let clock = Instant::now();
    let label_matrix = label_stage(config, &embedded.admission_ids, &mut warnings)?;
    timings.insert("labels".to_string(), clock.elapsed().as_secs_f64());

    let clock = Instant::now();
    let n = embedded.admission_ids.len();
    let split = kfold_split(n, config.folds, config.seed).map_err(Error::stage("folds"))?;
    let outcome = cross_validate(
        &embedded.features,
        &label_matrix.matrix,
        &split,
        |fold, train_x, train_y, test_x| {
            run_strategy_fold(config, fold, train_x, train_y, test_x)
        },
    )
    .map_err(Error::stage("train"))?;
    timings.insert("cv".to_string(), clock.elapsed().as_secs_f64());

    let space = &label_matrix.space;
    let labels: Vec<LabelReport> = space
        .labels
        .iter()
        .zip(&space.support)
        .zip(&outcome.per_label_f1)
        .map(|((name, &support), &f1)| LabelReport {
            name: name.clone(),
            support,
            f1,
        })
        .collect();

    let report = RunReport {
        format_version: 1,
        config_hash: config.hash(),
        seed: config.seed,
        strategy: config.strategy.descriptor(config.base.solver),
        label_mode: config.label_mode.as_str().to_string(),
        composition: config.composition.as_str().to_string(),
        folds: config.folds,
        pooled_folds: true,
        n_admissions: n,
        skipped_admissions: embedded.skipped_admissions,
        feature_dimension: embedded.features[0].len(),
        labels,
        micro_f1: outcome.micro_f1,
        macro_f1: outcome.macro_f1,
        warnings,
        config: config.canonical_pairs(),
        timings_s: timings,
    };
    write_run_outputs(config, &report).map_err(Error::stage("report"))?;
    Ok(report)
}

fn run_strategy_fold(
    config: &ExperimentConfig,
    fold: usize,
    train_x: &[Vec<f64>],
    train_y: &BinaryMatrix,
    test_x: &[Vec<f64>],
) -> Result<Vec<Vec<bool>>> {
    let fold_seed = derive_seed(config.seed, fold as u64);
    let base = TrainConfig {
        seed: fold_seed,
        ..config.base.clone()
    };
    let predict_all = |model: &dyn MultiLabelClassifier<f64>| -> Result<Vec<Vec<bool>>> {
        test_x.iter().map(|x| model.predict(x)).collect()
    };
    match config.strategy {
        Strategy::Br => predict_all(&br_train(train_x, train_y, &base)?),
        Strategy::Cc => {
            let order: Vec<usize> = (0..train_y.cols()).collect();
            predict_all(&cc_train(train_x, train_y, &order, &base)?)
        }
        Strategy::Ecc { ensemble_size } => {
            predict_all(&ecc_train(train_x, train_y, ensemble_size, &base, fold_seed)?)
        }
        Strategy::Mlknn { k, smoothing } => {
            predict_all(&mlknn_train(train_x, train_y, k, smoothing)?)
        }
    }
}

fn write_run_outputs(config: &ExperimentConfig, report: &RunReport) -> Result<()> {
    fs::create_dir_all(&config.output_dir).map_err(|e| Error::io(&config.output_dir, e))?;
    let report_path = config.output_dir.join("report.json");
    fs::write(&report_path, serde_json::to_string_pretty(report)?)
        .map_err(|e| Error::io(&report_path, e))?;

    let mut csv_out = format!(
        "# config={} seed={}\nlabel,support,f1\n",
        report.config_hash, report.seed
    );
    for label in &report.labels {
        csv_out.push_str(&format!("{},{},{}\n", label.name, label.support, label.f1));
    }
    let csv_path = config.output_dir.join("per_label_f1.csv");
    fs::write(&csv_path, csv_out).map_err(|e| Error::io(&csv_path, e))
}

// --- compare command -----------------------------------------------------------

/// Outcome of comparing several runs with the Friedman + Nemenyi procedure.
#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub alpha: f64,
    pub methods: Vec<String>,
    pub run_hashes: Vec<String>,
    pub seed: u64,
    pub avg_ranks: Vec<f64>,
    pub chi2: f64,
    pub f_stat: Option<f64>,
    pub corrected: bool,
    pub reject: bool,
    pub critical_difference: f64,
    /// Method pairs whose average-rank difference exceeds the CD.
    pub significant_pairs: Vec<(String, String)>,
}

pub fn load_report(path: impl AsRef<Path>) -> Result<RunReport> {
    let path = path.as_ref();
    let json = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&json)?)
}

/// Compare at least two run reports over their shared per-label F1 scores:
/// builds the methods x labels table, runs the Friedman test, derives the
/// Nemenyi CD, and writes `comparison.json`, `scoretable.csv` and
/// `cd_plot.svg` into the output directory.
pub fn cmd_compare(
    report_paths: &[PathBuf],
    alpha: f64,
    out_dir: impl AsRef<Path>,
) -> Result<CompareReport> {
    let out_dir = out_dir.as_ref();
    if report_paths.len() < 2 {
        return Err(Error::Config("compare needs at least two run reports".into()));
    }
    let reports: Vec<RunReport> = report_paths
        .iter()
        .map(load_report)
        .collect::<Result<_>>()?;

    // runs must share items: same labels, same fold structure
    let reference = &reports[0];
    let reference_labels: Vec<&str> = reference.labels.iter().map(|l| l.name.as_str()).collect();
    for (report, path) in reports.iter().zip(report_paths).skip(1) {
        let labels: Vec<&str> = report.labels.iter().map(|l| l.name.as_str()).collect();
        if labels != reference_labels {
            let missing: Vec<&&str> = reference_labels
                .iter()
                .filter(|l| !labels.contains(l))
                .collect();
            let extra: Vec<&&str> =
                labels.iter().filter(|l| !reference_labels.contains(l)).collect();
            return Err(Error::Data(format!(
                "{}: label set differs from {} (missing {missing:?}, extra {extra:?})",
                path.display(),
                report_paths[0].display()
            )));
        }
        if report.folds != reference.folds || report.seed != reference.seed {
            return Err(Error::Data(format!(
                "{}: fold structure differs (folds {} vs {}, seed {} vs {}); runs are not comparable",
                path.display(),
                report.folds,
                reference.folds,
                report.seed,
                reference.seed
            )));
        }
    }

    // method names from strategy descriptors, disambiguated when repeated
    let mut methods: Vec<String> = Vec::new();
    for report in &reports {
        let base = report.strategy.clone();
        let mut name = base.clone();
        let mut suffix = 2;
        while methods.contains(&name) {
            name = format!("{base}#{suffix}");
            suffix += 1;
        }
        methods.push(name);
    }

    let items: Vec<String> = reference_labels.iter().map(|s| s.to_string()).collect();
    let scores: Vec<Vec<f64>> = (0..items.len())
        .map(|i| reports.iter().map(|r| r.labels[i].f1).collect())
        .collect();
    let table = ScoreTable::new(methods.clone(), items, scores)?;

    let friedman = friedman_test(&table, alpha)?;
    let cd = nemenyi_cd(table.n_methods(), table.n_items(), alpha)?;

    let mut significant_pairs = Vec::new();
    for i in 0..methods.len() {
        for j in i + 1..methods.len() {
            if (friedman.avg_ranks[i] - friedman.avg_ranks[j]).abs() > cd {
                significant_pairs.push((methods[i].clone(), methods[j].clone()));
            }
        }
    }

    let compare = CompareReport {
        alpha,
        methods: methods.clone(),
        run_hashes: reports.iter().map(|r| r.config_hash.clone()).collect(),
        seed: reference.seed,
        avg_ranks: friedman.avg_ranks.clone(),
        chi2: friedman.chi2,
        f_stat: friedman.f_stat,
        corrected: friedman.corrected,
        reject: friedman.reject,
        critical_difference: cd,
        significant_pairs,
    };

    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let json_path = out_dir.join("comparison.json");
    fs::write(&json_path, serde_json::to_string_pretty(&compare)?)
        .map_err(|e| Error::io(&json_path, e))?;
    table.write_csv(out_dir.join("scoretable.csv"))?;

    let svg = cdplot::render_cd_plot(&methods, &friedman.avg_ranks, cd)?;
    let provenance = format!(
        "<!-- seed={} runs={} -->\n",
        reference.seed,
        compare.run_hashes.join(",")
    );
    let svg = match svg.find('\n') {
        Some(pos) => format!("{}{}{}", &svg[..pos + 1], provenance, &svg[pos + 1..]),
        None => svg,
    };
    let svg_path = out_dir.join("cd_plot.svg");
    fs::write(&svg_path, svg).map_err(|e| Error::io(&svg_path, e))?;
    Ok(compare)
}
