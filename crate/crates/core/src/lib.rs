//! Multi-label medical-code prediction from clinical free text.
//!
//! The pipeline composes fixed-length document embeddings from pre-trained
//! word vectors, trains one of four multi-label strategies (binary
//! relevance, classifier chains, ensembles of chains, multi-label kNN) over
//! ridge-logistic base learners against ICD-9-derived label spaces, scores
//! per-label / micro / macro F1 under seeded cross-validation, and compares
//! methods with the rank-based Friedman + Nemenyi procedure, rendered as a
//! critical-difference diagram.
//!
//! Numeric modules are generic over the [`Scalar`] floating-point type;
//! the aliases below fix the default double-precision instantiation used by
//! the experiment pipeline.

pub mod cdplot;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod experiment;
pub mod icd9;
pub mod learners;
pub mod matrix;
pub mod mlknn;
pub mod multilabel;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod synth;
pub mod text;

mod tables;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision instantiations used by the CLI pipeline.
pub type WordVectorTable = embedding::WordVectorTable<f64>;
pub type DocumentEmbedding = embedding::DocumentEmbedding<f64>;
pub type LinearModel = learners::LinearModel<f64>;
pub type BrModel = multilabel::BrModel<f64>;
pub type ChainModel = multilabel::ChainModel<f64>;
pub type EnsembleModel = multilabel::EnsembleModel<f64>;
pub type MlknnModel = mlknn::MlknnModel<f64>;

/// Single-precision variants for memory-constrained embedding work.
pub type WordVectorTable32 = embedding::WordVectorTable<f32>;
pub type DocumentEmbedding32 = embedding::DocumentEmbedding<f32>;
pub type LinearModel32 = learners::LinearModel<f32>;
