//! Pre-trained word vectors and document embedding composition.
//!
//! A document embedding is the L2-normalized sum of the word vectors of its
//! tokens. Two richer compositions exist: concatenating the embeddings of
//! the seven note sections (7·d dimensions) and concatenating per-coordinate
//! order statistics of the token vectors (6·d dimensions). Admissions with
//! several notes average their note embeddings coordinate-wise.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::{norm2, Scalar};

/// How a [`DocumentEmbedding`] was composed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Composition {
    /// L2-normalized sum of token vectors (zero vector when no token is in
    /// vocabulary).
    SumNorm,
    /// Per-section [`Composition::SumNorm`] embeddings concatenated in
    /// canonical section order; length 7·d.
    SectionConcat,
    /// Per-coordinate min, max, mean, standard deviation, lower quartile and
    /// upper quartile of the token vectors, concatenated; length 6·d.
    StatConcat,
    /// Coordinate-wise mean of several `SumNorm` embeddings; no longer
    /// unit-norm.
    AveragedSumNorm,
}

impl Composition {
    pub fn as_str(&self) -> &'static str {
        match self {
            Composition::SumNorm => "sum_norm",
            Composition::SectionConcat => "section_concat",
            Composition::StatConcat => "stat_concat",
            Composition::AveragedSumNorm => "averaged_sum_norm",
        }
    }
}

/// Immutable token -> dense vector map with a fixed dimension.
///
/// Lookup of an absent token yields `None`; the table never fabricates
/// vectors. Safe to share across threads once loaded.
#[derive(Debug, Clone)]
pub struct WordVectorTable<S: Scalar> {
    dimension: usize,
    entries: HashMap<String, Vec<S>>,
}

impl<S: Scalar> WordVectorTable<S> {
    /// Build a table from (token, vector) pairs. Later duplicates win.
    pub fn from_entries(
        dimension: usize,
        entries: impl IntoIterator<Item = (String, Vec<S>)>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Contract("vector dimension must be positive".into()));
        }
        let mut map = HashMap::new();
        for (token, vector) in entries {
            if vector.len() != dimension {
                return Err(Error::Contract(format!(
                    "vector for {token:?} has {} components, expected {dimension}",
                    vector.len()
                )));
            }
            if vector.iter().any(|v| !v.is_finite()) {
                return Err(Error::Contract(format!(
                    "vector for {token:?} has a non-finite component"
                )));
            }
            map.insert(token, vector);
        }
        Ok(WordVectorTable {
            dimension,
            entries: map,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vocab_size(&self) -> usize {
        self.entries.len()
    }

    pub fn lookup(&self, token: &str) -> Option<&[S]> {
        self.entries.get(token).map(Vec::as_slice)
    }
}

/// Parse the word-vector text interchange format.
///
/// Line 1 is `"V D"`; each of the following `V` lines is a token and `D`
/// decimal floats, single-space separated, UTF-8. Duplicate tokens keep the
/// last occurrence. A trailing newline and CRLF line endings are tolerated;
/// anything else is a parse error naming the offending line.
pub fn load_vector_file<S: Scalar>(path: impl AsRef<Path>) -> Result<WordVectorTable<S>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, "empty file, expected \"V D\" header"))?;
    let header = header.map_err(|e| Error::io(path, e))?;
    let header = header.trim_end_matches('\r');
    let mut parts = header.split(' ');
    let vocab: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(path, 1, format!("malformed header {header:?}")))?;
    let dim: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(path, 1, format!("malformed header {header:?}")))?;
    if parts.next().is_some() {
        return Err(Error::parse(path, 1, format!("malformed header {header:?}")));
    }
    if vocab == 0 || dim == 0 {
        return Err(Error::parse(path, 1, "header counts must be positive"));
    }

    let mut entries: HashMap<String, Vec<S>> = HashMap::with_capacity(vocab);
    let mut seen = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() && seen == vocab {
            // trailing newline
            continue;
        }
        if seen == vocab {
            return Err(Error::parse(
                path,
                line_no,
                format!("unexpected content after {vocab} entries"),
            ));
        }
        let fields: Vec<&str> = line.split(' ').collect();
        if fields.len() != dim + 1 || fields.iter().any(|f| f.is_empty()) {
            return Err(Error::parse(
                path,
                line_no,
                format!("expected a token and {dim} floats"),
            ));
        }
        let mut vector = Vec::with_capacity(dim);
        for field in &fields[1..] {
            let value: f64 = field
                .parse()
                .map_err(|_| Error::parse(path, line_no, format!("invalid float {field:?}")))?;
            if !value.is_finite() {
                return Err(Error::parse(
                    path,
                    line_no,
                    format!("non-finite value {field:?}"),
                ));
            }
            vector.push(S::of(value));
        }
        entries.insert(fields[0].to_string(), vector);
        seen += 1;
    }
    if seen < vocab {
        return Err(Error::parse(
            path,
            seen + 1,
            format!("expected {vocab} entries, found {seen}"),
        ));
    }
    Ok(WordVectorTable {
        dimension: dim,
        entries,
    })
}

/// Fixed-length document representation.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentEmbedding<S: Scalar> {
    pub values: Vec<S>,
    pub composition: Composition,
}

impl<S: Scalar> DocumentEmbedding<S> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Sum the vectors of in-vocabulary tokens and normalize to unit length.
///
/// Out-of-vocabulary tokens contribute nothing. If the sum is exactly zero
/// (no in-vocabulary token, or cancellation) the zero vector is returned
/// unnormalized.
pub fn embed_document<S: Scalar, T: AsRef<str>>(
    tokens: &[T],
    table: &WordVectorTable<S>,
) -> DocumentEmbedding<S> {
    let mut sum = vec![S::zero(); table.dimension()];
    for token in tokens {
        if let Some(vector) = table.lookup(token.as_ref()) {
            for (s, &v) in sum.iter_mut().zip(vector) {
                *s += v;
            }
        }
    }
    let norm = norm2(&sum);
    if norm > S::zero() {
        for s in &mut sum {
            *s /= norm;
        }
    }
    DocumentEmbedding {
        values: sum,
        composition: Composition::SumNorm,
    }
}

/// Embed each of the seven sections independently and concatenate, giving a
/// 7·d vector. Empty sections contribute zero blocks; there is no global
/// renormalization.
pub fn embed_sections_concat<S: Scalar, T: AsRef<str>>(
    sections: &[Vec<T>],
    table: &WordVectorTable<S>,
) -> Result<DocumentEmbedding<S>> {
    if sections.len() != crate::text::SECTION_COUNT {
        return Err(Error::Contract(format!(
            "expected {} sections, got {}",
            crate::text::SECTION_COUNT,
            sections.len()
        )));
    }
    let mut values = Vec::with_capacity(table.dimension() * sections.len());
    for section in sections {
        values.extend(embed_document(section, table).values);
    }
    Ok(DocumentEmbedding {
        values,
        composition: Composition::SectionConcat,
    })
}

/// Concatenate per-coordinate statistics of the in-vocabulary token vectors:
/// min, max, mean, population standard deviation, lower quartile, upper
/// quartile, in that order (6·d values). No in-vocabulary tokens yields the
/// zero vector.
pub fn embed_stats_concat<S: Scalar, T: AsRef<str>>(
    tokens: &[T],
    table: &WordVectorTable<S>,
) -> DocumentEmbedding<S> {
    let d = table.dimension();
    let vectors: Vec<&[S]> = tokens
        .iter()
        .filter_map(|t| table.lookup(t.as_ref()))
        .collect();
    let mut values = vec![S::zero(); 6 * d];
    if vectors.is_empty() {
        return DocumentEmbedding {
            values,
            composition: Composition::StatConcat,
        };
    }
    let n = vectors.len();
    let n_s = S::of(n as f64);
    for coord in 0..d {
        let mut column: Vec<S> = vectors.iter().map(|v| v[coord]).collect();
        column.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
        let min = column[0];
        let max = column[n - 1];
        let mean = column.iter().copied().sum::<S>() / n_s;
        let var = column.iter().map(|&x| (x - mean) * (x - mean)).sum::<S>() / n_s;
        values[coord] = min;
        values[d + coord] = max;
        values[2 * d + coord] = mean;
        values[3 * d + coord] = var.sqrt();
        values[4 * d + coord] = quantile_linear(&column, 0.25);
        values[5 * d + coord] = quantile_linear(&column, 0.75);
    }
    DocumentEmbedding {
        values,
        composition: Composition::StatConcat,
    }
}

/// Quantile by linear interpolation between closest ranks. `sorted` must be
/// nonempty and ascending.
fn quantile_linear<S: Scalar>(sorted: &[S], p: f64) -> S {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = S::of(h - h.floor());
    if lo + 1 < sorted.len() {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[lo]
    }
}

/// Coordinate-wise arithmetic mean of equal-length embeddings. The result is
/// not renormalized. Averaging more than one `SumNorm` embedding is tagged
/// [`Composition::AveragedSumNorm`]; other compositions keep their tag.
pub fn average_embeddings<S: Scalar>(
    embeddings: &[DocumentEmbedding<S>],
) -> Result<DocumentEmbedding<S>> {
    let first = embeddings
        .first()
        .ok_or_else(|| Error::Contract("cannot average an empty list of embeddings".into()))?;
    let len = first.len();
    if embeddings.iter().any(|e| e.len() != len) {
        return Err(Error::Contract(
            "embeddings to average have mismatched lengths".into(),
        ));
    }
    let mut values = vec![S::zero(); len];
    for embedding in embeddings {
        for (acc, &v) in values.iter_mut().zip(&embedding.values) {
            *acc += v;
        }
    }
    let n = S::of(embeddings.len() as f64);
    for v in &mut values {
        *v /= n;
    }
    let composition = if embeddings.len() > 1 && first.composition == Composition::SumNorm {
        Composition::AveragedSumNorm
    } else {
        first.composition
    };
    Ok(DocumentEmbedding {
        values,
        composition,
    })
}
