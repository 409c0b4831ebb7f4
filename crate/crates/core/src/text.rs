//! Tokenization, pre-processing, discharge-note section splitting and the
//! two token tagging schemes.

use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_properties::{GeneralCategoryGroup, UnicodeGeneralCategory};

use crate::error::{Error, Result};

/// Number of canonical note sections.
pub const SECTION_COUNT: usize = 7;

/// Canonical section headers, in slot order 0..6.
pub const SECTION_HEADERS: [&str; SECTION_COUNT] = [
    "Admission Date",
    "Past Medical History",
    "Pertinent Results",
    "Brief Hospital Course",
    "Medications on Admission",
    "Discharge Diagnosis",
    "Followup Instructions",
];

/// One free-text note belonging to a hospital admission.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawNote {
    pub admission_id: String,
    pub note_id: String,
    pub category: String,
    pub text: String,
}

/// A note split into the seven canonical sections, each already tokenized.
/// Missing sections are empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionedNote {
    pub sections: [Vec<String>; SECTION_COUNT],
}

/// Non-fatal observation made while splitting a note into sections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionWarning {
    /// A canonical header occurred more than once; the first occurrence was
    /// used.
    RepeatedHeader { header: &'static str, count: usize },
}

/// Token pre-processing switches. When disabled the text is used as is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    pub enabled: bool,
    /// Keep only the first `max_tokens` tokens, when set.
    pub max_tokens: Option<usize>,
}

impl PreprocessConfig {
    pub fn disabled() -> Self {
        PreprocessConfig {
            enabled: false,
            max_tokens: None,
        }
    }

    pub fn enabled(max_tokens: Option<usize>) -> Self {
        PreprocessConfig {
            enabled: true,
            max_tokens,
        }
    }
}

/// Split on Unicode whitespace, keeping case and attached punctuation.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}

fn is_punct(c: char) -> bool {
    c.general_category_group() == GeneralCategoryGroup::Punctuation
}

/// Pre-process tokens: strip punctuation characters, drop tokens without an
/// alphabetic character, lowercase, then truncate to `max_tokens`. Identity
/// when disabled.
pub fn preprocess(tokens: &[String], cfg: &PreprocessConfig) -> Vec<String> {
    if !cfg.enabled {
        return tokens.to_vec();
    }
    let mut out = Vec::with_capacity(tokens.len());
    for token in tokens {
        let stripped: String = token.chars().filter(|&c| !is_punct(c)).collect();
        if !stripped.chars().any(char::is_alphabetic) {
            continue;
        }
        out.push(stripped.to_lowercase());
        if let Some(max) = cfg.max_tokens {
            if out.len() == max {
                break;
            }
        }
    }
    out
}

/// Split a note into the seven canonical sections.
///
/// Headers are matched as exact phrases, ASCII case-insensitively, first
/// occurrence each, in whatever textual order they appear. A section spans
/// from the end of its header (an immediately following `:` is consumed with
/// the header) to the start of the next found header or the end of text.
/// Text before the first found header joins section 0. Headerless text thus
/// lands entirely in section 0.
pub fn split_sections(text: &str) -> SectionedNote {
    split_sections_full(text).0
}

/// [`split_sections`] plus warnings about repeated headers.
pub fn split_sections_full(text: &str) -> (SectionedNote, Vec<SectionWarning>) {
    let mut warnings = Vec::new();
    // (byte position, slot, header byte length)
    let mut found: Vec<(usize, usize, usize)> = Vec::new();
    for (slot, header) in SECTION_HEADERS.iter().enumerate() {
        let occurrences = find_ascii_case_insensitive(text, header);
        if let Some(&pos) = occurrences.first() {
            found.push((pos, slot, header.len()));
        }
        if occurrences.len() > 1 {
            warnings.push(SectionWarning::RepeatedHeader {
                header: SECTION_HEADERS[slot],
                count: occurrences.len(),
            });
        }
    }
    found.sort_unstable();

    let mut sections: [Vec<String>; SECTION_COUNT] = Default::default();
    if found.is_empty() {
        sections[0] = tokenize(text);
        return (SectionedNote { sections }, warnings);
    }

    // Drop headers that start inside an earlier header's span.
    let mut kept: Vec<(usize, usize, usize)> = Vec::with_capacity(found.len());
    let mut cursor = 0usize;
    for (pos, slot, len) in found {
        if pos < cursor {
            continue;
        }
        kept.push((pos, slot, len));
        cursor = pos + len;
    }

    sections[0] = tokenize(&text[..kept[0].0]);
    for (i, &(pos, slot, len)) in kept.iter().enumerate() {
        let mut start = pos + len;
        if text[start..].starts_with(':') {
            start += 1;
        }
        let end = kept.get(i + 1).map_or(text.len(), |&(p, _, _)| p);
        sections[slot].extend(tokenize(&text[start..end]));
    }
    (SectionedNote { sections }, warnings)
}

/// Byte positions of all non-overlapping ASCII-case-insensitive occurrences
/// of `needle` in `haystack`.
fn find_ascii_case_insensitive(haystack: &str, needle: &str) -> Vec<usize> {
    let hay = haystack.as_bytes();
    let pat = needle.as_bytes();
    let mut positions = Vec::new();
    if pat.is_empty() || hay.len() < pat.len() {
        return positions;
    }
    let mut i = 0;
    while i + pat.len() <= hay.len() {
        if hay[i..i + pat.len()].eq_ignore_ascii_case(pat) {
            positions.push(i);
            i += pat.len();
        } else {
            i += 1;
        }
    }
    positions
}

/// Prefix every token of section `i` with `"i_"` and concatenate the
/// sections in slot order.
pub fn apply_split_tags(note: &SectionedNote) -> Vec<String> {
    let mut out = Vec::with_capacity(note.sections.iter().map(Vec::len).sum());
    for (slot, section) in note.sections.iter().enumerate() {
        for token in section {
            out.push(format!("{slot}_{token}"));
        }
    }
    out
}

/// Concatenate each externally provided (token, tag) pair into one token.
pub fn apply_pos_tags<T: AsRef<str>, U: AsRef<str>>(tagged: &[(T, U)]) -> Vec<String> {
    tagged
        .iter()
        .map(|(w, t)| format!("{}{}", w.as_ref(), t.as_ref()))
        .collect()
}

/// Load the corpus CSV (`admission_id,note_id,category,text` with RFC-4180
/// quoting). Row order is preserved.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<RawNote>> {
    let path = path.as_ref();
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
    let (c_adm, c_note, c_cat, c_text) = (
        col("admission_id")?,
        col("note_id")?,
        col("category")?,
        col("text")?,
    );

    let mut notes = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| Error::csv(path, row, e.to_string()))?;
        let field = |i: usize| -> Result<String> {
            record
                .get(i)
                .map(str::to_string)
                .ok_or_else(|| Error::csv(path, row, "short record".to_string()))
        };
        let note = RawNote {
            admission_id: field(c_adm)?,
            note_id: field(c_note)?,
            category: field(c_cat)?,
            text: field(c_text)?,
        };
        if note.admission_id.is_empty() {
            return Err(Error::csv(path, row, "empty admission_id".to_string()));
        }
        notes.push(note);
    }
    Ok(notes)
}
