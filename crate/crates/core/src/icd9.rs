//! ICD-9 code parsing and the three label spaces built on the code
//! hierarchy: 18 top-level groups, supported sub-level groups, and the most
//! frequent individual codes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;

/// The 18 top-level groups: name plus inclusive numeric major range.
/// E- and V-codes form the "e+v" group and carry no numeric range here.
pub const TOP_LEVEL_GROUPS: [(&str, u16, u16); 17] = [
    ("inf", 1, 139),
    ("neop", 140, 239),
    ("endo", 240, 279),
    ("bld", 280, 289),
    ("ment", 290, 319),
    ("nerv", 320, 389),
    ("circ", 390, 459),
    ("resp", 460, 519),
    ("diges", 520, 579),
    ("gen", 580, 629),
    ("preg", 630, 679),
    ("skin", 680, 709),
    ("musc", 710, 739),
    ("cong", 740, 759),
    ("pren", 760, 779),
    ("symp", 780, 799),
    ("inj", 800, 999),
];

/// Group name for E- and V-codes.
pub const EV_GROUP: &str = "e+v";

/// All 18 top-level group names.
pub fn top_level_names() -> Vec<&'static str> {
    let mut names: Vec<&'static str> = TOP_LEVEL_GROUPS.iter().map(|&(n, _, _)| n).collect();
    names.push(EV_GROUP);
    names
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CodeKind {
    Numeric,
    E,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum CodeType {
    Diagnosis,
    Procedure,
}

impl CodeType {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "diag" | "diagnosis" => Ok(CodeType::Diagnosis),
            "proc" | "procedure" => Ok(CodeType::Procedure),
            other => Err(Error::Data(format!("unknown code type {other:?}"))),
        }
    }
}

/// A parsed ICD-9 code.
///
/// Dotted forms (`401.9`, `V15.82`, `E880.9`) are canonical; compact
/// MIMIC-style forms are accepted with the implicit decimal after 3 digits
/// for numeric diagnosis codes, after the 3 digits following `E`, after the
/// 2 digits following `V`, and after 2 digits for procedure codes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Icd9Code {
    pub raw: String,
    pub kind: CodeKind,
    pub major: u16,
    pub minor: Option<String>,
    pub code_type: CodeType,
}

impl Icd9Code {
    /// Canonical dotted, zero-padded display form.
    pub fn canonical(&self) -> String {
        let mut s = match (self.kind, self.code_type) {
            (CodeKind::Numeric, CodeType::Diagnosis) => format!("{:03}", self.major),
            (CodeKind::Numeric, CodeType::Procedure) => format!("{:02}", self.major),
            (CodeKind::E, _) => format!("E{:03}", self.major),
            (CodeKind::V, _) => format!("V{:02}", self.major),
        };
        if let Some(minor) = &self.minor {
            s.push('.');
            s.push_str(minor);
        }
        s
    }

    /// Top-level group name. Defined for diagnosis codes; the 18 groups are
    /// diagnosis-oriented and procedure codes are not groupable.
    pub fn top_level_group(&self) -> Result<&'static str> {
        if self.code_type == CodeType::Procedure {
            return Err(Error::Contract(format!(
                "procedure code {} has no top-level group",
                self.canonical()
            )));
        }
        match self.kind {
            CodeKind::E | CodeKind::V => Ok(EV_GROUP),
            CodeKind::Numeric => TOP_LEVEL_GROUPS
                .iter()
                .find(|&&(_, lo, hi)| self.major >= lo && self.major <= hi)
                .map(|&(name, _, _)| name)
                .ok_or_else(|| {
                    Error::Data(format!("major {} outside every top-level range", self.major))
                }),
        }
    }
}

impl fmt::Display for Icd9Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

fn code_err(raw: &str, message: impl Into<String>) -> Error {
    Error::Code {
        raw: raw.to_string(),
        message: message.into(),
    }
}

fn parse_digits(raw: &str, s: &str) -> Result<u16> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(code_err(raw, "expected digits"));
    }
    s.parse()
        .map_err(|_| code_err(raw, "major part out of range"))
}

fn check_minor(raw: &str, minor: &str) -> Result<Option<String>> {
    if minor.is_empty() {
        return Ok(None);
    }
    if minor.len() > 2 || !minor.bytes().all(|b| b.is_ascii_digit()) {
        return Err(code_err(raw, format!("invalid decimal suffix {minor:?}")));
    }
    Ok(Some(minor.to_string()))
}

/// Parse a raw ICD-9 code string, dotted or compact.
pub fn parse_code(raw: &str, code_type: CodeType) -> Result<Icd9Code> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Err(code_err(raw, "empty code"));
    }
    let (kind, body) = match trimmed.as_bytes()[0] {
        b'E' | b'e' => (CodeKind::E, &trimmed[1..]),
        b'V' | b'v' => (CodeKind::V, &trimmed[1..]),
        _ => (CodeKind::Numeric, trimmed),
    };

    let (major_str, minor_str) = match body.split_once('.') {
        Some((m, n)) => {
            if n.is_empty() {
                return Err(code_err(raw, "trailing decimal point"));
            }
            (m, n)
        }
        None => {
            // compact form: split at the kind-specific major width
            let width = match (kind, code_type) {
                (CodeKind::E, _) => 3,
                (CodeKind::V, _) => 2,
                (CodeKind::Numeric, CodeType::Diagnosis) => 3,
                (CodeKind::Numeric, CodeType::Procedure) => 2,
            };
            if body.len() > width {
                (&body[..width], &body[width..])
            } else {
                (body, "")
            }
        }
    };

    let major = parse_digits(raw, major_str)?;
    let minor = check_minor(raw, minor_str)?;

    let valid = match (kind, code_type) {
        (CodeKind::E, _) => (800..=999).contains(&major),
        (CodeKind::V, _) => (1..=91).contains(&major),
        (CodeKind::Numeric, CodeType::Diagnosis) => (1..=999).contains(&major),
        (CodeKind::Numeric, CodeType::Procedure) => major <= 99,
    };
    if !valid {
        return Err(code_err(raw, format!("major {major} out of range")));
    }

    Ok(Icd9Code {
        raw: trimmed.to_string(),
        kind,
        major,
        minor,
        code_type,
    })
}

/// One sub-level range: contiguous majors of one kind, nested in a
/// top-level group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubGroup {
    pub name: String,
    pub kind: CodeKind,
    pub lo: u16,
    pub hi: u16,
    pub parent: &'static str,
}

/// The top-level ranges plus the sub-level range table.
#[derive(Debug, Clone)]
pub struct GroupTable {
    sub_level: Vec<SubGroup>,
}

const SUB_LEVEL_CSV: &str = include_str!("../data/icd9_sublevel_groups.csv");

impl GroupTable {
    /// The shipped sub-level table.
    pub fn builtin() -> Self {
        GroupTable::from_sub_level_csv(SUB_LEVEL_CSV).expect("shipped sub-level table is valid")
    }

    /// Parse a `name,start,end,parent` table. E/V ranges use prefixed
    /// endpoints (`V86,V86`); `#` lines are comments.
    pub fn from_sub_level_csv(content: &str) -> Result<Self> {
        let mut sub_level = Vec::new();
        for (idx, line) in content.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::parse(
                    "sub-level table",
                    line_no,
                    "expected name,start,end,parent",
                ));
            }
            let parse_endpoint = |s: &str| -> Result<(CodeKind, u16)> {
                let (kind, digits) = match s.as_bytes().first() {
                    Some(b'V') => (CodeKind::V, &s[1..]),
                    Some(b'E') => (CodeKind::E, &s[1..]),
                    _ => (CodeKind::Numeric, s),
                };
                let major = digits.parse::<u16>().map_err(|_| {
                    Error::parse("sub-level table", line_no, format!("bad endpoint {s:?}"))
                })?;
                Ok((kind, major))
            };
            let (ka, lo) = parse_endpoint(fields[1])?;
            let (kb, hi) = parse_endpoint(fields[2])?;
            if ka != kb || lo > hi {
                return Err(Error::parse(
                    "sub-level table",
                    line_no,
                    format!("invalid range {}-{}", fields[1], fields[2]),
                ));
            }
            let parent = match ka {
                CodeKind::E | CodeKind::V => EV_GROUP,
                CodeKind::Numeric => TOP_LEVEL_GROUPS
                    .iter()
                    .find(|&&(_, plo, phi)| lo >= plo && hi <= phi)
                    .map(|&(name, _, _)| name)
                    .ok_or_else(|| {
                        Error::parse(
                            "sub-level table",
                            line_no,
                            format!("range {lo}-{hi} nests in no top-level group"),
                        )
                    })?,
            };
            if fields[3] != parent {
                return Err(Error::parse(
                    "sub-level table",
                    line_no,
                    format!("declared parent {:?} but range nests in {parent:?}", fields[3]),
                ));
            }
            sub_level.push(SubGroup {
                name: fields[0].to_string(),
                kind: ka,
                lo,
                hi,
                parent,
            });
        }
        Ok(GroupTable { sub_level })
    }

    pub fn sub_level(&self) -> &[SubGroup] {
        &self.sub_level
    }

    /// The unique sub-level group containing a diagnosis code.
    pub fn sub_level_group(&self, code: &Icd9Code) -> Result<&SubGroup> {
        if code.code_type == CodeType::Procedure {
            return Err(Error::Contract(format!(
                "procedure code {} has no sub-level group",
                code.canonical()
            )));
        }
        self.sub_level
            .iter()
            .find(|g| g.kind == code.kind && code.major >= g.lo && code.major <= g.hi)
            .ok_or_else(|| {
                Error::Data(format!(
                    "code {} outside every sub-level range (table integrity)",
                    code.canonical()
                ))
            })
    }
}

/// Label-space flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum LabelMode {
    /// All 18 top-level groups, regardless of support.
    Top18,
    /// Sub-level groups with at least `min_support` distinct admissions.
    Sub155,
    /// The 50 most frequent individual codes, diagnosis and procedure pooled.
    Top50Codes,
}

impl LabelMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            LabelMode::Top18 => "top18",
            LabelMode::Sub155 => "sub155",
            LabelMode::Top50Codes => "top50codes",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "top18" => Ok(LabelMode::Top18),
            "sub155" | "sub" => Ok(LabelMode::Sub155),
            "top50codes" | "top50" => Ok(LabelMode::Top50Codes),
            other => Err(Error::Config(format!("unknown label mode {other:?}"))),
        }
    }
}

/// Ordered label set with per-label distinct-admission support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSpace {
    pub mode: LabelMode,
    pub labels: Vec<String>,
    pub support: Vec<usize>,
    pub min_support: usize,
}

impl LabelSpace {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Label name(s) a single code contributes under a mode. Procedure codes
/// participate only in [`LabelMode::Top50Codes`].
fn label_for_code(code: &Icd9Code, mode: LabelMode, groups: &GroupTable) -> Result<Option<String>> {
    match mode {
        LabelMode::Top18 => {
            if code.code_type == CodeType::Procedure {
                return Ok(None);
            }
            Ok(Some(code.top_level_group()?.to_string()))
        }
        LabelMode::Sub155 => {
            if code.code_type == CodeType::Procedure {
                return Ok(None);
            }
            Ok(Some(groups.sub_level_group(code)?.name.clone()))
        }
        LabelMode::Top50Codes => Ok(Some(code.canonical())),
    }
}

/// Build the ordered label space for a set of (admission, code) assignments.
///
/// Labels are ordered by descending distinct-admission count, ties broken
/// lexicographically. `Top18` keeps all 18 groups even at zero support;
/// `Sub155` drops groups below `min_support`; `Top50Codes` takes the top 50
/// codes and fails when fewer than 50 distinct codes exist.
pub fn build_label_space(
    assignments: &[(String, Icd9Code)],
    mode: LabelMode,
    min_support: usize,
    groups: &GroupTable,
) -> Result<LabelSpace> {
    let mut admissions_per_label: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();
    for (admission, code) in assignments {
        if let Some(label) = label_for_code(code, mode, groups)? {
            admissions_per_label
                .entry(label)
                .or_default()
                .insert(admission.as_str());
        }
    }
    if mode == LabelMode::Top18 {
        for name in top_level_names() {
            admissions_per_label.entry(name.to_string()).or_default();
        }
    }

    let mut counted: Vec<(String, usize)> = admissions_per_label
        .into_iter()
        .map(|(label, admissions)| (label, admissions.len()))
        .collect();
    counted.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let counted = match mode {
        LabelMode::Top18 => counted,
        LabelMode::Sub155 => counted
            .into_iter()
            .filter(|&(_, n)| n >= min_support)
            .collect(),
        LabelMode::Top50Codes => {
            if counted.len() < 50 {
                return Err(Error::Data(format!(
                    "top-50 label space needs at least 50 distinct codes, found {}",
                    counted.len()
                )));
            }
            counted.into_iter().take(50).collect()
        }
    };

    let (labels, support) = counted.into_iter().unzip();
    Ok(LabelSpace {
        mode,
        labels,
        support,
        min_support,
    })
}

/// Binary admissions x labels matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMatrix {
    pub admission_ids: Vec<String>,
    pub space: LabelSpace,
    pub matrix: BinaryMatrix,
}

/// Mark cell (a, l) for every assignment whose code maps to label l under
/// the space's mode. Assignments for admissions missing from
/// `admission_ids` are an error naming the admission.
pub fn build_label_matrix(
    admission_ids: &[String],
    assignments: &[(String, Icd9Code)],
    space: &LabelSpace,
    groups: &GroupTable,
) -> Result<LabelMatrix> {
    let row_of: HashMap<&str, usize> = admission_ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    let col_of: HashMap<&str, usize> = space
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();

    let mut matrix = BinaryMatrix::zeros(admission_ids.len(), space.len());
    for (admission, code) in assignments {
        let &row = row_of.get(admission.as_str()).ok_or_else(|| {
            Error::Data(format!(
                "assignment references unknown admission {admission:?}"
            ))
        })?;
        if let Some(label) = label_for_code(code, space.mode, groups)? {
            if let Some(&col) = col_of.get(label.as_str()) {
                matrix.set(row, col, true);
            }
        }
    }
    Ok(LabelMatrix {
        admission_ids: admission_ids.to_vec(),
        space: space.clone(),
        matrix,
    })
}

/// Load the labels CSV (`admission_id,icd9_code,code_type`).
pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<(String, Icd9Code)>> {
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
    let (c_adm, c_code, c_type) = (col("admission_id")?, col("icd9_code")?, col("code_type")?);

    let mut assignments = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| Error::csv(path, row, e.to_string()))?;
        let get = |i: usize| record.get(i).unwrap_or("");
        let code_type = CodeType::parse(get(c_type))
            .map_err(|e| Error::csv(path, row, e.to_string()))?;
        let code = parse_code(get(c_code), code_type)
            .map_err(|e| Error::csv(path, row, e.to_string()))?;
        assignments.push((get(c_adm).to_string(), code));
    }
    Ok(assignments)
}
