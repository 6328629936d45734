//! Dataset ingestion, validation and tokenization.
//!
//! Two on-disk layouts are understood:
//!
//! * the ARCT distribution TSV: one header row, then tab-separated columns
//!   `id, warrant0, warrant1, correct-label, reason, claim`, with any further
//!   columns (debate title, debate info, ...) ignored;
//! * the JSON-lines interchange format: one object per line with keys
//!   `id, claim, reason, warrant0, warrant1, label`.
//!
//! Everything downstream consumes [`Dataset`] and [`TokenSet`].

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifies the tokenizer rules below. Stored in model checkpoints so a
/// model is never evaluated with a differently-normalized vocabulary.
pub const TOKENIZER_ID: &str = "lower-ws-edgepunct-v1";

/// Minimum number of tab-separated columns in an ARCT row.
const TSV_MIN_COLUMNS: usize = 6;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("row {row}: expected at least {expected} tab-separated columns, found {found}")]
    ColumnCount { row: usize, expected: usize, found: usize },
    #[error("row {row}: field `{field}`: {message}")]
    InvalidField {
        row: usize,
        field: &'static str,
        message: String,
    },
    #[error("row {row}: duplicate id `{id}` (first seen at row {first_row})")]
    DuplicateId { row: usize, id: String, first_row: usize },
    #[error("row {row}: malformed JSON: {message}")]
    Json { row: usize, message: String },
    #[error("unknown dataset format `{0}` (expected `tsv` or `jsonl`)")]
    UnknownFormat(String),
}

/// Violation of a [`DataPoint`] invariant, independent of any file position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointError {
    #[error("label must be 0 or 1, got {0}")]
    Label(i64),
    #[error("field is empty")]
    Empty(&'static str),
    #[error("both warrants normalize to the same token sequence")]
    IdenticalWarrants,
}

impl PointError {
    fn field(&self) -> &'static str {
        match self {
            PointError::Label(_) => "label",
            PointError::Empty(field) => field,
            PointError::IdenticalWarrants => "warrant1",
        }
    }
}

/// Which warrant slot is correct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub enum Label {
    W0,
    W1,
}

impl Label {
    pub fn index(self) -> usize {
        match self {
            Label::W0 => 0,
            Label::W1 => 1,
        }
    }

    pub fn from_index(index: usize) -> Option<Label> {
        match index {
            0 => Some(Label::W0),
            1 => Some(Label::W1),
            _ => None,
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::W0 => Label::W1,
            Label::W1 => Label::W0,
        }
    }
}

impl TryFrom<i64> for Label {
    type Error = PointError;

    fn try_from(value: i64) -> Result<Self, Self::Error> {
        match value {
            0 => Ok(Label::W0),
            1 => Ok(Label::W1),
            other => Err(PointError::Label(other)),
        }
    }
}

impl From<Label> for u8 {
    fn from(label: Label) -> u8 {
        label.index() as u8
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// One argument with its two candidate warrants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataPoint {
    pub id: String,
    pub claim: String,
    pub reason: String,
    pub warrant0: String,
    pub warrant1: String,
    pub label: Label,
}

impl DataPoint {
    /// Builds a point and checks its invariants.
    pub fn new(
        id: impl Into<String>,
        claim: impl Into<String>,
        reason: impl Into<String>,
        warrant0: impl Into<String>,
        warrant1: impl Into<String>,
        label: Label,
    ) -> Result<DataPoint, PointError> {
        let point = DataPoint {
            id: id.into(),
            claim: claim.into(),
            reason: reason.into(),
            warrant0: warrant0.into(),
            warrant1: warrant1.into(),
            label,
        };
        point.validate()?;
        Ok(point)
    }

    pub fn validate(&self) -> Result<(), PointError> {
        for (name, text) in [
            ("id", &self.id),
            ("claim", &self.claim),
            ("reason", &self.reason),
            ("warrant0", &self.warrant0),
            ("warrant1", &self.warrant1),
        ] {
            if text.trim().is_empty() {
                return Err(PointError::Empty(name));
            }
        }
        if self.warrant0.trim() == self.warrant1.trim() || tokens(&self.warrant0) == tokens(&self.warrant1) {
            return Err(PointError::IdenticalWarrants);
        }
        Ok(())
    }

    pub fn warrant(&self, slot: Label) -> &str {
        match slot {
            Label::W0 => &self.warrant0,
            Label::W1 => &self.warrant1,
        }
    }
}

/// An ordered, validated collection of points from one split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    split: String,
    points: Vec<DataPoint>,
}

impl Dataset {
    /// Validates every point and the id-uniqueness invariant. Row numbers in
    /// errors are 1-based positions within `points`.
    pub fn new(split: impl Into<String>, points: Vec<DataPoint>) -> Result<Dataset, CorpusError> {
        let mut seen = std::collections::HashMap::with_capacity(points.len());
        for (i, point) in points.iter().enumerate() {
            let row = i + 1;
            point.validate().map_err(|e| CorpusError::InvalidField {
                row,
                field: e.field(),
                message: e.to_string(),
            })?;
            if let Some(first_row) = seen.insert(point.id.as_str(), row) {
                return Err(CorpusError::DuplicateId {
                    row,
                    id: point.id.clone(),
                    first_row,
                });
            }
        }
        Ok(Dataset {
            split: split.into(),
            points,
        })
    }

    pub fn split(&self) -> &str {
        &self.split
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn with_split(mut self, split: impl Into<String>) -> Dataset {
        self.split = split.into();
        self
    }

    /// Concatenates splits in the given order. Fails if ids collide.
    pub fn concat<'a>(
        split: impl Into<String>,
        parts: impl IntoIterator<Item = &'a Dataset>,
    ) -> Result<Dataset, CorpusError> {
        let points = parts.into_iter().flat_map(|d| d.points.iter().cloned()).collect();
        Dataset::new(split, points)
    }

    pub fn into_points(self) -> Vec<DataPoint> {
        self.points
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for point in &self.points {
            serde_json::to_writer(&mut out, point)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    pub fn save_jsonl(&self, path: &Path) -> Result<(), CorpusError> {
        let io_err = |source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = fs::File::create(path).map_err(io_err)?;
        let mut out = io::BufWriter::new(file);
        self.write_jsonl(&mut out).map_err(io_err)?;
        out.flush().map_err(io_err)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tsv,
    Jsonl,
}

impl Format {
    /// `.jsonl`/`.json` is JSON-lines; anything else is treated as ARCT TSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => Format::Jsonl,
            _ => Format::Tsv,
        }
    }
}

impl FromStr for Format {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" | "arct" => Ok(Format::Tsv),
            "jsonl" | "json" => Ok(Format::Jsonl),
            other => Err(CorpusError::UnknownFormat(other.to_string())),
        }
    }
}

/// Split name derived from a file name: `data/dev-full.txt` -> `dev-full`.
pub fn split_name(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("dataset")
        .to_string()
}

pub fn load_dataset(path: &Path, format: Format) -> Result<Dataset, CorpusError> {
    let file = fs::File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = BufReader::new(file);
    let split = split_name(path);
    let result = match format {
        Format::Tsv => parse_tsv(reader, &split),
        Format::Jsonl => parse_jsonl(reader, &split),
    };
    result.map_err(|e| match e {
        CorpusError::Io { source, .. } => CorpusError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

fn read_lines<R: BufRead>(reader: R) -> impl Iterator<Item = (usize, io::Result<String>)> {
    reader.lines().enumerate().map(|(i, line)| (i + 1, line))
}

fn wrap_io(source: io::Error) -> CorpusError {
    CorpusError::Io {
        path: PathBuf::new(),
        source,
    }
}

/// Parses the ARCT TSV layout. Row numbers count the header as row 1.
pub fn parse_tsv<R: BufRead>(reader: R, split: &str) -> Result<Dataset, CorpusError> {
    let mut points = Vec::new();
    let mut rows = Vec::new();
    for (row, line) in read_lines(reader) {
        let line = line.map_err(wrap_io)?;
        if row == 1 {
            continue;
        }
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < TSV_MIN_COLUMNS {
            return Err(CorpusError::ColumnCount {
                row,
                expected: TSV_MIN_COLUMNS,
                found: cols.len(),
            });
        }
        let label = parse_label(cols[3], row)?;
        let point = DataPoint {
            id: cols[0].trim().to_string(),
            warrant0: cols[1].trim().to_string(),
            warrant1: cols[2].trim().to_string(),
            reason: cols[4].trim().to_string(),
            claim: cols[5].trim().to_string(),
            label,
        };
        points.push(point);
        rows.push(row);
    }
    build_with_rows(split, points, &rows)
}

fn parse_label(raw: &str, row: usize) -> Result<Label, CorpusError> {
    let invalid = |message: String| CorpusError::InvalidField {
        row,
        field: "label",
        message,
    };
    let value: i64 = raw
        .trim()
        .parse()
        .map_err(|_| invalid(format!("`{}` is not an integer", raw.trim())))?;
    Label::try_from(value).map_err(|e| invalid(e.to_string()))
}

#[derive(Deserialize)]
struct RawPoint {
    id: String,
    claim: String,
    reason: String,
    warrant0: String,
    warrant1: String,
    label: i64,
}

/// Parses JSON-lines. Row numbers are 1-based line numbers.
pub fn parse_jsonl<R: BufRead>(reader: R, split: &str) -> Result<Dataset, CorpusError> {
    let mut points = Vec::new();
    let mut rows = Vec::new();
    for (row, line) in read_lines(reader) {
        let line = line.map_err(wrap_io)?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawPoint = serde_json::from_str(&line).map_err(|e| CorpusError::Json {
            row,
            message: e.to_string(),
        })?;
        let label = Label::try_from(raw.label).map_err(|e| CorpusError::InvalidField {
            row,
            field: "label",
            message: e.to_string(),
        })?;
        points.push(DataPoint {
            id: raw.id,
            claim: raw.claim,
            reason: raw.reason,
            warrant0: raw.warrant0,
            warrant1: raw.warrant1,
            label,
        });
        rows.push(row);
    }
    build_with_rows(split, points, &rows)
}

/// Like [`Dataset::new`] but reports file row numbers instead of positions.
fn build_with_rows(split: &str, points: Vec<DataPoint>, rows: &[usize]) -> Result<Dataset, CorpusError> {
    Dataset::new(split, points).map_err(|e| match e {
        CorpusError::InvalidField { row, field, message } => CorpusError::InvalidField {
            row: rows[row - 1],
            field,
            message,
        },
        CorpusError::DuplicateId { row, id, first_row } => CorpusError::DuplicateId {
            row: rows[row - 1],
            id,
            first_row: rows[first_row - 1],
        },
        other => other,
    })
}

/// A unigram or an adjacent token pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Ngram {
    Unigram(String),
    Bigram(String, String),
}

impl Ngram {
    pub fn unigram(token: impl Into<String>) -> Ngram {
        Ngram::Unigram(token.into())
    }

    pub fn bigram(first: impl Into<String>, second: impl Into<String>) -> Ngram {
        Ngram::Bigram(first.into(), second.into())
    }

    /// Normalizes free text into a cue: one token gives a unigram, two give a
    /// bigram. Anything else is rejected.
    pub fn parse(text: &str) -> Option<Ngram> {
        let toks = tokens(text);
        match toks.as_slice() {
            [a] => Some(Ngram::Unigram(a.clone())),
            [a, b] => Some(Ngram::Bigram(a.clone(), b.clone())),
            _ => None,
        }
    }
}

impl fmt::Display for Ngram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ngram::Unigram(a) => f.write_str(a),
            Ngram::Bigram(a, b) => write!(f, "{a} {b}"),
        }
    }
}

impl From<Ngram> for String {
    fn from(ngram: Ngram) -> String {
        ngram.to_string()
    }
}

impl TryFrom<String> for Ngram {
    type Error = String;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Ngram::parse(&value).ok_or_else(|| format!("`{value}` is not a unigram or bigram"))
    }
}

/// Unigram and bigram membership sets for one text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenSet {
    pub unigrams: BTreeSet<String>,
    pub bigrams: BTreeSet<(String, String)>,
}

impl TokenSet {
    pub fn contains(&self, cue: &Ngram) -> bool {
        match cue {
            Ngram::Unigram(a) => self.unigrams.contains(a),
            Ngram::Bigram(a, b) => self.bigrams.contains(&(a.clone(), b.clone())),
        }
    }

    /// Every n-gram in the set, unigrams first.
    pub fn ngrams(&self) -> impl Iterator<Item = Ngram> + '_ {
        self.unigrams
            .iter()
            .map(|u| Ngram::Unigram(u.clone()))
            .chain(self.bigrams.iter().map(|(a, b)| Ngram::Bigram(a.clone(), b.clone())))
    }

    pub fn is_empty(&self) -> bool {
        self.unigrams.is_empty()
    }
}

/// Normalized token sequence: lowercase, whitespace split, non-alphanumeric
/// characters trimmed from both ends, empties dropped. Internal apostrophes
/// survive; typographic apostrophes are folded to `'`.
pub fn tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let folded: String = raw
                .chars()
                .map(|c| if c == '\u{2019}' { '\'' } else { c })
                .flat_map(char::to_lowercase)
                .collect();
            let trimmed = folded.trim_matches(|c: char| !c.is_alphanumeric());
            (!trimmed.is_empty()).then(|| trimmed.to_string())
        })
        .collect()
}

pub fn tokenize(text: &str) -> TokenSet {
    let toks = tokens(text);
    let bigrams = toks.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    TokenSet {
        unigrams: toks.into_iter().collect(),
        bigrams,
    }
}

/// Token sets for one point's four fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointTokens {
    pub claim: TokenSet,
    pub reason: TokenSet,
    pub w0: TokenSet,
    pub w1: TokenSet,
}

impl PointTokens {
    pub fn warrant(&self, slot: Label) -> &TokenSet {
        match slot {
            Label::W0 => &self.w0,
            Label::W1 => &self.w1,
        }
    }
}

pub fn token_sets(point: &DataPoint) -> PointTokens {
    PointTokens {
        claim: tokenize(&point.claim),
        reason: tokenize(&point.reason),
        w0: tokenize(&point.warrant0),
        w1: tokenize(&point.warrant1),
    }
}

/// Distinct claim texts in first-seen order.
pub fn distinct_claims<'a>(datasets: impl IntoIterator<Item = &'a Dataset>) -> Vec<&'a str> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for dataset in datasets {
        for point in dataset.points() {
            if seen.insert(point.claim.as_str()) {
                out.push(point.claim.as_str());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "#id\twarrant0\twarrant1\tcorrectLabelW0orW1\treason\tclaim\tdebateTitle\tdebateInfo\n";

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn tokenize_figure_reason() {
        let ts = tokenize("People can choose not to use Google");
        assert_eq!(
            ts.unigrams,
            set(&["people", "can", "choose", "not", "to", "use", "google"])
        );
        assert!(ts.bigrams.contains(&("not".to_string(), "to".to_string())));
        assert_eq!(ts.bigrams.len(), 6);
    }

    #[test]
    fn tokenize_empty_and_apostrophes() {
        assert_eq!(tokenize(""), TokenSet::default());
        assert_eq!(tokenize("   \t "), TokenSet::default());
        assert_eq!(tokenize("Don't stop").unigrams, set(&["don't", "stop"]));
        assert_eq!(tokenize("Don’t stop.").unigrams, set(&["don't", "stop"]));
        assert_eq!(tokenize("\"Quoted,\" (text)!").unigrams, set(&["quoted", "text"]));
    }

    #[test]
    fn bigrams_skip_dropped_tokens() {
        // The lone dash disappears before bigrams are formed.
        let ts = tokenize("will - not");
        assert!(ts.bigrams.contains(&("will".to_string(), "not".to_string())));
        assert!(ts.contains(&Ngram::bigram("will", "not")));
        assert!(!ts.contains(&Ngram::bigram("not", "will")));
    }

    #[test]
    fn ngram_parse_and_display() {
        assert_eq!(Ngram::parse("Not"), Some(Ngram::unigram("not")));
        assert_eq!(Ngram::parse("will not"), Some(Ngram::bigram("will", "not")));
        assert_eq!(Ngram::parse("a b c"), None);
        assert_eq!(Ngram::parse(""), None);
        assert_eq!(Ngram::bigram("will", "not").to_string(), "will not");
    }

    #[test]
    fn parses_two_row_tsv_in_order() {
        let text = format!(
            "{HEADER}a1\tW zero\tW one\t0\tthe reason\tthe claim\ttitle\tinfo\n\
             a2\tOther zero\tOther one\t1\treason two\tclaim two\tt\ti\n"
        );
        let ds = parse_tsv(text.as_bytes(), "train").unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.points()[0].id, "a1");
        assert_eq!(ds.points()[0].warrant0, "W zero");
        assert_eq!(ds.points()[0].claim, "the claim");
        assert_eq!(ds.points()[1].label, Label::W1);
        assert_eq!(ds.split(), "train");
    }

    #[test]
    fn tsv_extra_columns_ignored_and_crlf_tolerated() {
        let text = format!("{HEADER}a1\tx\ty\t1\tr\tc\tt\ti\textra\textra2\r\n");
        let ds = parse_tsv(text.as_bytes(), "s").unwrap();
        assert_eq!(ds.points()[0].claim, "c");
    }

    #[test]
    fn tsv_bad_label_names_row_and_field() {
        let text = format!("{HEADER}a1\tx\ty\t0\tr\tc\na2\tx\ty\t2\tr\tc\n");
        let err = parse_tsv(text.as_bytes(), "s").unwrap_err();
        match &err {
            CorpusError::InvalidField { row, field, .. } => {
                assert_eq!(*row, 3);
                assert_eq!(*field, "label");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("row 3"));
        assert!(err.to_string().contains("label"));
    }

    #[test]
    fn tsv_wrong_column_count() {
        let text = format!("{HEADER}a1\tx\ty\t0\n");
        assert!(matches!(
            parse_tsv(text.as_bytes(), "s"),
            Err(CorpusError::ColumnCount { row: 2, found: 4, .. })
        ));
    }

    #[test]
    fn tsv_duplicate_id_reports_both_rows() {
        let text = format!("{HEADER}a1\tx\ty\t0\tr\tc\na1\tp\tq\t1\tr\tc\n");
        assert!(matches!(
            parse_tsv(text.as_bytes(), "s"),
            Err(CorpusError::DuplicateId {
                row: 3,
                first_row: 2,
                ..
            })
        ));
    }

    #[test]
    fn identical_warrants_rejected() {
        let err = DataPoint::new("x", "c", "r", "Same text.", "same TEXT", Label::W0).unwrap_err();
        assert_eq!(err, PointError::IdenticalWarrants);
        // Same unigram set but different order is a legitimate pair.
        assert!(DataPoint::new("x", "c", "r", "a b a", "b a b", Label::W0).is_ok());
    }

    #[test]
    fn empty_field_rejected() {
        let err = DataPoint::new("x", "  ", "r", "a", "b", Label::W0).unwrap_err();
        assert_eq!(err, PointError::Empty("claim"));
    }

    #[test]
    fn jsonl_label_out_of_range() {
        let text = r#"{"id":"a","claim":"c","reason":"r","warrant0":"x","warrant1":"y","label":0}
{"id":"b","claim":"c","reason":"r","warrant0":"x","warrant1":"y","label":-1}
"#;
        assert!(matches!(
            parse_jsonl(text.as_bytes(), "s"),
            Err(CorpusError::InvalidField {
                row: 2,
                field: "label",
                ..
            })
        ));
    }

    #[test]
    fn jsonl_roundtrip_keys() {
        let ds = Dataset::new("s", vec![DataPoint::new("a", "c", "r", "x", "y", Label::W1).unwrap()]).unwrap();
        let line = ds.to_jsonl_string();
        assert_eq!(
            line,
            "{\"id\":\"a\",\"claim\":\"c\",\"reason\":\"r\",\"warrant0\":\"x\",\"warrant1\":\"y\",\"label\":1}\n"
        );
        assert_eq!(parse_jsonl(line.as_bytes(), "s").unwrap(), ds);
    }

    #[test]
    fn token_sets_figure_original() {
        let p = DataPoint::new(
            "fig",
            "Google is not a harmful monopoly",
            "People can choose not to use Google",
            "Other search engines do not redirect to Google",
            "All other search engines redirect to Google",
            Label::W0,
        )
        .unwrap();
        let ts = token_sets(&p);
        assert!(ts.w0.unigrams.contains("not"));
        assert!(!ts.w1.unigrams.contains("not"));
        assert_eq!(ts.claim, tokenize(&p.claim));
        assert_eq!(ts.reason, tokenize(&p.reason));
        assert_eq!(ts.w1, tokenize(&p.warrant1));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_dataset(Path::new("/definitely/not/here.tsv"), Format::Tsv).unwrap_err();
        assert!(matches!(err, CorpusError::Io { .. }));
    }

    #[test]
    fn format_detection() {
        assert_eq!(Format::from_path(Path::new("a/train.jsonl")), Format::Jsonl);
        assert_eq!(Format::from_path(Path::new("a/train-full.txt")), Format::Tsv);
        assert!("xml".parse::<Format>().is_err());
    }
}
