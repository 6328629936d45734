//! Adversarial mirroring and swap augmentation.
//!
//! Mirroring adds, after each point, a copy whose claim is negated and whose
//! warrants trade places while the label index stays put. The alternative
//! warrant supports the negated claim, so the copy is a valid point whose
//! correct warrant text is the original's distractor. Every warrant cue that
//! was applicable in the original is applicable in the copy with the opposite
//! outcome, which pins every cue's productivity at exactly one half.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{tokens, CorpusError, DataPoint, Dataset};
use crate::cues::{all_cue_stats, CueStats};

pub const MIRROR_SUFFIX: &str = "#adv";
pub const SWAP_SUFFIX: &str = "#swap";

/// Tokens after which a negation is inserted or removed.
pub const AUXILIARIES: [&str; 18] = [
    "is", "are", "was", "were", "should", "can", "will", "do", "does", "did", "would", "could", "has", "have", "had",
    "must", "may", "might",
];

#[derive(Debug, Error)]
pub enum AdversarialError {
    #[error("{} claim(s) have no negation: {}", .0.len(), .0.join(" | "))]
    MissingNegations(Vec<String>),
    #[error("no auxiliary or copula in claim `{0}`; negate it by hand")]
    NoAuxiliary(String),
    #[error("negation for `{0}` maps the claim to itself")]
    SelfNegation(String),
    #[error("negation file line {line}: {message}")]
    NegationFile { line: usize, message: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Human,
    Heuristic,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Human => "human",
            Provenance::Heuristic => "heuristic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Negation {
    pub negated: String,
    pub provenance: Provenance,
}

/// Claim text to negated claim text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NegationMap {
    entries: BTreeMap<String, Negation>,
}

impl NegationMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rejects entries that map a claim to itself. An existing human entry is
    /// never replaced by a heuristic one.
    pub fn insert(
        &mut self,
        claim: impl Into<String>,
        negated: impl Into<String>,
        provenance: Provenance,
    ) -> Result<(), AdversarialError> {
        let claim = claim.into();
        let negated = negated.into();
        if claim.trim() == negated.trim() {
            return Err(AdversarialError::SelfNegation(claim));
        }
        if provenance == Provenance::Heuristic
            && self
                .entries
                .get(&claim)
                .is_some_and(|e| e.provenance == Provenance::Human)
        {
            return Ok(());
        }
        self.entries.insert(claim, Negation { negated, provenance });
        Ok(())
    }

    /// Inserts both directions.
    pub fn insert_pair(
        &mut self,
        a: impl Into<String>,
        b: impl Into<String>,
        provenance: Provenance,
    ) -> Result<(), AdversarialError> {
        let a = a.into();
        let b = b.into();
        self.insert(a.clone(), b.clone(), provenance)?;
        self.insert(b, a, provenance)
    }

    pub fn get(&self, claim: &str) -> Option<&Negation> {
        self.entries.get(claim)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Negation)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Adds every entry of `other`, keeping human entries over heuristic ones.
    pub fn extend(&mut self, other: &NegationMap) {
        for (claim, neg) in other.iter() {
            // Entries of a valid map are never self-negations.
            let _ = self.insert(claim, neg.negated.clone(), neg.provenance);
        }
    }

    /// Claims in `datasets` without an entry, deduplicated and sorted.
    pub fn uncovered<'a>(&self, datasets: impl IntoIterator<Item = &'a Dataset>) -> Vec<String> {
        let missing: BTreeSet<&str> = datasets
            .into_iter()
            .flat_map(|d| d.points())
            .map(|p| p.claim.as_str())
            .filter(|c| !self.entries.contains_key(*c))
            .collect();
        missing.into_iter().map(str::to_string).collect()
    }

    /// Maps every claim `c` to `"c <marker>"` and back. Used for synthetic
    /// data, whose claims carry no meaning to negate.
    pub fn with_marker(dataset: &Dataset, marker: &str) -> NegationMap {
        let mut map = NegationMap::new();
        for claim in crate::corpus::distinct_claims([dataset]) {
            let marked = format!("{claim} {marker}");
            map.insert_pair(claim, marked, Provenance::Human)
                .expect("marker makes the pair distinct");
        }
        map
    }

    /// TSV: `claim \t negated \t provenance`, one header row.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("claim\tnegated\tprovenance\n");
        for (claim, neg) in &self.entries {
            let _ = writeln!(out, "{}\t{}\t{}", claim, neg.negated, neg.provenance.as_str());
        }
        out
    }

    pub fn parse_tsv<R: BufRead>(reader: R) -> Result<NegationMap, AdversarialError> {
        let mut map = NegationMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line.map_err(|e| AdversarialError::NegationFile {
                line: line_no,
                message: e.to_string(),
            })?;
            let line = line.trim_end_matches('\r');
            if (line_no == 1 && line.starts_with("claim\t")) || line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let provenance = match cols.get(2).map(|s| s.trim()) {
                None | Some("") | Some("human") => Provenance::Human,
                Some("heuristic") => Provenance::Heuristic,
                Some(other) => {
                    return Err(AdversarialError::NegationFile {
                        line: line_no,
                        message: format!("unknown provenance `{other}`"),
                    })
                }
            };
            if cols.len() < 2 {
                return Err(AdversarialError::NegationFile {
                    line: line_no,
                    message: "expected claim and negated claim".into(),
                });
            }
            map.insert(cols[0].trim(), cols[1].trim(), provenance)
                .map_err(|e| AdversarialError::NegationFile {
                    line: line_no,
                    message: e.to_string(),
                })?;
        }
        Ok(map)
    }

    pub fn load_tsv(path: &Path) -> Result<NegationMap, AdversarialError> {
        let file = std::fs::File::open(path).map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        NegationMap::parse_tsv(std::io::BufReader::new(file))
    }
}

/// A mirrored point and the id of the point it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorRecord {
    pub original_id: String,
    pub point: DataPoint,
}

impl MirrorRecord {
    pub fn of(original: &DataPoint, negated_claim: &str) -> MirrorRecord {
        MirrorRecord {
            original_id: original.id.clone(),
            point: DataPoint {
                id: format!("{}{}", original.id, MIRROR_SUFFIX),
                claim: negated_claim.to_string(),
                reason: original.reason.clone(),
                warrant0: original.warrant1.clone(),
                warrant1: original.warrant0.clone(),
                label: original.label,
            },
        }
    }
}

/// One mirror record per point, in dataset order.
pub fn mirror_records(dataset: &Dataset, negations: &NegationMap) -> Result<Vec<MirrorRecord>, AdversarialError> {
    let missing = negations.uncovered([dataset]);
    if !missing.is_empty() {
        return Err(AdversarialError::MissingNegations(missing));
    }
    Ok(dataset
        .points()
        .iter()
        .map(|p| MirrorRecord::of(p, &negations.get(&p.claim).expect("checked above").negated))
        .collect())
}

/// Originals interleaved with their mirrors: `p1, p1#adv, p2, p2#adv, ...`.
pub fn mirror_dataset(dataset: &Dataset, negations: &NegationMap) -> Result<Dataset, AdversarialError> {
    let records = mirror_records(dataset, negations)?;
    let mut points = Vec::with_capacity(2 * dataset.len());
    for (original, record) in dataset.points().iter().zip(records) {
        points.push(original.clone());
        points.push(record.point);
    }
    Ok(Dataset::new(dataset.split(), points)?)
}

/// Originals interleaved with copies whose warrants are exchanged and whose
/// label is inverted. The correct warrant text is unchanged.
pub fn augment_swap(dataset: &Dataset) -> Result<Dataset, AdversarialError> {
    let mut points = Vec::with_capacity(2 * dataset.len());
    for p in dataset.points() {
        points.push(p.clone());
        points.push(DataPoint {
            id: format!("{}{}", p.id, SWAP_SUFFIX),
            claim: p.claim.clone(),
            reason: p.reason.clone(),
            warrant0: p.warrant1.clone(),
            warrant1: p.warrant0.clone(),
            label: p.label.flipped(),
        });
    }
    Ok(Dataset::new(dataset.split(), points)?)
}

/// A machine-drafted negation awaiting human review.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeuristicNegation {
    pub claim: String,
    pub negated: String,
    pub needs_review: bool,
}

fn strip_edges(word: &str) -> (&str, &str, &str) {
    let start = word
        .char_indices()
        .find(|(_, c)| c.is_alphanumeric())
        .map_or(word.len(), |(i, _)| i);
    let end = word
        .char_indices()
        .rev()
        .find(|(_, c)| c.is_alphanumeric())
        .map_or(start, |(i, c)| i + c.len_utf8());
    (&word[..start], &word[start..end], &word[end..])
}

/// Positive form of a contracted negative auxiliary, preserving the case of
/// the first letter: `Isn't` -> `Is`, `can't`/`cannot` -> `can`, `won't` -> `will`.
fn uncontract(core: &str) -> Option<String> {
    let lower = core.to_lowercase().replace('\u{2019}', "'");
    let positive = match lower.as_str() {
        "cannot" | "can't" => "can",
        "won't" => "will",
        "shan't" => "shall",
        other => other.strip_suffix("n't")?,
    };
    if !AUXILIARIES.contains(&positive) {
        return None;
    }
    let upper = core.chars().next().is_some_and(char::is_uppercase);
    let mut out = positive.to_string();
    if upper {
        out[..1].make_ascii_uppercase();
    }
    Some(out)
}

fn is_auxiliary(core: &str) -> bool {
    AUXILIARIES.contains(&core.to_lowercase().as_str())
}

/// Drafts a negation by removing or inserting `not` at the first auxiliary.
///
/// A contracted negative (`isn't`, `can't`) is the auxiliary and loses its
/// negation; a plain auxiliary followed by `not` loses the `not`; any other
/// plain auxiliary gains a `not` after it.
pub fn heuristic_negate(claim: &str) -> Result<HeuristicNegation, AdversarialError> {
    let words: Vec<&str> = claim.split_whitespace().collect();
    let draft = |negated: Vec<String>| HeuristicNegation {
        claim: claim.to_string(),
        negated: negated.join(" "),
        needs_review: true,
    };
    for (i, word) in words.iter().enumerate() {
        let (lead, core, trail) = strip_edges(word);
        if let Some(positive) = uncontract(core) {
            let mut out: Vec<String> = words.iter().map(|w| w.to_string()).collect();
            out[i] = format!("{lead}{positive}{trail}");
            return Ok(draft(out));
        }
        if is_auxiliary(core) {
            let mut out: Vec<String> = words.iter().map(|w| w.to_string()).collect();
            let next_is_not = words
                .get(i + 1)
                .is_some_and(|w| strip_edges(w).1.eq_ignore_ascii_case("not"));
            if next_is_not {
                // Keep punctuation attached to the removed `not`.
                let (_, _, not_trail) = strip_edges(words[i + 1]);
                out[i] = format!("{word}{not_trail}");
                out.remove(i + 1);
            } else if trail.is_empty() {
                out.insert(i + 1, "not".to_string());
            } else {
                out[i] = format!("{lead}{core} not{trail}");
            }
            return Ok(draft(out));
        }
    }
    Err(AdversarialError::NoAuxiliary(claim.to_string()))
}

/// Token sequences obtainable by removing exactly one negation from `toks`.
/// A negation is a `not` token or a contracted negative auxiliary, which is
/// replaced by its positive form.
fn single_denegations(toks: &[String]) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for (i, tok) in toks.iter().enumerate() {
        if tok == "not" {
            let mut v = toks.to_vec();
            v.remove(i);
            out.push(v);
        } else if let Some(positive) = uncontract(tok) {
            let mut v = toks.to_vec();
            v[i] = positive;
            out.push(v);
        }
    }
    out
}

/// Pairs up claims across `datasets` that differ by one negation edit.
///
/// When several positives match a negated claim, the lexicographically first
/// claim text wins.
pub fn collect_existing_negations<'a>(datasets: impl IntoIterator<Item = &'a Dataset>) -> NegationMap {
    let claims = crate::corpus::distinct_claims(datasets);
    let mut by_tokens: HashMap<Vec<String>, Vec<&str>> = HashMap::new();
    for claim in &claims {
        by_tokens.entry(tokens(claim)).or_default().push(claim);
    }
    let mut pairs: BTreeSet<(&str, &str)> = BTreeSet::new();
    for negative in &claims {
        for positive_tokens in single_denegations(&tokens(negative)) {
            if let Some(positives) = by_tokens.get(&positive_tokens) {
                for positive in positives {
                    pairs.insert((negative, positive));
                }
            }
        }
    }
    let mut map = NegationMap::new();
    for (negative, positive) in pairs {
        if map.get(negative).is_none() {
            let _ = map.insert(negative, positive, Provenance::Human);
        }
        if map.get(positive).is_none() {
            let _ = map.insert(positive, negative, Provenance::Human);
        }
    }
    map
}

/// Outcome of checking that every warrant cue sits at productivity one half.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeutralityReport {
    pub n: usize,
    pub applicable_cues: usize,
    pub violations: Vec<String>,
}

impl NeutralityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exact check over all warrant unigrams and bigrams; vacuous on empty data.
pub fn neutrality_check(dataset: &Dataset) -> NeutralityReport {
    let stats: Vec<CueStats> = all_cue_stats(dataset);
    let mut violations: Vec<String> = stats
        .iter()
        .filter(|s| !s.is_neutral())
        .map(|s| format!("{} ({}/{})", s.cue, s.productive, s.applicability))
        .collect();
    violations.sort();
    NeutralityReport {
        n: dataset.len(),
        applicable_cues: stats.len(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Label;
    use crate::corpus::Ngram;
    use crate::cues::cue_stats;

    fn figure_point() -> DataPoint {
        DataPoint::new(
            "fig",
            "Google is not a harmful monopoly",
            "People can choose not to use Google",
            "Other search engines do not redirect to Google",
            "All other search engines redirect to Google",
            Label::W0,
        )
        .unwrap()
    }

    #[test]
    fn mirror_matches_figure() {
        let ds = Dataset::new("fig", vec![figure_point()]).unwrap();
        let mut map = NegationMap::new();
        map.insert_pair(
            "Google is not a harmful monopoly",
            "Google is a harmful monopoly",
            Provenance::Human,
        )
        .unwrap();
        let out = mirror_dataset(&ds, &map).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out.points()[0], figure_point());
        let m = &out.points()[1];
        assert_eq!(m.id, "fig#adv");
        assert_eq!(m.claim, "Google is a harmful monopoly");
        assert_eq!(m.reason, "People can choose not to use Google");
        assert_eq!(m.warrant0, "All other search engines redirect to Google");
        assert_eq!(m.warrant1, "Other search engines do not redirect to Google");
        assert_eq!(m.label, Label::W0);
        assert!(neutrality_check(&out).passed());
    }

    #[test]
    fn missing_negations_listed() {
        let a = figure_point();
        let mut b = figure_point();
        b.id = "b".into();
        b.claim = "Another claim".into();
        let ds = Dataset::new("s", vec![a, b]).unwrap();
        match mirror_dataset(&ds, &NegationMap::new()) {
            Err(AdversarialError::MissingNegations(claims)) => {
                assert_eq!(claims, ["Another claim", "Google is not a harmful monopoly"]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn self_negation_rejected() {
        let mut map = NegationMap::new();
        assert!(matches!(
            map.insert("x", " x ", Provenance::Human),
            Err(AdversarialError::SelfNegation(_))
        ));
    }

    #[test]
    fn heuristic_does_not_override_human() {
        let mut map = NegationMap::new();
        map.insert("a is b", "a is not b", Provenance::Human).unwrap();
        map.insert("a is b", "a is never b", Provenance::Heuristic).unwrap();
        assert_eq!(map.get("a is b").unwrap().negated, "a is not b");
    }

    #[test]
    fn heuristic_negation_rules() {
        assert_eq!(
            heuristic_negate("Google is not a harmful monopoly").unwrap().negated,
            "Google is a harmful monopoly"
        );
        assert_eq!(
            heuristic_negate("People should pay taxes").unwrap().negated,
            "People should not pay taxes"
        );
        assert!(heuristic_negate("People should pay taxes").unwrap().needs_review);
        assert!(matches!(
            heuristic_negate("Comment sections fail"),
            Err(AdversarialError::NoAuxiliary(_))
        ));
    }

    #[test]
    fn heuristic_negation_contractions_and_punctuation() {
        assert_eq!(
            heuristic_negate("Zoos aren't humane.").unwrap().negated,
            "Zoos are humane."
        );
        assert_eq!(heuristic_negate("We can't win").unwrap().negated, "We can win");
        assert_eq!(heuristic_negate("It won't work").unwrap().negated, "It will work");
        assert_eq!(heuristic_negate("It is.").unwrap().negated, "It is not.");
        assert_eq!(heuristic_negate("It is not.").unwrap().negated, "It is.");
    }

    #[test]
    fn heuristic_negation_is_involutive_for_simple_claims() {
        for claim in ["People should pay taxes", "Google is not a harmful monopoly"] {
            let once = heuristic_negate(claim).unwrap().negated;
            let twice = heuristic_negate(&once).unwrap().negated;
            assert_eq!(twice, claim);
        }
    }

    #[test]
    fn collects_figure_pair_bidirectionally() {
        let mut other = figure_point();
        other.id = "o".into();
        other.claim = "Google is a harmful monopoly".into();
        let ds = Dataset::new("s", vec![figure_point(), other]).unwrap();
        let map = collect_existing_negations([&ds]);
        assert_eq!(map.len(), 2);
        assert_eq!(
            map.get("Google is not a harmful monopoly").unwrap().negated,
            "Google is a harmful monopoly"
        );
        assert_eq!(
            map.get("Google is a harmful monopoly").unwrap().negated,
            "Google is not a harmful monopoly"
        );
        assert_eq!(
            map.get("Google is a harmful monopoly").unwrap().provenance,
            Provenance::Human
        );
    }

    fn with_claims(claims: &[&str]) -> Dataset {
        let points = claims
            .iter()
            .enumerate()
            .map(|(i, c)| DataPoint::new(i.to_string(), *c, "r", "w a", "w b", Label::W0).unwrap())
            .collect();
        Dataset::new("s", points).unwrap()
    }

    #[test]
    fn collect_handles_contractions() {
        let ds = with_claims(&["Zoos aren't humane", "Zoos are humane", "Unrelated claim"]);
        let map = collect_existing_negations([&ds]);
        assert_eq!(map.get("Zoos are humane").unwrap().negated, "Zoos aren't humane");
        assert!(map.get("Unrelated claim").is_none());
    }

    #[test]
    fn collect_requires_single_edit() {
        let ds = with_claims(&["it is not good and not bad", "it is good and bad"]);
        assert!(collect_existing_negations([&ds]).is_empty());
        let ds = with_claims(&["apples are red", "bananas are yellow"]);
        assert!(collect_existing_negations([&ds]).is_empty());
    }

    #[test]
    fn swap_augmentation_balances_labels() {
        let p = DataPoint::new("p", "c", "r", "A", "B", Label::W0).unwrap();
        let ds = Dataset::new("s", vec![p]).unwrap();
        let out = augment_swap(&ds).unwrap();
        assert_eq!(out.len(), 2);
        let copy = &out.points()[1];
        assert_eq!((copy.warrant0.as_str(), copy.warrant1.as_str()), ("B", "A"));
        assert_eq!(copy.label, Label::W1);
        assert_eq!(copy.id, "p#swap");
        // The correct warrant text is the same before and after.
        assert_eq!(copy.warrant(copy.label), out.points()[0].warrant(Label::W0));
    }

    #[test]
    fn negation_tsv_roundtrip() {
        let mut map = NegationMap::new();
        map.insert_pair("a is b", "a is not b", Provenance::Human).unwrap();
        map.insert("c can d", "c can not d", Provenance::Heuristic).unwrap();
        let text = map.to_tsv();
        assert_eq!(NegationMap::parse_tsv(text.as_bytes()).unwrap(), map);
        assert!(NegationMap::parse_tsv("x\tx\thuman\n".as_bytes()).is_err());
        assert!(NegationMap::parse_tsv("x\ty\tmaybe\n".as_bytes()).is_err());
    }

    #[test]
    fn mirror_of_figure_doubles_not_alpha() {
        let ds = Dataset::new("fig", vec![figure_point()]).unwrap();
        let map = collect_existing_negations([&ds]);
        assert!(map.is_empty());
        let mut map = NegationMap::new();
        map.insert(
            "Google is not a harmful monopoly",
            "Google is a harmful monopoly",
            Provenance::Human,
        )
        .unwrap();
        let out = mirror_dataset(&ds, &map).unwrap();
        let not = Ngram::unigram("not");
        assert_eq!(
            cue_stats(&out, &not).applicability,
            2 * cue_stats(&ds, &not).applicability
        );
    }
}
