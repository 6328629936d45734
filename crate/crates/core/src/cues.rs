//! Applicability, productivity and coverage of warrant n-gram cues.
//!
//! A cue is *applicable* to a point when it occurs in exactly one of the two
//! warrants. Among applicable points it is *productive* when the warrant that
//! holds it is the correct one. Coverage is applicability over dataset size.
//! All counting is integer; the only division happens when a proportion is
//! read out, so parallel and sequential scans agree bit for bit.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{token_sets, tokenize, Dataset, Label, Ngram, PointTokens, TokenSet};

/// Number of answer options per point.
pub const NUM_LABELS: usize = 2;

/// A cue is worth exploiting when its productivity exceeds `1 / NUM_LABELS`.
pub const EXPLOIT_THRESHOLD: f64 = 1.0 / NUM_LABELS as f64;

pub const DEFAULT_MIN_APPLICABILITY: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CueError {
    #[error("dataset `{0}` is empty")]
    EmptyDataset(String),
    #[error("minimum applicability must be at least 1")]
    MinApplicability,
    #[error("unknown rank key `{0}` (expected productivity, coverage or product)")]
    UnknownRankKey(String),
}

/// Integer counts behind one cue's statistics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CueStats {
    pub cue: Ngram,
    /// Points where the cue sits in exactly one warrant.
    pub applicability: usize,
    /// Applicable points where that warrant is the correct one.
    pub productive: usize,
    /// Dataset size.
    pub n: usize,
}

impl CueStats {
    /// `None` when the cue is never applicable.
    pub fn productivity(&self) -> Option<f64> {
        (self.applicability > 0).then(|| self.productive as f64 / self.applicability as f64)
    }

    pub fn coverage(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.applicability as f64 / self.n as f64
        }
    }

    pub fn exploitable(&self) -> bool {
        self.productivity().is_some_and(|p| p > EXPLOIT_THRESHOLD)
    }

    /// Exact test for productivity one half, without floating point.
    pub fn is_neutral(&self) -> bool {
        self.applicability > 0 && 2 * self.productive == self.applicability
    }

    fn rank_value(&self, key: RankKey) -> f64 {
        let p = self.productivity().unwrap_or(0.0);
        match key {
            RankKey::Productivity => p,
            RankKey::Coverage => self.coverage(),
            RankKey::Product => p * self.coverage(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankKey {
    Productivity,
    Coverage,
    #[default]
    Product,
}

impl FromStr for RankKey {
    type Err = CueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "productivity" | "pi" => Ok(RankKey::Productivity),
            "coverage" | "xi" => Ok(RankKey::Coverage),
            "product" => Ok(RankKey::Product),
            other => Err(CueError::UnknownRankKey(other.to_string())),
        }
    }
}

impl std::fmt::Display for RankKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RankKey::Productivity => "productivity",
            RankKey::Coverage => "coverage",
            RankKey::Product => "product",
        })
    }
}

/// Slot holding `cue` when it is in exactly one warrant.
fn applicable_slot(tokens: &PointTokens, cue: &Ngram) -> Option<Label> {
    match (tokens.w0.contains(cue), tokens.w1.contains(cue)) {
        (true, false) => Some(Label::W0),
        (false, true) => Some(Label::W1),
        _ => None,
    }
}

/// Counts for a single cue.
pub fn cue_stats(dataset: &Dataset, cue: &Ngram) -> CueStats {
    let (applicability, productive) = dataset
        .points()
        .par_iter()
        .map(|point| match applicable_slot(&token_sets(point), cue) {
            Some(slot) => (1usize, usize::from(slot == point.label)),
            None => (0, 0),
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    CueStats {
        cue: cue.clone(),
        applicability,
        productive,
        n: dataset.len(),
    }
}

pub fn applicability(dataset: &Dataset, cue: &Ngram) -> usize {
    cue_stats(dataset, cue).applicability
}

/// `None` signals zero applicability.
pub fn productivity(dataset: &Dataset, cue: &Ngram) -> Option<f64> {
    cue_stats(dataset, cue).productivity()
}

pub fn coverage(dataset: &Dataset, cue: &Ngram) -> Result<f64, CueError> {
    if dataset.is_empty() {
        return Err(CueError::EmptyDataset(dataset.split().to_string()));
    }
    Ok(cue_stats(dataset, cue).coverage())
}

type Counts = HashMap<Ngram, (usize, usize)>;

fn count_point(mut acc: Counts, w0: &TokenSet, w1: &TokenSet, label: Label) -> Counts {
    let mut bump = |cue: Ngram, slot: Label| {
        let entry = acc.entry(cue).or_insert((0, 0));
        entry.0 += 1;
        entry.1 += usize::from(slot == label);
    };
    for u in w0.unigrams.difference(&w1.unigrams) {
        bump(Ngram::Unigram(u.clone()), Label::W0);
    }
    for u in w1.unigrams.difference(&w0.unigrams) {
        bump(Ngram::Unigram(u.clone()), Label::W1);
    }
    for (a, b) in w0.bigrams.difference(&w1.bigrams) {
        bump(Ngram::Bigram(a.clone(), b.clone()), Label::W0);
    }
    for (a, b) in w1.bigrams.difference(&w0.bigrams) {
        bump(Ngram::Bigram(a.clone(), b.clone()), Label::W1);
    }
    acc
}

fn merge(mut a: Counts, b: Counts) -> Counts {
    for (cue, (alpha, prod)) in b {
        let entry = a.entry(cue).or_insert((0, 0));
        entry.0 += alpha;
        entry.1 += prod;
    }
    a
}

/// Statistics for every warrant n-gram with nonzero applicability, unsorted.
///
/// Only the symmetric difference of each point's warrant sets is visited;
/// n-grams outside it contribute nothing to either count.
pub fn all_cue_stats(dataset: &Dataset) -> Vec<CueStats> {
    let n = dataset.len();
    let counts = dataset
        .points()
        .par_iter()
        .fold(Counts::new, |acc, point| {
            let w0 = tokenize(&point.warrant0);
            let w1 = tokenize(&point.warrant1);
            count_point(acc, &w0, &w1, point.label)
        })
        .reduce(Counts::new, merge);
    counts
        .into_iter()
        .map(|(cue, (applicability, productive))| CueStats {
            cue,
            applicability,
            productive,
            n,
        })
        .collect()
}

/// Ranked cue statistics for one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct CueReport {
    pub split: String,
    pub n: usize,
    pub rank_key: RankKey,
    pub min_applicability: usize,
    pub cues: Vec<CueStats>,
}

pub fn scan_all_cues(dataset: &Dataset, min_applicability: usize, rank_key: RankKey) -> Result<CueReport, CueError> {
    if min_applicability < 1 {
        return Err(CueError::MinApplicability);
    }
    if dataset.is_empty() {
        return Err(CueError::EmptyDataset(dataset.split().to_string()));
    }
    let mut cues: Vec<CueStats> = all_cue_stats(dataset)
        .into_iter()
        .filter(|s| s.applicability >= min_applicability)
        .collect();
    sort_cues(&mut cues, rank_key);
    Ok(CueReport {
        split: dataset.split().to_string(),
        n: dataset.len(),
        rank_key,
        min_applicability,
        cues,
    })
}

/// Descending by key, ties broken by the cue's text in ascending order.
pub fn sort_cues(cues: &mut [CueStats], key: RankKey) {
    cues.sort_by(|a, b| {
        b.rank_value(key)
            .total_cmp(&a.rank_value(key))
            .then_with(|| a.cue.to_string().cmp(&b.cue.to_string()))
    });
}

#[derive(Serialize)]
struct CueRow {
    cue: String,
    alpha: usize,
    productivity: Option<f64>,
    coverage: f64,
    exploitable: bool,
}

impl From<&CueStats> for CueRow {
    fn from(s: &CueStats) -> Self {
        CueRow {
            cue: s.cue.to_string(),
            alpha: s.applicability,
            productivity: s.productivity(),
            coverage: s.coverage(),
            exploitable: s.exploitable(),
        }
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    split: &'a str,
    n: usize,
    rank_key: RankKey,
    min_applicability: usize,
    threshold: f64,
    cues: Vec<CueRow>,
}

/// Proportion with six decimals, or an empty field when undefined.
pub fn format_proportion(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.6}")).unwrap_or_default()
}

impl CueReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("cue\talpha\tproductivity\tcoverage\n");
        for s in &self.cues {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                s.cue,
                s.applicability,
                format_proportion(s.productivity()),
                format_proportion(Some(s.coverage()))
            );
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ReportJson {
            split: &self.split,
            n: self.n,
            rank_key: self.rank_key,
            min_applicability: self.min_applicability,
            threshold: EXPLOIT_THRESHOLD,
            cues: self.cues.iter().map(CueRow::from).collect(),
        })
        .expect("report is always serializable")
    }

    pub fn position(&self, cue: &Ngram) -> Option<usize> {
        self.cues.iter().position(|s| &s.cue == cue)
    }
}
