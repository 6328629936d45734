//! Synthetic datasets with one planted warrant cue of known statistics.
//!
//! Filler text is drawn from a vocabulary `tok0001, tok0002, ...` that never
//! contains the cue, so the planted cue's counts are fixed by construction and
//! serve as ground truth for the cue detector and the probe.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{tokens, DataPoint, Dataset, Label, Ngram};
use crate::cues::CueStats;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("dataset size must be at least 1")]
    EmptySize,
    #[error("{name} must lie in [0, 1], got {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("coverage {coverage} over {n} points rounds to zero applicable points")]
    InfeasibleCoverage { coverage: f64, n: usize },
    #[error("cue `{0}` must be a single normalized token outside the filler vocabulary")]
    BadCue(String),
    #[error("filler vocabulary needs at least 2 tokens")]
    FillerVocabulary,
    #[error("warrant length range {min}..={max} is invalid")]
    LengthRange { min: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantSpec {
    pub n: usize,
    pub cue: String,
    pub productivity: f64,
    pub coverage: f64,
    pub filler_vocab: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub seed: u64,
}

impl Default for PlantSpec {
    fn default() -> Self {
        PlantSpec {
            n: 1000,
            cue: "not".to_string(),
            productivity: 0.9,
            coverage: 0.8,
            filler_vocab: 200,
            min_len: 4,
            max_len: 10,
            seed: 0,
        }
    }
}

pub fn filler_token(index: usize) -> String {
    format!("tok{:04}", index + 1)
}

impl PlantSpec {
    /// Applicable and productive point counts implied by the targets.
    pub fn planned_counts(&self) -> Result<(usize, usize), SynthError> {
        if self.n == 0 {
            return Err(SynthError::EmptySize);
        }
        for (name, value) in [("productivity", self.productivity), ("coverage", self.coverage)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SynthError::OutOfRange { name, value });
            }
        }
        let alpha = (self.coverage * self.n as f64).round() as usize;
        if alpha == 0 && self.coverage > 0.0 {
            return Err(SynthError::InfeasibleCoverage {
                coverage: self.coverage,
                n: self.n,
            });
        }
        let productive = (self.productivity * alpha as f64).round() as usize;
        Ok((alpha, productive))
    }

    fn validate(&self) -> Result<(usize, usize), SynthError> {
        let counts = self.planned_counts()?;
        if self.filler_vocab < 2 {
            return Err(SynthError::FillerVocabulary);
        }
        if self.min_len == 0 || self.min_len > self.max_len {
            return Err(SynthError::LengthRange {
                min: self.min_len,
                max: self.max_len,
            });
        }
        let normalized = tokens(&self.cue);
        let in_filler = self
            .cue
            .strip_prefix("tok")
            .and_then(|d| d.parse::<usize>().ok())
            .is_some_and(|i| i >= 1 && i <= self.filler_vocab && filler_token(i - 1) == self.cue);
        if normalized.len() != 1 || normalized[0] != self.cue || in_filler {
            return Err(SynthError::BadCue(self.cue.clone()));
        }
        Ok(counts)
    }
}

/// Exact counts for the planted cue, written next to the dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub spec: PlantSpec,
    pub cue: String,
    pub n: usize,
    pub alpha: usize,
    pub productive: usize,
    pub productivity: Option<f64>,
    pub coverage: f64,
}

impl GroundTruth {
    pub fn stats(&self) -> CueStats {
        CueStats {
            cue: Ngram::unigram(self.cue.clone()),
            applicability: self.alpha,
            productive: self.productive,
            n: self.n,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Placement {
    Correct,
    Wrong,
    Both,
    Neither,
}

struct Generator<'a> {
    spec: &'a PlantSpec,
    rng: ChaCha8Rng,
}

impl Generator<'_> {
    fn filler(&mut self) -> Vec<String> {
        let len = self.rng.gen_range(self.spec.min_len..=self.spec.max_len);
        (0..len)
            .map(|_| filler_token(self.rng.gen_range(0..self.spec.filler_vocab)))
            .collect()
    }

    fn with_cue(&mut self, mut words: Vec<String>) -> Vec<String> {
        let at = self.rng.gen_range(0..=words.len());
        words.insert(at, self.spec.cue.clone());
        words
    }

    fn warrant_pair(&mut self, placement: Placement, label: Label) -> (String, String) {
        loop {
            let mut pair = [self.filler(), self.filler()];
            let cue_slots: &[usize] = match placement {
                Placement::Correct => &[label.index()],
                Placement::Wrong => &[label.flipped().index()],
                Placement::Both => &[0, 1],
                Placement::Neither => &[],
            };
            for &slot in cue_slots {
                pair[slot] = self.with_cue(std::mem::take(&mut pair[slot]));
            }
            let [w0, w1] = pair;
            if w0 != w1 {
                return (w0.join(" "), w1.join(" "));
            }
        }
    }
}

/// Deterministic per seed.
pub fn generate(spec: &PlantSpec) -> Result<(Dataset, GroundTruth), SynthError> {
    let (alpha, productive) = spec.validate()?;
    let mut gen = Generator {
        spec,
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
    };

    let non_applicable = spec.n - alpha;
    let mut placements = Vec::with_capacity(spec.n);
    placements.extend(std::iter::repeat_n(Placement::Correct, productive));
    placements.extend(std::iter::repeat_n(Placement::Wrong, alpha - productive));
    placements.extend(std::iter::repeat_n(Placement::Both, non_applicable / 2));
    placements.extend(std::iter::repeat_n(
        Placement::Neither,
        non_applicable - non_applicable / 2,
    ));
    placements.shuffle(&mut gen.rng);

    let width = spec.n.to_string().len();
    let points = placements
        .into_iter()
        .enumerate()
        .map(|(i, placement)| {
            let label = if gen.rng.gen_bool(0.5) { Label::W1 } else { Label::W0 };
            let claim = gen.filler().join(" ");
            let reason = gen.filler().join(" ");
            let (warrant0, warrant1) = gen.warrant_pair(placement, label);
            DataPoint {
                id: format!("syn-{:0width$}", i + 1),
                claim,
                reason,
                warrant0,
                warrant1,
                label,
            }
        })
        .collect();
    let dataset =
        Dataset::new(format!("synth-{}", spec.seed), points).expect("generator output satisfies point invariants");

    let truth = GroundTruth {
        spec: spec.clone(),
        cue: spec.cue.clone(),
        n: spec.n,
        alpha,
        productive,
        productivity: (alpha > 0).then(|| productive as f64 / alpha as f64),
        coverage: alpha as f64 / spec.n as f64,
    };
    Ok((dataset, truth))
}
