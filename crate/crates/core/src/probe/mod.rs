//! Shared-parameter bag-of-vectors warrant scorer.
//!
//! Each argument-warrant pair is scored independently: the claim, reason and
//! warrant are each averaged into a `d`-dimensional vector, the three are
//! concatenated, and one linear map with bias produces a logit. The same map
//! scores both warrants, and a softmax over the two logits gives the choice.
//! Ablations replace the claim and/or reason vector with zeros.

mod model;
mod suite;
mod train;

pub use model::{EncodedPoint, Gradients, ProbeModel, Vocabulary, UNKNOWN_TOKEN};
pub use suite::{run_probe_suite, AblationRow, ProbeTable, SeedRun, Summary};
pub use train::{train, EmbeddingInit, EpochLog, TrainConfig, TrainOutcome};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Dataset, Label};

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("non-finite logits ({0}, {1})")]
    NonFiniteLogits(f64, f64),
    #[error("training diverged at epoch {epoch}, batch {batch}: loss is {loss}")]
    Divergence { epoch: usize, batch: usize, loss: f64 },
    #[error("model was built with tokenizer `{model}` but this build uses `{current}`")]
    VocabularyMismatch { model: String, current: String },
    #[error("model was trained with ablation {trained} but evaluated with {requested}")]
    AblationMismatch {
        trained: AblationSpec,
        requested: AblationSpec,
    },
    #[error("invalid training config: {0}")]
    Config(String),
    #[error("{0} split is empty")]
    EmptySplit(&'static str),
    #[error("embedding file line {line}: {message}")]
    EmbeddingFile { line: usize, message: String },
    #[error("at least one seed is required")]
    NoSeeds,
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

/// Which of claim and reason accompany the warrant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AblationSpec {
    pub include_claim: bool,
    pub include_reason: bool,
}

impl AblationSpec {
    pub const FULL: AblationSpec = AblationSpec {
        include_claim: true,
        include_reason: true,
    };
    pub const WARRANT: AblationSpec = AblationSpec {
        include_claim: false,
        include_reason: false,
    };
    pub const REASON_WARRANT: AblationSpec = AblationSpec {
        include_claim: false,
        include_reason: true,
    };
    pub const CLAIM_WARRANT: AblationSpec = AblationSpec {
        include_claim: true,
        include_reason: false,
    };
    /// Row order of probe tables.
    pub const ALL: [AblationSpec; 4] = [Self::FULL, Self::WARRANT, Self::REASON_WARRANT, Self::CLAIM_WARRANT];

    pub fn name(self) -> &'static str {
        match (self.include_claim, self.include_reason) {
            (true, true) => "full",
            (false, false) => "W",
            (false, true) => "R,W",
            (true, false) => "C,W",
        }
    }

    /// File-name friendly form: `full`, `w`, `rw`, `cw`.
    pub fn slug(self) -> &'static str {
        match (self.include_claim, self.include_reason) {
            (true, true) => "full",
            (false, false) => "w",
            (false, true) => "rw",
            (true, false) => "cw",
        }
    }
}

impl fmt::Display for AblationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AblationSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
            .collect::<String>()
            .to_ascii_lowercase();
        match compact.as_str() {
            "full" | "crw" | "all-inputs" => Ok(Self::FULL),
            "w" => Ok(Self::WARRANT),
            "rw" => Ok(Self::REASON_WARRANT),
            "cw" => Ok(Self::CLAIM_WARRANT),
            _ => Err(format!("unknown ablation `{s}` (expected full, w, rw or cw)")),
        }
    }
}

/// Softmax over the two logits plus the chosen slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub probabilities: [f64; 2],
    pub label: Label,
}

/// Equal logits choose warrant 0.
pub fn predict(z0: f64, z1: f64) -> Result<Prediction, ProbeError> {
    if !z0.is_finite() || !z1.is_finite() {
        return Err(ProbeError::NonFiniteLogits(z0, z1));
    }
    let m = z0.max(z1);
    let e0 = (z0 - m).exp();
    let e1 = (z1 - m).exp();
    let total = e0 + e1;
    Ok(Prediction {
        probabilities: [e0 / total, e1 / total],
        label: if z1 > z0 { Label::W1 } else { Label::W0 },
    })
}

/// Cross-entropy of a probability pair. A zero probability on the gold label
/// yields the loss of the smallest positive double instead of infinity; use
/// [`loss_from_logits`] when logits are available.
pub fn loss(p: [f64; 2], y: Label) -> f64 {
    -p[y.index()].max(f64::MIN_POSITIVE).ln()
}

/// `logsumexp(z) - z[y]`, stable for any finite logits.
pub fn loss_from_logits(z0: f64, z1: f64, y: Label) -> f64 {
    let m = z0.max(z1);
    let lse = m + ((z0 - m).exp() + (z1 - m).exp()).ln();
    lse - [z0, z1][y.index()]
}

/// Logits for both warrants of `point`, dropout off.
pub fn encode(point: &crate::corpus::DataPoint, model: &ProbeModel, ablation: AblationSpec) -> (f64, f64) {
    let encoded = model.vocab().encode(point);
    model.logits(&encoded, ablation)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub split: String,
    pub accuracy: f64,
    pub predictions: Vec<Label>,
    pub seed: u64,
    pub ablation: AblationSpec,
}

/// Accuracy and predictions with dropout disabled.
pub fn evaluate(model: &ProbeModel, data: &Dataset, ablation: AblationSpec) -> Result<EvalResult, ProbeError> {
    model.check_compatible(ablation)?;
    let encoded: Vec<EncodedPoint> = data.points().iter().map(|p| model.vocab().encode(p)).collect();
    let predictions = model.predict_encoded(&encoded, ablation)?;
    let correct = predictions
        .iter()
        .zip(&encoded)
        .filter(|(pred, point)| **pred == point.label)
        .count();
    let accuracy = if data.is_empty() {
        0.0
    } else {
        correct as f64 / data.len() as f64
    };
    Ok(EvalResult {
        split: data.split().to_string(),
        accuracy,
        predictions,
        seed: model.seed,
        ablation,
    })
}
