//! Detection, measurement and removal of spurious warrant cues in two-choice
//! argument reasoning datasets.
//!
//! * [`corpus`] loads and tokenizes datasets.
//! * [`cues`] measures applicability, productivity and coverage of n-gram cues.
//! * [`adversarial`] builds mirrored and swap-augmented datasets.
//! * [`probe`] trains a shared-parameter bag-of-vectors scorer under input
//!   ablations.
//! * [`synth`] generates datasets with a planted cue of known statistics.
//! * [`cli`] backs the `cueprobe` binary.

pub mod adversarial;
pub mod cli;
pub mod corpus;
pub mod cues;
pub mod probe;
pub mod synth;

pub use corpus::{DataPoint, Dataset, Label, Ngram, TokenSet};
pub use cues::{CueReport, CueStats, RankKey};
