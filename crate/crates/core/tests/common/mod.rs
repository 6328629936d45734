//! Shared helpers for integration tests: brute-force oracles and random
//! dataset builders that do not go through the code paths they check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cueprobe::corpus::{tokenize, DataPoint, Dataset, Label, Ngram, TokenSet};

/// Every unigram and bigram appearing in any warrant.
pub fn warrant_ngrams(ds: &Dataset) -> BTreeSet<Ngram> {
    let mut out = BTreeSet::new();
    for p in ds.points() {
        for w in [&p.warrant0, &p.warrant1] {
            out.extend(tokenize(w).ngrams());
        }
    }
    out
}

fn member(set: &TokenSet, cue: &Ngram) -> bool {
    match cue {
        Ngram::Unigram(a) => set.unigrams.contains(a),
        Ngram::Bigram(a, b) => set.bigrams.contains(&(a.clone(), b.clone())),
    }
}

/// Warrant token sets of every point, computed once.
pub fn warrant_sets(ds: &Dataset) -> Vec<([TokenSet; 2], Label)> {
    ds.points()
        .iter()
        .map(|p| ([tokenize(&p.warrant0), tokenize(&p.warrant1)], p.label))
        .collect()
}

/// Naive count of (applicable, productive) straight from the indicator
/// definitions: exists j with k in T_j and k not in T_{not j}, and y = j.
pub fn naive_counts(ds: &Dataset, cue: &Ngram) -> (usize, usize) {
    naive_counts_in(&warrant_sets(ds), cue)
}

pub fn naive_counts_in(points: &[([TokenSet; 2], Label)], cue: &Ngram) -> (usize, usize) {
    let mut alpha = 0;
    let mut productive = 0;
    for (sets, label) in points {
        let mut applicable = false;
        let mut correct = false;
        for j in 0..2 {
            if member(&sets[j], cue) && !member(&sets[1 - j], cue) {
                applicable = true;
                correct |= label.index() == j;
            }
        }
        alpha += usize::from(applicable);
        productive += usize::from(correct);
    }
    (alpha, productive)
}

/// Positional variant: applicable when the cue is in `slot` only, productive
/// when that slot is the correct one.
pub fn naive_slot_counts(ds: &Dataset, cue: &Ngram, slot: usize) -> (usize, usize) {
    let mut alpha = 0;
    let mut productive = 0;
    for (sets, label) in warrant_sets(ds) {
        if member(&sets[slot], cue) && !member(&sets[1 - slot], cue) {
            alpha += 1;
            productive += usize::from(label.index() == slot);
        }
    }
    (alpha, productive)
}

pub fn ratio(num: usize, den: usize) -> Ratio<u64> {
    Ratio::new(num as u64, den as u64)
}

/// Random dataset over a small vocabulary that includes negation words, so
/// unigram and bigram cues overlap heavily between warrants.
pub fn random_dataset(seed: u64, n: usize) -> Dataset {
    const WORDS: [&str; 12] = [
        "not", "is", "are", "do", "will", "the", "people", "google", "cannot", "good", "bad", "should",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let text = |rng: &mut ChaCha8Rng| -> String {
        let len = rng.gen_range(1..=6);
        (0..len)
            .map(|_| WORDS[rng.gen_range(0..WORDS.len())])
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let label = if rng.gen_bool(0.5) { Label::W1 } else { Label::W0 };
        let (claim, reason, w0, w1) = (text(&mut rng), text(&mut rng), text(&mut rng), text(&mut rng));
        if let Ok(p) = DataPoint::new(format!("r{}", points.len()), claim, reason, w0, w1, label) {
            points.push(p);
        }
    }
    Dataset::new(format!("random-{seed}"), points).unwrap()
}
