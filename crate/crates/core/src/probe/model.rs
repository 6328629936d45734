use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{predict, AblationSpec, ProbeError, TrainConfig};
use crate::corpus::{tokens, DataPoint, Dataset, Label, TOKENIZER_ID};

pub const UNKNOWN_TOKEN: &str = "<unk>";

/// Token to row index. Row 0 is the shared unknown token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Vocabulary {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
}

impl From<Vec<String>> for Vocabulary {
    fn from(tokens: Vec<String>) -> Self {
        let index = tokens.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        Vocabulary { tokens, index }
    }
}

impl From<Vocabulary> for Vec<String> {
    fn from(vocab: Vocabulary) -> Self {
        vocab.tokens
    }
}

impl Vocabulary {
    /// Sorted tokens of all four fields of every point, after the unknown row.
    pub fn build(dataset: &Dataset) -> Vocabulary {
        let mut seen = BTreeSet::new();
        for p in dataset.points() {
            for field in [&p.claim, &p.reason, &p.warrant0, &p.warrant1] {
                seen.extend(tokens(field));
            }
        }
        seen.remove(UNKNOWN_TOKEN);
        let mut all = vec![UNKNOWN_TOKEN.to_string()];
        all.extend(seen);
        Vocabulary::from(all)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn get(&self, token: &str) -> u32 {
        self.index.get(token).copied().unwrap_or(0)
    }

    pub fn token(&self, id: u32) -> &str {
        &self.tokens[id as usize]
    }

    fn ids(&self, text: &str) -> Vec<u32> {
        tokens(text).iter().map(|t| self.get(t)).collect()
    }

    pub fn encode(&self, point: &DataPoint) -> EncodedPoint {
        EncodedPoint {
            claim: self.ids(&point.claim),
            reason: self.ids(&point.reason),
            warrants: [self.ids(&point.warrant0), self.ids(&point.warrant1)],
            label: point.label,
        }
    }
}

/// A point as token ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedPoint {
    pub claim: Vec<u32>,
    pub reason: Vec<u32>,
    pub warrants: [Vec<u32>; 2],
    pub label: Label,
}

impl EncodedPoint {
    /// Token ids feeding each third of the concatenated input for `slot`;
    /// `None` for segments the ablation removes.
    pub(crate) fn segments(&self, ablation: AblationSpec, slot: usize) -> [Option<&[u32]>; 3] {
        [
            ablation.include_claim.then_some(self.claim.as_slice()),
            ablation.include_reason.then_some(self.reason.as_slice()),
            Some(self.warrants[slot].as_slice()),
        ]
    }
}

/// Parameter gradients of the mean batch loss. Embedding rows that receive no
/// gradient are absent.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Gradients {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub embeddings: BTreeMap<u32, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeModel {
    pub tokenizer: String,
    pub dim: usize,
    vocab: Vocabulary,
    /// Row-major `|V| x dim`.
    pub embeddings: Vec<f64>,
    /// Length `3 * dim`: claim, reason, warrant blocks.
    pub weights: Vec<f64>,
    pub bias: f64,
    pub ablation: AblationSpec,
    pub seed: u64,
    pub config: TrainConfig,
}

impl ProbeModel {
    /// All parameters zero.
    pub fn zeros(vocab: Vocabulary, dim: usize, ablation: AblationSpec, config: TrainConfig) -> ProbeModel {
        ProbeModel {
            tokenizer: TOKENIZER_ID.to_string(),
            dim,
            embeddings: vec![0.0; vocab.len() * dim],
            vocab,
            weights: vec![0.0; 3 * dim],
            bias: 0.0,
            ablation,
            seed: config.seed,
            config,
        }
    }

    /// Embeddings and weights uniform in `[-scale, scale]`, bias zero.
    pub fn random<R: Rng>(
        vocab: Vocabulary,
        dim: usize,
        ablation: AblationSpec,
        config: TrainConfig,
        scale: f64,
        rng: &mut R,
    ) -> ProbeModel {
        let mut model = ProbeModel::zeros(vocab, dim, ablation, config);
        if scale > 0.0 {
            for x in model.embeddings.iter_mut().chain(model.weights.iter_mut()) {
                *x = rng.gen_range(-scale..=scale);
            }
        }
        model
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn row(&self, id: u32) -> &[f64] {
        let start = id as usize * self.dim;
        &self.embeddings[start..start + self.dim]
    }

    pub fn row_mut(&mut self, id: u32) -> &mut [f64] {
        let start = id as usize * self.dim;
        &mut self.embeddings[start..start + self.dim]
    }

    pub(crate) fn check_compatible(&self, ablation: AblationSpec) -> Result<(), ProbeError> {
        if self.tokenizer != TOKENIZER_ID {
            return Err(ProbeError::VocabularyMismatch {
                model: self.tokenizer.clone(),
                current: TOKENIZER_ID.to_string(),
            });
        }
        if ablation != self.ablation {
            return Err(ProbeError::AblationMismatch {
                trained: self.ablation,
                requested: ablation,
            });
        }
        Ok(())
    }

    /// Concatenated `[claim; reason; warrant]` input for one slot. Each
    /// segment is the mean of its token embeddings; removed or empty segments
    /// are zero.
    pub fn features(&self, point: &EncodedPoint, ablation: AblationSpec, slot: usize) -> Vec<f64> {
        let d = self.dim;
        let mut x = vec![0.0; 3 * d];
        for (block, ids) in point.segments(ablation, slot).into_iter().enumerate() {
            let Some(ids) = ids.filter(|ids| !ids.is_empty()) else {
                continue;
            };
            let out = &mut x[block * d..(block + 1) * d];
            for &id in ids {
                for (o, e) in out.iter_mut().zip(self.row(id)) {
                    *o += e;
                }
            }
            let inv = 1.0 / ids.len() as f64;
            out.iter_mut().for_each(|o| *o *= inv);
        }
        x
    }

    fn score(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }

    /// `(z0, z1)` with dropout off.
    pub fn logits(&self, point: &EncodedPoint, ablation: AblationSpec) -> (f64, f64) {
        (
            self.score(&self.features(point, ablation, 0)),
            self.score(&self.features(point, ablation, 1)),
        )
    }

    pub fn predict_encoded(&self, points: &[EncodedPoint], ablation: AblationSpec) -> Result<Vec<Label>, ProbeError> {
        points
            .iter()
            .map(|p| {
                let (z0, z1) = self.logits(p, ablation);
                predict(z0, z1).map(|pred| pred.label)
            })
            .collect()
    }

    /// Mean loss and its gradient over `batch`.
    ///
    /// `masks`, when given, yields one dropout mask per (point, slot) pair in
    /// order; entries are the already-scaled keep multipliers.
    pub(crate) fn loss_and_gradients_with(
        &self,
        batch: &[&EncodedPoint],
        ablation: AblationSpec,
        mut masks: Option<&mut dyn FnMut() -> Vec<f64>>,
    ) -> (f64, Gradients) {
        let d = self.dim;
        let mut grads = Gradients {
            weights: vec![0.0; 3 * d],
            bias: 0.0,
            embeddings: BTreeMap::new(),
        };
        if batch.is_empty() {
            return (0.0, grads);
        }
        let scale = 1.0 / batch.len() as f64;
        let mut total = 0.0;
        for point in batch {
            let mut inputs: [(Vec<f64>, Option<Vec<f64>>); 2] = [(Vec::new(), None), (Vec::new(), None)];
            let mut z = [0.0; 2];
            for slot in 0..2 {
                let mut x = self.features(point, ablation, slot);
                let mask = masks.as_mut().map(|next| next());
                if let Some(mask) = &mask {
                    x.iter_mut().zip(mask).for_each(|(v, m)| *v *= m);
                }
                z[slot] = self.score(&x);
                inputs[slot] = (x, mask);
            }
            total += super::loss_from_logits(z[0], z[1], point.label);
            let p = predict(z[0], z[1])
                .map(|pred| pred.probabilities)
                .unwrap_or([f64::NAN; 2]);

            for (slot, (x, mask)) in inputs.iter().enumerate() {
                let g = (p[slot] - f64::from(u8::from(slot == point.label.index()))) * scale;
                grads.bias += g;
                grads.weights.iter_mut().zip(x).for_each(|(gw, v)| *gw += g * v);

                for (block, ids) in point.segments(ablation, slot).into_iter().enumerate() {
                    let Some(ids) = ids.filter(|ids| !ids.is_empty()) else {
                        continue;
                    };
                    let share = g / ids.len() as f64;
                    let w = &self.weights[block * d..(block + 1) * d];
                    let m = mask.as_ref().map(|m| &m[block * d..(block + 1) * d]);
                    for &id in ids {
                        let row = grads.embeddings.entry(id).or_insert_with(|| vec![0.0; d]);
                        for k in 0..d {
                            let keep = m.map_or(1.0, |m| m[k]);
                            row[k] += share * w[k] * keep;
                        }
                    }
                }
            }
        }
        (total * scale, grads)
    }

    /// Mean loss and gradients with dropout off.
    pub fn loss_and_gradients(&self, batch: &[EncodedPoint], ablation: AblationSpec) -> (f64, Gradients) {
        let refs: Vec<&EncodedPoint> = batch.iter().collect();
        self.loss_and_gradients_with(&refs, ablation, None)
    }

    /// Mean loss with dropout off.
    pub fn mean_loss(&self, batch: &[EncodedPoint], ablation: AblationSpec) -> f64 {
        if batch.is_empty() {
            return 0.0;
        }
        batch
            .iter()
            .map(|p| {
                let (z0, z1) = self.logits(p, ablation);
                super::loss_from_logits(z0, z1, p.label)
            })
            .sum::<f64>()
            / batch.len() as f64
    }

    pub fn save_json(&self, path: &Path) -> Result<(), ProbeError> {
        let text = serde_json::to_string(self).map_err(|e| ProbeError::Checkpoint(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| ProbeError::Checkpoint(format!("{}: {e}", path.display())))
    }

    pub fn load_json(path: &Path) -> Result<ProbeModel, ProbeError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ProbeError::Checkpoint(format!("{}: {e}", path.display())))?;
        let model: ProbeModel = serde_json::from_str(&text).map_err(|e| ProbeError::Checkpoint(e.to_string()))?;
        if model.embeddings.len() != model.vocab.len() * model.dim || model.weights.len() != 3 * model.dim {
            return Err(ProbeError::Checkpoint(
                "parameter shapes do not match dimensions".into(),
            ));
        }
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probe::{encode, evaluate};

    fn point(w0: &str, w1: &str, label: Label) -> DataPoint {
        DataPoint::new("p", "the claim", "the reason", w0, w1, label).unwrap()
    }

    fn tiny_vocab() -> Vocabulary {
        Vocabulary::from(vec![UNKNOWN_TOKEN.to_string(), "good".to_string(), "bad".to_string()])
    }

    #[test]
    fn zero_model_gives_zero_logits() {
        let model = ProbeModel::zeros(tiny_vocab(), 4, AblationSpec::FULL, TrainConfig::default());
        assert_eq!(
            encode(&point("good", "bad", Label::W0), &model, AblationSpec::FULL),
            (0.0, 0.0)
        );
    }

    /// d = 4 with hand-set weights; expected logits computed by hand.
    #[test]
    fn hand_computed_logits() {
        let mut model = ProbeModel::zeros(tiny_vocab(), 4, AblationSpec::WARRANT, TrainConfig::default());
        model.row_mut(1).copy_from_slice(&[1.0, 0.0, 2.0, 0.0]); // good
        model.row_mut(2).copy_from_slice(&[0.0, 1.0, 0.0, -1.0]); // bad
        model.weights[8..12].copy_from_slice(&[0.5, -1.0, 0.25, 2.0]);
        model.bias = 0.1;
        // w0 = "good good bad" -> mean = (2/3, 1/3, 4/3, -1/3)
        //   z0 = 0.5*2/3 - 1/3 + 0.25*4/3 - 2/3 + 0.1 = -1/3 + 0.1
        // w1 = "bad" -> (0, 1, 0, -1)
        //   z1 = -1 - 2 + 0.1 = -2.9
        let p = point("good good bad", "bad", Label::W0);
        let (z0, z1) = encode(&p, &model, AblationSpec::WARRANT);
        assert!((z0 - (-1.0 / 3.0 + 0.1)).abs() < 1e-12);
        assert!((z1 - (-2.9)).abs() < 1e-12);
        // Unknown tokens map to row 0, which is zero here.
        let (z0, _) = encode(&point("mystery", "bad", Label::W0), &model, AblationSpec::WARRANT);
        assert!((z0 - 0.1).abs() < 1e-12);
    }

    #[test]
    fn swapping_warrants_swaps_logits() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        let model = ProbeModel::random(
            tiny_vocab(),
            5,
            AblationSpec::FULL,
            TrainConfig::default(),
            0.5,
            &mut rng,
        );
        let (a0, a1) = encode(&point("good bad", "bad", Label::W0), &model, AblationSpec::FULL);
        let (b0, b1) = encode(&point("bad", "good bad", Label::W0), &model, AblationSpec::FULL);
        assert_eq!((a0, a1), (b1, b0));
    }

    #[test]
    fn zero_model_predicts_slot_zero() {
        let data = Dataset::new(
            "s",
            vec![
                DataPoint::new("a", "c", "r", "good", "bad", Label::W0).unwrap(),
                DataPoint::new("b", "c", "r", "good", "bad", Label::W1).unwrap(),
                DataPoint::new("c", "c", "r", "good", "bad", Label::W1).unwrap(),
            ],
        )
        .unwrap();
        let model = ProbeModel::zeros(tiny_vocab(), 3, AblationSpec::FULL, TrainConfig::default());
        let result = evaluate(&model, &data, AblationSpec::FULL).unwrap();
        assert!(result.predictions.iter().all(|l| *l == Label::W0));
        assert!((result.accuracy - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(evaluate(&model, &data, AblationSpec::FULL).unwrap(), result);
    }

    #[test]
    fn evaluate_rejects_foreign_tokenizer_and_ablation() {
        let data = Dataset::new("s", vec![point("good", "bad", Label::W0)]).unwrap();
        let mut model = ProbeModel::zeros(tiny_vocab(), 2, AblationSpec::FULL, TrainConfig::default());
        assert!(matches!(
            evaluate(&model, &data, AblationSpec::WARRANT),
            Err(ProbeError::AblationMismatch { .. })
        ));
        model.tokenizer = "wordpiece".into();
        assert!(matches!(
            evaluate(&model, &data, AblationSpec::FULL),
            Err(ProbeError::VocabularyMismatch { .. })
        ));
    }

    #[test]
    fn checkpoint_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        let model = ProbeModel::random(
            tiny_vocab(),
            3,
            AblationSpec::CLAIM_WARRANT,
            TrainConfig::default(),
            0.1,
            &mut rng,
        );
        model.save_json(&path).unwrap();
        assert_eq!(ProbeModel::load_json(&path).unwrap(), model);
    }
}
