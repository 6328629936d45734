use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::model::{EncodedPoint, Gradients, ProbeModel, Vocabulary};
use super::{AblationSpec, ProbeError};
use crate::corpus::Dataset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum EmbeddingInit {
    /// Uniform in `[-scale, scale]`.
    RandomUniform { scale: f64 },
    /// Text file, one `token v1 ... vd` per line. Tokens absent from the
    /// file keep their random initialization.
    File { path: PathBuf, scale: f64 },
}

impl Default for EmbeddingInit {
    fn default() -> Self {
        EmbeddingInit::RandomUniform { scale: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    /// Multiplies the learning rate whenever dev accuracy falls below the
    /// previous epoch's.
    pub anneal_factor: f64,
    pub max_epochs: usize,
    pub batch_size: usize,
    pub dropout: f64,
    pub seed: u64,
    pub embedding_dim: usize,
    pub embeddings: EmbeddingInit,
    /// Range of the uniform initialization of the scoring weights.
    pub weight_scale: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 1e-3,
            anneal_factor: 0.1,
            max_epochs: 20,
            batch_size: 32,
            dropout: 0.1,
            seed: 0,
            embedding_dim: 300,
            embeddings: EmbeddingInit::default(),
            weight_scale: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), ProbeError> {
        let fail = |m: &str| Err(ProbeError::Config(m.to_string()));
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return fail("learning_rate must be positive");
        }
        if !(self.anneal_factor > 0.0 && self.anneal_factor < 1.0) {
            return fail("anneal_factor must lie in (0, 1)");
        }
        if self.batch_size == 0 {
            return fail("batch_size must be at least 1");
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return fail("dropout must lie in [0, 1)");
        }
        if self.embedding_dim == 0 {
            return fail("embedding_dim must be at least 1");
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) || self.epsilon <= 0.0 {
            return fail("Adam betas must lie in [0, 1) and epsilon must be positive");
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> TrainConfig {
        TrainConfig { seed, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochLog {
    pub epoch: usize,
    pub train_loss: f64,
    pub dev_accuracy: f64,
    /// Rate used during this epoch.
    pub learning_rate: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: ProbeModel,
    pub log: Vec<EpochLog>,
    /// 0 when no epoch ran.
    pub best_epoch: usize,
}

impl TrainOutcome {
    pub fn log_jsonl(&self) -> String {
        self.log
            .iter()
            .map(|e| serde_json::to_string(e).expect("log records serialize") + "\n")
            .collect()
    }
}

/// Adam with dense moments for the scoring weights and row-lazy moments for
/// the embedding table: a row's moments advance only in steps where it
/// receives a gradient, with bias correction from the global step count.
struct Adam {
    beta1: f64,
    beta2: f64,
    epsilon: f64,
    step: i32,
    m_weights: Vec<f64>,
    v_weights: Vec<f64>,
    m_bias: f64,
    v_bias: f64,
    m_embed: Vec<f64>,
    v_embed: Vec<f64>,
}

impl Adam {
    fn new(model: &ProbeModel, config: &TrainConfig) -> Adam {
        Adam {
            beta1: config.beta1,
            beta2: config.beta2,
            epsilon: config.epsilon,
            step: 0,
            m_weights: vec![0.0; model.weights.len()],
            v_weights: vec![0.0; model.weights.len()],
            m_bias: 0.0,
            v_bias: 0.0,
            m_embed: vec![0.0; model.embeddings.len()],
            v_embed: vec![0.0; model.embeddings.len()],
        }
    }

    fn apply(&mut self, model: &mut ProbeModel, grads: &Gradients, lr: f64) {
        self.step += 1;
        let bc1 = 1.0 - self.beta1.powi(self.step);
        let bc2 = 1.0 - self.beta2.powi(self.step);
        // Folding the bias corrections into the step size and epsilon gives
        // exactly m_hat / (sqrt(v_hat) + eps).
        let step = Step {
            lr: lr * bc2.sqrt() / bc1,
            beta1: self.beta1,
            beta2: self.beta2,
            epsilon: self.epsilon * bc2.sqrt(),
        };

        for ((w, g), (m, v)) in model
            .weights
            .iter_mut()
            .zip(&grads.weights)
            .zip(self.m_weights.iter_mut().zip(self.v_weights.iter_mut()))
        {
            step.update(w, m, v, *g);
        }
        step.update(&mut model.bias, &mut self.m_bias, &mut self.v_bias, grads.bias);

        let d = model.dim;
        for (&id, row_grad) in &grads.embeddings {
            let start = id as usize * d;
            let params = &mut model.embeddings[start..start + d];
            let ms = &mut self.m_embed[start..start + d];
            let vs = &mut self.v_embed[start..start + d];
            for k in 0..d {
                step.update(&mut params[k], &mut ms[k], &mut vs[k], row_grad[k]);
            }
        }
    }
}

struct Step {
    lr: f64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
}

impl Step {
    fn update(&self, param: &mut f64, m: &mut f64, v: &mut f64, g: f64) {
        *m = self.beta1 * *m + (1.0 - self.beta1) * g;
        *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
        *param -= self.lr * *m / (v.sqrt() + self.epsilon);
    }
}

fn load_embedding_file(model: &mut ProbeModel, path: &std::path::Path) -> Result<usize, ProbeError> {
    let text = std::fs::read_to_string(path).map_err(|e| ProbeError::EmbeddingFile {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    let mut loaded = 0;
    for (i, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        let Some(token) = parts.next() else { continue };
        let values: Vec<f64> =
            parts
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|e| ProbeError::EmbeddingFile {
                    line: i + 1,
                    message: format!("{e}"),
                })?;
        if values.len() != model.dim {
            return Err(ProbeError::EmbeddingFile {
                line: i + 1,
                message: format!("expected {} values, found {}", model.dim, values.len()),
            });
        }
        let id = model.vocab().get(token);
        if id != 0 || token == super::UNKNOWN_TOKEN {
            model.row_mut(id).copy_from_slice(&values);
            loaded += 1;
        }
    }
    Ok(loaded)
}

fn accuracy(model: &ProbeModel, points: &[EncodedPoint], ablation: AblationSpec) -> Result<f64, ProbeError> {
    let predictions = model.predict_encoded(points, ablation)?;
    let correct = predictions.iter().zip(points).filter(|(p, e)| **p == e.label).count();
    Ok(correct as f64 / points.len() as f64)
}

/// Mini-batch Adam training, keeping the parameters of the best dev epoch.
///
/// After every epoch the dev accuracy is compared with the previous epoch's;
/// a drop multiplies the learning rate by `anneal_factor`. Ties for the best
/// epoch go to the earliest.
pub fn train(
    train: &Dataset,
    dev: &Dataset,
    config: &TrainConfig,
    ablation: AblationSpec,
) -> Result<TrainOutcome, ProbeError> {
    config.validate()?;
    if train.is_empty() {
        return Err(ProbeError::EmptySplit("train"));
    }
    if dev.is_empty() {
        return Err(ProbeError::EmptySplit("dev"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let vocab = Vocabulary::build(train);
    let embed_scale = match &config.embeddings {
        EmbeddingInit::RandomUniform { scale } | EmbeddingInit::File { scale, .. } => *scale,
    };
    let mut model = ProbeModel::zeros(vocab, config.embedding_dim, ablation, config.clone());
    for x in model.embeddings.iter_mut() {
        *x = rng.gen_range(-embed_scale..=embed_scale);
    }
    for x in model.weights.iter_mut() {
        *x = rng.gen_range(-config.weight_scale..=config.weight_scale);
    }
    if let EmbeddingInit::File { path, .. } = &config.embeddings {
        load_embedding_file(&mut model, path)?;
    }

    let train_points: Vec<EncodedPoint> = train.points().iter().map(|p| model.vocab().encode(p)).collect();
    let dev_points: Vec<EncodedPoint> = dev.points().iter().map(|p| model.vocab().encode(p)).collect();

    let mut adam = Adam::new(&model, config);
    let mut lr = config.learning_rate;
    let mut log = Vec::with_capacity(config.max_epochs);
    let mut best: Option<(usize, f64, ProbeModel)> = None;
    let mut previous_dev: Option<f64> = None;
    let mut order: Vec<usize> = (0..train_points.len()).collect();
    let keep = 1.0 - config.dropout;
    let width = 3 * config.embedding_dim;

    for epoch in 1..=config.max_epochs {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        for (batch_index, chunk) in order.chunks(config.batch_size).enumerate() {
            let batch: Vec<&EncodedPoint> = chunk.iter().map(|&i| &train_points[i]).collect();
            let (batch_loss, grads) = if config.dropout > 0.0 {
                let mut next_mask = || -> Vec<f64> {
                    (0..width)
                        .map(|_| if rng.gen::<f64>() < keep { 1.0 / keep } else { 0.0 })
                        .collect()
                };
                model.loss_and_gradients_with(&batch, ablation, Some(&mut next_mask))
            } else {
                model.loss_and_gradients_with(&batch, ablation, None)
            };
            if !batch_loss.is_finite() {
                return Err(ProbeError::Divergence {
                    epoch,
                    batch: batch_index + 1,
                    loss: batch_loss,
                });
            }
            loss_sum += batch_loss * batch.len() as f64;
            adam.apply(&mut model, &grads, lr);
        }
        let dev_accuracy = accuracy(&model, &dev_points, ablation)?;
        log.push(EpochLog {
            epoch,
            train_loss: loss_sum / train_points.len() as f64,
            dev_accuracy,
            learning_rate: lr,
        });
        if best.as_ref().is_none_or(|(_, acc, _)| dev_accuracy > *acc) {
            best = Some((epoch, dev_accuracy, model.clone()));
        }
        if previous_dev.is_some_and(|prev| dev_accuracy < prev) {
            lr *= config.anneal_factor;
        }
        previous_dev = Some(dev_accuracy);
    }

    let (best_epoch, model) = match best {
        Some((epoch, _, model)) => (epoch, model),
        None => (0, model),
    };
    Ok(TrainOutcome { model, log, best_epoch })
}
