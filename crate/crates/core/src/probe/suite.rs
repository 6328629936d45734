use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::{evaluate, train, AblationSpec, EpochLog, EvalResult, ProbeError, TrainConfig};
use crate::corpus::Dataset;

/// One seed's outcome under one ablation.
#[derive(Debug, Clone, Serialize)]
pub struct SeedRun {
    pub seed: u64,
    pub accuracy: Option<f64>,
    pub best_epoch: Option<usize>,
    pub error: Option<String>,
    #[serde(skip)]
    pub log: Vec<EpochLog>,
    #[serde(skip)]
    pub eval: Option<EvalResult>,
}

/// Mean, sample standard deviation, median and max of the successful runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub runs: usize,
    pub mean: f64,
    pub sd: f64,
    pub median: f64,
    pub max: f64,
}

impl Summary {
    /// `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        Some(Summary {
            runs: n,
            mean,
            sd,
            median,
            max: sorted[n - 1],
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AblationRow {
    pub ablation: AblationSpec,
    pub name: &'static str,
    pub summary: Option<Summary>,
    pub failed: usize,
    pub runs: Vec<SeedRun>,
}

/// Test accuracy per ablation over several seeds.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeTable {
    pub split: String,
    pub seeds: Vec<u64>,
    pub rows: Vec<AblationRow>,
}

impl ProbeTable {
    pub fn failed_runs(&self) -> usize {
        self.rows.iter().map(|r| r.failed).sum()
    }

    pub fn total_runs(&self) -> usize {
        self.rows.iter().map(|r| r.runs.len()).sum()
    }

    pub fn row(&self, ablation: AblationSpec) -> Option<&AblationRow> {
        self.rows.iter().find(|r| r.ablation == ablation)
    }

    /// `ablation  mean  sd  median  max  runs  failed`, empty statistics for
    /// rows where every seed failed.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("ablation\tmean\tsd\tmedian\tmax\truns\tfailed\n");
        for row in &self.rows {
            match row.summary {
                Some(s) => {
                    let _ = writeln!(
                        out,
                        "{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{}\t{}",
                        row.name, s.mean, s.sd, s.median, s.max, s.runs, row.failed
                    );
                }
                None => {
                    let _ = writeln!(out, "{}\t\t\t\t\t0\t{}", row.name, row.failed);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("probe table serializes")
    }

    /// Human-readable table in `mean ± sd | median | max` form.
    pub fn to_text(&self) -> String {
        let mut out = format!("{:<10} {:>14} {:>8} {:>8}\n", "", "Mean", "Median", "Max");
        for row in &self.rows {
            let label = if row.name == "full" {
                "BoV".to_string()
            } else {
                format!("BoV ({})", row.name)
            };
            match row.summary {
                Some(s) => {
                    let _ = writeln!(
                        out,
                        "{:<10} {:>6.3} ± {:<5.2} {:>8.3} {:>8.3}",
                        label, s.mean, s.sd, s.median, s.max
                    );
                }
                None => {
                    let _ = writeln!(out, "{label:<10} {:>14}", "all seeds failed");
                }
            }
        }
        out
    }
}

fn run_one(
    train_set: &Dataset,
    dev: &Dataset,
    test: &Dataset,
    config: &TrainConfig,
    ablation: AblationSpec,
    seed: u64,
) -> SeedRun {
    let result = train(train_set, dev, &config.with_seed(seed), ablation).and_then(|outcome| {
        let eval = evaluate(&outcome.model, test, ablation)?;
        Ok((outcome, eval))
    });
    match result {
        Ok((outcome, eval)) => SeedRun {
            seed,
            accuracy: Some(eval.accuracy),
            best_epoch: Some(outcome.best_epoch),
            error: None,
            log: outcome.log,
            eval: Some(eval),
        },
        Err(e) => SeedRun {
            seed,
            accuracy: None,
            best_epoch: None,
            error: Some(e.to_string()),
            log: Vec::new(),
            eval: None,
        },
    }
}

/// Trains and tests every (ablation, seed) pair. Runs execute in parallel;
/// each is single-threaded and seeded, and results are gathered in seed
/// order, so the table does not depend on scheduling. A failing seed is
/// recorded in its row without stopping the others.
pub fn run_probe_suite(
    train_set: &Dataset,
    dev: &Dataset,
    test: &Dataset,
    config: &TrainConfig,
    seeds: &[u64],
    ablations: &[AblationSpec],
) -> Result<ProbeTable, ProbeError> {
    if seeds.is_empty() {
        return Err(ProbeError::NoSeeds);
    }
    config.validate()?;
    let jobs: Vec<(usize, u64)> = (0..ablations.len())
        .flat_map(|a| seeds.iter().map(move |&s| (a, s)))
        .collect();
    let results: Vec<SeedRun> = jobs
        .par_iter()
        .map(|&(a, seed)| run_one(train_set, dev, test, config, ablations[a], seed))
        .collect();

    let mut results = results.into_iter();
    let rows = ablations
        .iter()
        .map(|&ablation| {
            let runs: Vec<SeedRun> = results.by_ref().take(seeds.len()).collect();
            let accs: Vec<f64> = runs.iter().filter_map(|r| r.accuracy).collect();
            AblationRow {
                ablation,
                name: ablation.name(),
                summary: Summary::of(&accs),
                failed: runs.len() - accs.len(),
                runs,
            }
        })
        .collect();
    Ok(ProbeTable {
        split: test.split().to_string(),
        seeds: seeds.to_vec(),
        rows,
    })
}
