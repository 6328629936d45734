//! Batch commands behind the `cueprobe` binary.
//!
//! Every command writes its reports into the output directory together with
//! a run manifest. Report payloads depend only on inputs, flags and seeds;
//! the wall-clock timestamp lives in the manifest alone.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::adversarial::{
    augment_swap, collect_existing_negations, heuristic_negate, mirror_dataset, neutrality_check, AdversarialError,
    NegationMap, Provenance,
};
use crate::corpus::{load_dataset, CorpusError, Dataset, Format, Ngram};
use crate::cues::{self, cue_stats, format_proportion, CueError, CueReport, CueStats, RankKey};
use crate::probe::{run_probe_suite, AblationSpec, ProbeError, TrainConfig};
use crate::synth::{self, PlantSpec, SynthError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Cue(#[from] CueError),
    #[error(transparent)]
    Adversarial(#[from] AdversarialError),
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("{0}")]
    Data(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Synth(_) => EXIT_USAGE,
            CliError::Cue(CueError::MinApplicability | CueError::UnknownRankKey(_)) => EXIT_USAGE,
            CliError::Corpus(CorpusError::UnknownFormat(_)) => EXIT_USAGE,
            CliError::Probe(ProbeError::Config(_) | ProbeError::NoSeeds) => EXIT_USAGE,
            _ => EXIT_DATA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Tsv,
    Json,
    Both,
}

#[derive(Debug, Parser)]
#[command(
    name = "cueprobe",
    version,
    about = "Spurious-cue diagnostics for warrant-selection datasets"
)]
pub struct Cli {
    /// Report format; TSV and JSON twins by default.
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Both)]
    pub format: ReportFormat,
    /// Base random seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Manifest path; defaults to `<out>/manifest.json`.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Applicability, productivity and coverage of warrant cues.
    Cues(CuesArgs),
    /// Adversarial mirrored datasets.
    Mirror(MirrorArgs),
    /// Train and test the probe under input ablations.
    Probe(ProbeArgs),
    /// Synthetic dataset with a planted cue.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct CuesArgs {
    /// Dataset files, one per split.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Input layout; inferred from the extension when absent.
    #[arg(long)]
    pub input_format: Option<String>,
    /// Report only this unigram or bigram, one row per split plus `all`.
    #[arg(long)]
    pub cue: Option<String>,
    #[arg(long, default_value_t = cues::DEFAULT_MIN_APPLICABILITY)]
    pub min_alpha: usize,
    #[arg(long, default_value = "product")]
    pub rank_key: String,
    /// Ground-truth sidecar from `synth`; its cue must match the first input.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MirrorArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub input_format: Option<String>,
    /// Negation TSV: claim, negated claim, provenance.
    #[arg(long)]
    pub negations: Option<PathBuf>,
    /// Also pair up claims across the inputs that differ by one negation.
    #[arg(long)]
    pub collect: bool,
    /// Draft missing negations heuristically and list them for review.
    #[arg(long)]
    pub heuristic_fallback: bool,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub dev: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long)]
    pub input_format: Option<String>,
    /// `all`, or one or more of full, w, rw, cw.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    pub ablation: Vec<String>,
    /// Number of seeds, starting at `--seed`.
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    /// JSON training config; missing keys take defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Add warrant-swapped, label-inverted copies to the training split.
    #[arg(long)]
    pub swap_augment: bool,
    /// Write each trained model as a JSON checkpoint.
    #[arg(long)]
    pub save_models: bool,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value = "not")]
    pub cue: String,
    #[arg(long, default_value_t = 0.9)]
    pub productivity: f64,
    #[arg(long, default_value_t = 0.8)]
    pub coverage: f64,
    #[arg(long, default_value_t = 200)]
    pub filler_vocab: usize,
    #[arg(long, default_value_t = 4)]
    pub min_len: usize,
    #[arg(long, default_value_t = 10)]
    pub max_len: usize,
    /// Base file name.
    #[arg(long, default_value = "synth")]
    pub name: String,
    /// Generate several splits (e.g. `train,dev,test`), seeded consecutively.
    #[arg(long, value_delimiter = ',')]
    pub splits: Vec<String>,
}

#[derive(Debug, Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

/// Provenance of one run.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    command: String,
    args: Vec<String>,
    config: Value,
    inputs: Vec<InputDigest>,
    seeds: Vec<u64>,
    version: &'static str,
    outputs: Vec<String>,
    checks: Value,
    created_unix: u64,
}

/// What a successful command produced.
#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub outputs: Vec<PathBuf>,
    pub manifest: PathBuf,
    pub messages: Vec<String>,
}

struct Writer<'a> {
    dir: &'a Path,
    format: ReportFormat,
    manifest_ref: String,
    written: Vec<PathBuf>,
}

impl Writer<'_> {
    fn raw(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|source| CliError::Io {
                path: parent.to_path_buf(),
                source,
            })?;
        }
        fs::write(&path, contents).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        self.written.push(path);
        Ok(())
    }

    /// Writes the TSV and/or JSON twin of a report. JSON carries a pointer to
    /// the manifest.
    fn report(&mut self, stem: &str, tsv: &str, mut json: Value) -> Result<(), CliError> {
        if matches!(self.format, ReportFormat::Tsv | ReportFormat::Both) {
            self.raw(&format!("{stem}.tsv"), tsv)?;
        }
        if matches!(self.format, ReportFormat::Json | ReportFormat::Both) {
            if let Value::Object(map) = &mut json {
                map.insert("manifest".into(), Value::String(self.manifest_ref.clone()));
            }
            let text = serde_json::to_string_pretty(&json).expect("json values serialize") + "\n";
            self.raw(&format!("{stem}.json"), &text)?;
        }
        Ok(())
    }
}

fn digest(path: &Path) -> Result<InputDigest, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

fn input_format(flag: &Option<String>, path: &Path) -> Result<Format, CliError> {
    match flag {
        Some(f) => Ok(f.parse()?),
        None => Ok(Format::from_path(path)),
    }
}

fn load_all(paths: &[PathBuf], format: &Option<String>) -> Result<Vec<Dataset>, CliError> {
    let mut names = BTreeSet::new();
    paths
        .iter()
        .map(|p| {
            let ds = load_dataset(p, input_format(format, p)?)?;
            if !names.insert(ds.split().to_string()) || ds.split() == "all" {
                return Err(CliError::Usage(format!(
                    "split name `{}` from {} is duplicated or reserved",
                    ds.split(),
                    p.display()
                )));
            }
            Ok(ds)
        })
        .collect()
}

/// Parses `args` (including the program name), runs the command and maps
/// every failure to its exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match run(&cli, &argv) {
        Ok(outcome) => {
            for m in &outcome.messages {
                println!("{m}");
            }
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, argv: &[String]) -> Result<Outcome, CliError> {
    fs::create_dir_all(&cli.out).map_err(|source| CliError::Io {
        path: cli.out.clone(),
        source,
    })?;
    let manifest_path = cli.manifest.clone().unwrap_or_else(|| cli.out.join("manifest.json"));
    let manifest_ref = manifest_path
        .strip_prefix(&cli.out)
        .unwrap_or(&manifest_path)
        .display()
        .to_string();
    let mut writer = Writer {
        dir: &cli.out,
        format: cli.format,
        manifest_ref,
        written: Vec::new(),
    };

    let (name, result) = match &cli.command {
        Command::Cues(args) => ("cues", cmd_cues(args, &mut writer)),
        Command::Mirror(args) => ("mirror", cmd_mirror(args, &mut writer)),
        Command::Probe(args) => ("probe", cmd_probe(args, cli.seed, &mut writer)),
        Command::Synth(args) => ("synth", cmd_synth(args, cli.seed, &mut writer)),
    };
    let report = result?;

    let manifest = RunManifest {
        command: name.to_string(),
        args: argv.to_vec(),
        config: report.config,
        inputs: report.inputs,
        seeds: report.seeds,
        version: env!("CARGO_PKG_VERSION"),
        outputs: writer.written.iter().map(|p| p.display().to_string()).collect(),
        checks: report.checks,
        created_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
    };
    if let Some(parent) = manifest_path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| CliError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    fs::write(&manifest_path, text).map_err(|source| CliError::Io {
        path: manifest_path.clone(),
        source,
    })?;

    Ok(Outcome {
        exit_code: report.exit_code,
        outputs: writer.written,
        manifest: manifest_path,
        messages: report.messages,
    })
}

struct CommandReport {
    config: Value,
    inputs: Vec<InputDigest>,
    seeds: Vec<u64>,
    checks: Value,
    exit_code: i32,
    messages: Vec<String>,
}

impl CommandReport {
    fn new(config: Value, inputs: Vec<InputDigest>) -> Self {
        CommandReport {
            config,
            inputs,
            seeds: Vec::new(),
            checks: Value::Null,
            exit_code: EXIT_OK,
            messages: Vec::new(),
        }
    }
}

/// Sums per-split counts into statistics over the concatenated splits.
fn combine(stats: &[CueStats]) -> CueStats {
    CueStats {
        cue: stats[0].cue.clone(),
        applicability: stats.iter().map(|s| s.applicability).sum(),
        productive: stats.iter().map(|s| s.productive).sum(),
        n: stats.iter().map(|s| s.n).sum(),
    }
}

fn cue_row_json(split: &str, s: &CueStats) -> Value {
    json!({
        "split": split,
        "n": s.n,
        "cue": s.cue.to_string(),
        "alpha": s.applicability,
        "productivity": s.productivity(),
        "coverage": s.coverage(),
        "exploitable": s.exploitable(),
    })
}

fn cmd_cues(args: &CuesArgs, w: &mut Writer) -> Result<CommandReport, CliError> {
    let rank_key: RankKey = args.rank_key.parse()?;
    if args.min_alpha < 1 {
        return Err(CueError::MinApplicability.into());
    }
    let datasets = load_all(&args.inputs, &args.input_format)?;
    let inputs = args.inputs.iter().map(|p| digest(p)).collect::<Result<_, _>>()?;
    let mut report = CommandReport::new(
        json!({"cue": args.cue, "min_alpha": args.min_alpha, "rank_key": rank_key, "format": w.format}),
        inputs,
    );

    if let Some(cue_text) = &args.cue {
        let cue = Ngram::parse(cue_text)
            .ok_or_else(|| CliError::Usage(format!("`{cue_text}` is not a unigram or bigram")))?;
        let per_split: Vec<CueStats> = datasets.iter().map(|d| cue_stats(d, &cue)).collect();
        let mut rows: Vec<(String, CueStats)> = datasets
            .iter()
            .zip(&per_split)
            .map(|(d, s)| (d.split().to_string(), s.clone()))
            .collect();
        if datasets.len() > 1 {
            rows.push(("all".to_string(), combine(&per_split)));
        }
        let mut tsv = String::from("split\tn\tcue\talpha\tproductivity\tcoverage\n");
        for (split, s) in &rows {
            tsv.push_str(&format!(
                "{split}\t{}\t{}\t{}\t{}\t{}\n",
                s.n,
                s.cue,
                s.applicability,
                format_proportion(s.productivity()),
                format_proportion(Some(s.coverage()))
            ));
            report.messages.push(format!(
                "{split}: n={} alpha={} productivity={} coverage={:.3}",
                s.n,
                s.applicability,
                s.productivity().map_or("undefined".to_string(), |p| format!("{p:.3}")),
                s.coverage()
            ));
        }
        let json = json!({
            "cue": cue.to_string(),
            "threshold": cues::EXPLOIT_THRESHOLD,
            "rows": rows.iter().map(|(split, s)| cue_row_json(split, s)).collect::<Vec<_>>(),
        });
        w.report("cue", &tsv, json)?;
    } else {
        for ds in &datasets {
            let r = cues::scan_all_cues(ds, args.min_alpha, rank_key)?;
            w.report(&format!("cues.{}", ds.split()), &r.to_tsv(), r.to_json())?;
            report.messages.push(format!(
                "{}: {} cues with alpha >= {}",
                ds.split(),
                r.cues.len(),
                args.min_alpha
            ));
        }
        if datasets.len() > 1 {
            let r = scan_combined(&datasets, args.min_alpha, rank_key)?;
            w.report("cues.all", &r.to_tsv(), r.to_json())?;
            report
                .messages
                .push(format!("all: {} cues with alpha >= {}", r.cues.len(), args.min_alpha));
        }
    }

    if let Some(sidecar) = &args.sidecar {
        let text = fs::read_to_string(sidecar).map_err(|source| CliError::Io {
            path: sidecar.clone(),
            source,
        })?;
        let truth: synth::GroundTruth =
            serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", sidecar.display())))?;
        let measured = cue_stats(&datasets[0], &truth.stats().cue);
        let matches = measured == truth.stats();
        report.checks = json!({"sidecar": {"path": sidecar.display().to_string(), "matches": matches}});
        if !matches {
            return Err(CliError::Data(format!(
                "measured alpha={} productive={} n={} differs from ground truth alpha={} productive={} n={}",
                measured.applicability, measured.productive, measured.n, truth.alpha, truth.productive, truth.n
            )));
        }
        report.messages.push("sidecar ground truth matches".to_string());
    }
    Ok(report)
}

/// Cue report over the concatenation of `datasets`.
pub fn scan_combined(datasets: &[Dataset], min_alpha: usize, rank_key: RankKey) -> Result<CueReport, CueError> {
    let n: usize = datasets.iter().map(Dataset::len).sum();
    if n == 0 {
        return Err(CueError::EmptyDataset("all".into()));
    }
    let mut totals: std::collections::HashMap<Ngram, (usize, usize)> = std::collections::HashMap::new();
    for ds in datasets {
        for s in cues::all_cue_stats(ds) {
            let e = totals.entry(s.cue).or_default();
            e.0 += s.applicability;
            e.1 += s.productive;
        }
    }
    let mut stats: Vec<CueStats> = totals
        .into_iter()
        .filter(|(_, (a, _))| *a >= min_alpha)
        .map(|(cue, (applicability, productive))| CueStats {
            cue,
            applicability,
            productive,
            n,
        })
        .collect();
    cues::sort_cues(&mut stats, rank_key);
    Ok(CueReport {
        split: "all".into(),
        n,
        rank_key,
        min_applicability: min_alpha,
        cues: stats,
    })
}

fn cmd_mirror(args: &MirrorArgs, w: &mut Writer) -> Result<CommandReport, CliError> {
    let datasets = load_all(&args.inputs, &args.input_format)?;
    let mut inputs: Vec<InputDigest> = args.inputs.iter().map(|p| digest(p)).collect::<Result<_, _>>()?;
    let mut negations = NegationMap::new();
    if let Some(path) = &args.negations {
        negations = NegationMap::load_tsv(path)?;
        inputs.push(digest(path)?);
    }
    if args.collect {
        negations.extend(&collect_existing_negations(&datasets));
    }
    let mut report = CommandReport::new(
        json!({
            "negations": args.negations.as_ref().map(|p| p.display().to_string()),
            "collect": args.collect,
            "heuristic_fallback": args.heuristic_fallback,
        }),
        inputs,
    );

    let missing = negations.uncovered(&datasets);
    if !missing.is_empty() {
        if !args.heuristic_fallback {
            return Err(AdversarialError::MissingNegations(missing).into());
        }
        let mut review = String::from("claim\tnegated\tprovenance\n");
        let mut failures = Vec::new();
        for claim in &missing {
            match heuristic_negate(claim) {
                Ok(draft) => {
                    review.push_str(&format!(
                        "{}\t{}\t{}\n",
                        draft.claim,
                        draft.negated,
                        Provenance::Heuristic.as_str()
                    ));
                    negations.insert(claim.clone(), draft.negated, Provenance::Heuristic)?;
                }
                Err(_) => failures.push(claim.clone()),
            }
        }
        w.raw("review.tsv", &review)?;
        if !failures.is_empty() {
            return Err(CliError::Data(format!(
                "{} claim(s) need a manual negation: {}",
                failures.len(),
                failures.join(" | ")
            )));
        }
        report
            .messages
            .push(format!("{} heuristic negation(s) written to review.tsv", missing.len()));
    }
    w.raw("negations.tsv", &negations.to_tsv())?;

    let mut checks = serde_json::Map::new();
    let mut all_passed = true;
    for ds in &datasets {
        let mirrored = mirror_dataset(ds, &negations)?;
        w.raw(&format!("{}.adv.jsonl", ds.split()), &mirrored.to_jsonl_string())?;
        let check = neutrality_check(&mirrored);
        all_passed &= check.passed();
        report.messages.push(format!(
            "{}: {} -> {} points, {} applicable cues, neutrality {}",
            ds.split(),
            ds.len(),
            mirrored.len(),
            check.applicable_cues,
            if check.passed() { "passed" } else { "FAILED" }
        ));
        checks.insert(
            ds.split().to_string(),
            serde_json::to_value(&check).expect("serializes"),
        );
    }
    report.checks = json!({"neutrality": checks, "passed": all_passed});
    if !all_passed {
        report.exit_code = EXIT_DATA;
    }
    Ok(report)
}

fn parse_ablations(raw: &[String]) -> Result<Vec<AblationSpec>, CliError> {
    if raw.iter().any(|a| a.eq_ignore_ascii_case("all")) {
        return Ok(AblationSpec::ALL.to_vec());
    }
    let mut out: Vec<AblationSpec> = Vec::new();
    for a in raw {
        let spec: AblationSpec = a.parse().map_err(CliError::Usage)?;
        if !out.contains(&spec) {
            out.push(spec);
        }
    }
    Ok(out)
}

fn cmd_probe(args: &ProbeArgs, base_seed: u64, w: &mut Writer) -> Result<CommandReport, CliError> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            serde_json::from_str::<TrainConfig>(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => TrainConfig::default(),
    };
    if let Some(epochs) = args.epochs {
        config.max_epochs = epochs;
    }
    if let Some(dim) = args.dim {
        config.embedding_dim = dim;
    }
    config.seed = base_seed;
    config.validate()?;
    let ablations = parse_ablations(&args.ablation)?;
    if args.seeds == 0 {
        return Err(ProbeError::NoSeeds.into());
    }
    let seeds: Vec<u64> = (base_seed..base_seed + args.seeds).collect();

    let load =
        |p: &PathBuf| -> Result<Dataset, CliError> { Ok(load_dataset(p, input_format(&args.input_format, p)?)?) };
    let mut train = load(&args.train)?;
    let dev = load(&args.dev)?;
    let test = load(&args.test)?;
    if args.swap_augment {
        train = augment_swap(&train)?;
    }
    let inputs = [&args.train, &args.dev, &args.test]
        .into_iter()
        .map(|p| digest(p))
        .collect::<Result<_, _>>()?;
    let mut report = CommandReport::new(
        json!({
            "train": serde_json::to_value(&config).expect("config serializes"),
            "ablations": ablations.iter().map(|a| a.name()).collect::<Vec<_>>(),
            "swap_augment": args.swap_augment,
        }),
        inputs,
    );
    report.seeds = seeds.clone();

    let table = run_probe_suite(&train, &dev, &test, &config, &seeds, &ablations)?;
    for row in &table.rows {
        for run in &row.runs {
            let stem = format!("logs/{}.seed{}", row.ablation.slug(), run.seed);
            let log: String = run
                .log
                .iter()
                .map(|e| serde_json::to_string(e).expect("log serializes") + "\n")
                .collect();
            w.raw(&format!("{stem}.jsonl"), &log)?;
            if let Some(err) = &run.error {
                report.messages.push(format!("{} seed {}: {err}", row.name, run.seed));
            }
        }
    }
    if args.save_models {
        // Checkpoints are produced by retraining, which is deterministic per seed.
        for &ablation in &ablations {
            for &seed in &seeds {
                if let Ok(outcome) = crate::probe::train(&train, &dev, &config.with_seed(seed), ablation) {
                    let path = w.dir.join(format!("models/{}.seed{seed}.json", ablation.slug()));
                    fs::create_dir_all(path.parent().expect("has parent")).map_err(|source| CliError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    outcome.model.save_json(&path)?;
                    w.written.push(path);
                }
            }
        }
    }
    w.report("probe", &table.to_tsv(), table.to_json())?;
    w.raw("probe.txt", &table.to_text())?;
    report.messages.push(table.to_text());

    let failed = table.failed_runs();
    report.exit_code = if failed == 0 {
        EXIT_OK
    } else if failed == table.total_runs() {
        EXIT_DATA
    } else {
        EXIT_PARTIAL
    };
    Ok(report)
}

fn cmd_synth(args: &SynthArgs, base_seed: u64, w: &mut Writer) -> Result<CommandReport, CliError> {
    let base = PlantSpec {
        n: args.n,
        cue: args.cue.clone(),
        productivity: args.productivity,
        coverage: args.coverage,
        filler_vocab: args.filler_vocab,
        min_len: args.min_len,
        max_len: args.max_len,
        seed: base_seed,
    };
    let names: Vec<String> = if args.splits.is_empty() {
        vec![args.name.clone()]
    } else {
        args.splits.clone()
    };
    let mut report = CommandReport::new(serde_json::to_value(&base).expect("spec serializes"), Vec::new());
    for (i, name) in names.iter().enumerate() {
        let spec = PlantSpec {
            seed: base_seed + i as u64,
            ..base.clone()
        };
        let (dataset, truth) = synth::generate(&spec)?;
        let dataset = dataset.with_split(name.clone());
        w.raw(&format!("{name}.jsonl"), &dataset.to_jsonl_string())?;
        w.raw(
            &format!("{name}.truth.json"),
            &(serde_json::to_string_pretty(&truth).expect("truth serializes") + "\n"),
        )?;
        report.seeds.push(spec.seed);
        report.messages.push(format!(
            "{name}: n={} alpha={} productive={} coverage={:.3}",
            truth.n, truth.alpha, truth.productive, truth.coverage
        ));
    }
    Ok(report)
}
