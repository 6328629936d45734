use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use cueprobe::cli::{EXIT_DATA, EXIT_OK, EXIT_USAGE};

const TSV: &str = "#id\twarrant0\twarrant1\tcorrectLabelW0orW1\treason\tclaim\tdebateTitle\n\
a1\tpeople do not like ads\tpeople like ads\t0\tads are everywhere\tGoogle is a harmful monopoly\tt\n\
a2\tkids can learn online\tkids cannot learn online\t1\tschools closed\tSchools should stay open\tt\n\
a3\tvoting is a duty\tvoting is not a duty\t0\tturnout is low\tVoting should be mandatory\tt\n";

fn cueprobe(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cueprobe"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn fixture(dir: &Path) -> PathBuf {
    let path = dir.join("train.txt");
    fs::write(&path, TSV).unwrap();
    path
}

fn read_json(path: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn single_cue_has_rows_per_split_and_all() {
    let tmp = TempDir::new().unwrap();
    let train = fixture(tmp.path());
    let dev = tmp.path().join("dev.txt");
    fs::write(&dev, TSV.replace("a1", "b1").replace("a2", "b2").replace("a3", "b3")).unwrap();
    let out = tmp.path().join("out");
    let o = cueprobe(&["cues", s(&train), s(&dev), "--cue", "not"], &out);
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&o.stderr));
    let tsv = fs::read_to_string(out.join("cue.tsv")).unwrap();
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines[0], "split\tn\tcue\talpha\tproductivity\tcoverage");
    // "not" sits in one warrant of a1 (correct) and a3 (wrong).
    assert_eq!(lines[1], "train\t3\tnot\t2\t0.500000\t0.666667");
    assert_eq!(lines[3], "all\t6\tnot\t4\t0.500000\t0.666667");
    let json = read_json(out.join("cue.json"));
    assert_eq!(json["manifest"], "manifest.json");
    assert!(out.join("manifest.json").exists());
}

#[test]
fn absent_cue_reports_undefined_productivity() {
    let tmp = TempDir::new().unwrap();
    let train = fixture(tmp.path());
    let out = tmp.path().join("out");
    let o = cueprobe(&["cues", s(&train), "--cue", "zebra"], &out);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let tsv = fs::read_to_string(out.join("cue.tsv")).unwrap();
    assert_eq!(tsv.lines().nth(1).unwrap(), "train\t3\tzebra\t0\t\t0.000000");
    let json = read_json(out.join("cue.json"));
    assert_eq!(json["rows"][0]["productivity"], Value::Null);
}

#[test]
fn full_scan_respects_min_alpha() {
    let tmp = TempDir::new().unwrap();
    let train = fixture(tmp.path());
    let out = tmp.path().join("out");
    let o = cueprobe(&["cues", s(&train), "--min-alpha", "2", "--format", "tsv"], &out);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let tsv = fs::read_to_string(out.join("cues.train.tsv")).unwrap();
    assert_eq!(tsv.lines().next().unwrap(), "cue\talpha\tproductivity\tcoverage");
    assert_eq!(
        tsv.lines()
            .skip(1)
            .map(|l| l.split('\t').next().unwrap())
            .collect::<Vec<_>>(),
        ["not"]
    );
    assert!(!out.join("cues.train.json").exists());
    let o = cueprobe(&["cues", s(&train), "--min-alpha", "0"], &out);
    assert_eq!(o.status.code(), Some(EXIT_USAGE));
}

#[test]
fn synth_sidecar_matches_measurement() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let o = cueprobe(
        &[
            "synth",
            "--n",
            "200",
            "--productivity",
            "0.7",
            "--coverage",
            "0.5",
            "--seed",
            "4",
        ],
        &out,
    );
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let truth = read_json(out.join("synth.truth.json"));
    assert_eq!(truth["alpha"], 100);
    assert_eq!(truth["productive"], 70);

    let check = tmp.path().join("check");
    let o = cueprobe(
        &[
            "cues",
            s(&out.join("synth.jsonl")),
            "--cue",
            "not",
            "--sidecar",
            s(&out.join("synth.truth.json")),
        ],
        &check,
    );
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        read_json(check.join("manifest.json"))["checks"]["sidecar"]["matches"],
        true
    );

    // A doctored sidecar is a data error.
    let mut bad = truth.clone();
    bad["productive"] = 71.into();
    let bad_path = tmp.path().join("bad.truth.json");
    fs::write(&bad_path, bad.to_string()).unwrap();
    let o = cueprobe(
        &["cues", s(&out.join("synth.jsonl")), "--sidecar", s(&bad_path)],
        &check,
    );
    assert_eq!(o.status.code(), Some(EXIT_DATA));
}

#[test]
fn same_seed_gives_identical_outputs() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out in [&a, &b] {
        let o = cueprobe(&["synth", "--n", "50", "--splits", "train,dev", "--seed", "9"], out);
        assert_eq!(o.status.code(), Some(EXIT_OK));
    }
    for name in ["train.jsonl", "dev.jsonl", "train.truth.json", "dev.truth.json"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
    assert_ne!(
        fs::read(a.join("train.jsonl")).unwrap(),
        fs::read(a.join("dev.jsonl")).unwrap()
    );
}

#[test]
fn mirror_refuses_missing_negations() {
    let tmp = TempDir::new().unwrap();
    let train = fixture(tmp.path());
    let out = tmp.path().join("out");
    let o = cueprobe(&["mirror", s(&train)], &out);
    assert_eq!(o.status.code(), Some(EXIT_DATA));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("Voting should be mandatory"), "{err}");
    assert!(!out.join("train.adv.jsonl").exists());
}

#[test]
fn mirror_with_negation_file_and_heuristic_fallback() {
    let tmp = TempDir::new().unwrap();
    let train = fixture(tmp.path());
    let negations = tmp.path().join("neg.tsv");
    fs::write(
        &negations,
        "Google is a harmful monopoly\tGoogle is not a harmful monopoly\thuman\n",
    )
    .unwrap();
    let out = tmp.path().join("out");
    let o = cueprobe(
        &[
            "mirror",
            s(&train),
            "--negations",
            s(&negations),
            "--heuristic-fallback",
        ],
        &out,
    );
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&o.stderr));

    let review = fs::read_to_string(out.join("review.tsv")).unwrap();
    assert!(review.contains("Schools should not stay open\theuristic"));
    assert!(!review.contains("Google"));

    let mirrored = fs::read_to_string(out.join("train.adv.jsonl")).unwrap();
    let points: Vec<Value> = mirrored.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(points.len(), 6);
    assert_eq!(points[1]["id"], "a1#adv");
    assert_eq!(points[1]["claim"], "Google is not a harmful monopoly");
    assert_eq!(points[1]["warrant0"], points[0]["warrant1"]);
    assert_eq!(points[1]["label"], points[0]["label"]);
    assert_eq!(read_json(out.join("manifest.json"))["checks"]["passed"], true);
}

#[test]
fn mirror_of_empty_dataset_is_empty() {
    let tmp = TempDir::new().unwrap();
    let empty = tmp.path().join("empty.jsonl");
    fs::write(&empty, "").unwrap();
    let out = tmp.path().join("out");
    let o = cueprobe(&["mirror", s(&empty)], &out);
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(out.join("empty.adv.jsonl")).unwrap(), "");
}

#[test]
fn malformed_input_is_a_data_error() {
    let tmp = TempDir::new().unwrap();
    let bad = tmp.path().join("bad.txt");
    fs::write(&bad, "#id\tw0\tw1\tlabel\treason\tclaim\nx\ta\tb\t2\tr\tc\n").unwrap();
    let o = cueprobe(&["cues", s(&bad)], &tmp.path().join("out"));
    assert_eq!(o.status.code(), Some(EXIT_DATA));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 2"));
}

#[test]
fn usage_errors() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    assert_eq!(cueprobe(&["frobnicate"], &out).status.code(), Some(EXIT_USAGE));
    assert_eq!(
        cueprobe(&["synth", "--productivity", "1.5"], &out).status.code(),
        Some(EXIT_USAGE)
    );
    let train = fixture(tmp.path());
    let o = cueprobe(&["cues", s(&train), "--rank-key", "nonsense"], &out);
    assert_eq!(o.status.code(), Some(EXIT_USAGE));
}

#[test]
fn probe_single_seed_summary_collapses() {
    let tmp = TempDir::new().unwrap();
    let data = tmp.path().join("data");
    let o = cueprobe(
        &[
            "synth",
            "--n",
            "120",
            "--splits",
            "train,dev,test",
            "--filler-vocab",
            "20",
        ],
        &data,
    );
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let out = tmp.path().join("out");
    let o = cueprobe(
        &[
            "probe",
            "--train",
            s(&data.join("train.jsonl")),
            "--dev",
            s(&data.join("dev.jsonl")),
            "--test",
            s(&data.join("test.jsonl")),
            "--ablation",
            "w,full",
            "--seeds",
            "1",
            "--epochs",
            "3",
            "--dim",
            "16",
        ],
        &out,
    );
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&o.stderr));
    let tsv = fs::read_to_string(out.join("probe.tsv")).unwrap();
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines[0], "ablation\tmean\tsd\tmedian\tmax\truns\tfailed");
    assert_eq!(lines.len(), 3);
    for line in &lines[1..] {
        let f: Vec<&str> = line.split('\t').collect();
        assert_eq!(f[1], f[3]);
        assert_eq!(f[1], f[4]);
        assert_eq!(&f[5..], ["1", "0"]);
    }
    let log = fs::read_to_string(out.join("logs/w.seed0.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 3);
    assert!(out.join("probe.txt").exists());
    assert_eq!(read_json(out.join("manifest.json"))["seeds"], serde_json::json!([0]));
}
