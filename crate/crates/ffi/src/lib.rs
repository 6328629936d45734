//! C ABI over the cueprobe toolkit.
//!
//! Datasets and negation maps cross the boundary as opaque handles. Every
//! fallible call returns a [`CueprobeStatus`]; on failure the message is
//! available from [`cueprobe_last_error`] on the same thread. Strings handed
//! out by the library are freed with [`cueprobe_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use cueprobe::adversarial::{self, AdversarialError, NegationMap, Provenance};
use cueprobe::corpus::{self, CorpusError, Dataset, Format, Ngram};
use cueprobe::cues::{self, CueError, RankKey};
use cueprobe::synth::{self, PlantSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CueprobeStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    /// Malformed input file or text.
    Parse = 4,
    InvalidArgument = 5,
    /// Some claims have no negation; the message lists them.
    MissingNegations = 6,
    /// A Rust panic was caught at the boundary.
    Internal = 7,
}

/// Opaque dataset handle.
pub struct CueprobeDataset(Dataset);

/// Opaque negation map handle.
pub struct CueprobeNegations(NegationMap);

/// Cue statistics. `productivity` is NaN when `applicability` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CueprobeCueStats {
    pub applicability: usize,
    pub productive: usize,
    pub n: usize,
    pub productivity: f64,
    pub coverage: f64,
}

/// Parameters of a synthetic dataset. `cue` is a NUL-terminated unigram.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CueprobePlantSpec {
    pub n: usize,
    pub cue: *const c_char,
    pub productivity: f64,
    pub coverage: f64,
    pub filler_vocab: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(CueprobeStatus, String);

type Result<T> = std::result::Result<T, Failure>;

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        let status = match e {
            CorpusError::Io { .. } => CueprobeStatus::Io,
            CorpusError::UnknownFormat(_) => CueprobeStatus::InvalidArgument,
            _ => CueprobeStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

impl From<AdversarialError> for Failure {
    fn from(e: AdversarialError) -> Self {
        let status = match &e {
            AdversarialError::MissingNegations(_) => CueprobeStatus::MissingNegations,
            AdversarialError::NegationFile { .. } => CueprobeStatus::Parse,
            AdversarialError::Corpus(CorpusError::Io { .. }) => CueprobeStatus::Io,
            _ => CueprobeStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<CueError> for Failure {
    fn from(e: CueError) -> Self {
        Failure(CueprobeStatus::InvalidArgument, e.to_string())
    }
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("NULs replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure or panic, and maps it to a status.
fn guard(f: impl FnOnce() -> Result<()>) -> CueprobeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CueprobeStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal error: {message}"));
            CueprobeStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str> {
    if p.is_null() {
        return Err(Failure(CueprobeStatus::NullArgument, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CueprobeStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T> {
    p.as_ref()
        .ok_or_else(|| Failure(CueprobeStatus::NullArgument, format!("`{name}` is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<()> {
    if out.is_null() {
        return Err(Failure(CueprobeStatus::NullArgument, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NULs replaced").into_raw()
}

fn boxed_dataset(d: Dataset) -> *mut CueprobeDataset {
    Box::into_raw(Box::new(CueprobeDataset(d)))
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cueprobe_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cueprobe_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a dataset file. `format` is "tsv", "jsonl" or null to infer from the
/// extension.
///
/// # Safety
/// `path` and a non-null `format` must be NUL-terminated strings; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_dataset_load(
    path: *const c_char,
    format: *const c_char,
    out: *mut *mut CueprobeDataset,
) -> CueprobeStatus {
    guard(|| {
        let path = Path::new(str_arg(path, "path")?);
        let format = if format.is_null() {
            Format::from_path(path)
        } else {
            str_arg(format, "format")?.parse()?
        };
        let ds = corpus::load_dataset(path, format)?;
        write_out(out, boxed_dataset(ds))
    })
}

/// Parses JSON-lines text into a dataset named `split`.
///
/// # Safety
/// `text` and `split` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_dataset_from_jsonl(
    text: *const c_char,
    split: *const c_char,
    out: *mut *mut CueprobeDataset,
) -> CueprobeStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let split = str_arg(split, "split")?;
        let ds = corpus::parse_jsonl(text.as_bytes(), split)?;
        write_out(out, boxed_dataset(ds))
    })
}

/// Number of points; zero for a null handle.
///
/// # Safety
/// `ds` must be null or a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_dataset_len(ds: *const CueprobeDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.0.len())
}

/// Serializes the dataset as JSON lines. Free the result with
/// [`cueprobe_string_free`].
///
/// # Safety
/// `ds` must be a live dataset handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_dataset_to_jsonl(
    ds: *const CueprobeDataset,
    out: *mut *mut c_char,
) -> CueprobeStatus {
    guard(|| {
        let ds = ref_arg(ds, "ds")?;
        write_out(out, owned_string(ds.0.to_jsonl_string()))
    })
}

/// # Safety
/// `ds` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_dataset_free(ds: *mut CueprobeDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Statistics of one unigram or bigram (two space-separated tokens).
///
/// # Safety
/// `ds` must be a live dataset handle, `cue` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_cue_stats(
    ds: *const CueprobeDataset,
    cue: *const c_char,
    out: *mut CueprobeCueStats,
) -> CueprobeStatus {
    guard(|| {
        let ds = ref_arg(ds, "ds")?;
        let text = str_arg(cue, "cue")?;
        let cue = Ngram::parse(text).ok_or_else(|| {
            Failure(
                CueprobeStatus::InvalidArgument,
                format!("`{text}` is not a unigram or bigram"),
            )
        })?;
        let s = cues::cue_stats(&ds.0, &cue);
        write_out(
            out,
            CueprobeCueStats {
                applicability: s.applicability,
                productive: s.productive,
                n: s.n,
                productivity: s.productivity().unwrap_or(f64::NAN),
                coverage: s.coverage(),
            },
        )
    })
}

/// Full cue report as JSON. `rank_key` is "product", "productivity",
/// "coverage" or null for the default.
///
/// # Safety
/// `ds` must be a live dataset handle, a non-null `rank_key` NUL-terminated,
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_scan_cues_json(
    ds: *const CueprobeDataset,
    min_applicability: usize,
    rank_key: *const c_char,
    out: *mut *mut c_char,
) -> CueprobeStatus {
    guard(|| {
        let ds = ref_arg(ds, "ds")?;
        let key = if rank_key.is_null() {
            RankKey::default()
        } else {
            str_arg(rank_key, "rank_key")?.parse()?
        };
        let report = cues::scan_all_cues(&ds.0, min_applicability, key)?;
        write_out(out, owned_string(report.to_json().to_string()))
    })
}

/// Empty negation map.
#[no_mangle]
pub extern "C" fn cueprobe_negations_new() -> *mut CueprobeNegations {
    Box::into_raw(Box::new(CueprobeNegations(NegationMap::new())))
}

/// Loads a negation TSV (claim, negated claim, provenance).
///
/// # Safety
/// `path` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_negations_load(
    path: *const c_char,
    out: *mut *mut CueprobeNegations,
) -> CueprobeStatus {
    guard(|| {
        let map = NegationMap::load_tsv(Path::new(str_arg(path, "path")?))?;
        write_out(out, Box::into_raw(Box::new(CueprobeNegations(map))))
    })
}

/// Adds a human-written negation. With `both_directions` the reverse entry
/// is added too.
///
/// # Safety
/// `map` must be a live handle; `claim` and `negated` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_negations_insert(
    map: *mut CueprobeNegations,
    claim: *const c_char,
    negated: *const c_char,
    both_directions: bool,
) -> CueprobeStatus {
    guard(|| {
        let map = map
            .as_mut()
            .ok_or_else(|| Failure(CueprobeStatus::NullArgument, "`map` is null".into()))?;
        let (claim, negated) = (str_arg(claim, "claim")?, str_arg(negated, "negated")?);
        if both_directions {
            map.0.insert_pair(claim, negated, Provenance::Human)?;
        } else {
            map.0.insert(claim, negated, Provenance::Human)?;
        }
        Ok(())
    })
}

/// Adds pairs of claims in `ds` that differ by a single negation.
///
/// # Safety
/// `map` and `ds` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_negations_collect(
    map: *mut CueprobeNegations,
    ds: *const CueprobeDataset,
) -> CueprobeStatus {
    guard(|| {
        let ds = ref_arg(ds, "ds")?;
        let map = map
            .as_mut()
            .ok_or_else(|| Failure(CueprobeStatus::NullArgument, "`map` is null".into()))?;
        map.0.extend(&adversarial::collect_existing_negations([&ds.0]));
        Ok(())
    })
}

/// Number of entries; zero for a null handle.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_negations_len(map: *const CueprobeNegations) -> usize {
    map.as_ref().map_or(0, |m| m.0.len())
}

/// # Safety
/// `map` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_negations_free(map: *mut CueprobeNegations) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Adversarial twin: every point followed by its mirror. Fails with
/// `MissingNegations` unless every claim is covered by `map`.
///
/// # Safety
/// `ds` and `map` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_mirror(
    ds: *const CueprobeDataset,
    map: *const CueprobeNegations,
    out: *mut *mut CueprobeDataset,
) -> CueprobeStatus {
    guard(|| {
        let ds = ref_arg(ds, "ds")?;
        let map = ref_arg(map, "map")?;
        let mirrored = adversarial::mirror_dataset(&ds.0, &map.0)?;
        write_out(out, boxed_dataset(mirrored))
    })
}

/// Adds a warrant-swapped, label-flipped copy after every point.
///
/// # Safety
/// `ds` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_augment_swap(
    ds: *const CueprobeDataset,
    out: *mut *mut CueprobeDataset,
) -> CueprobeStatus {
    guard(|| {
        let ds = ref_arg(ds, "ds")?;
        write_out(out, boxed_dataset(adversarial::augment_swap(&ds.0)?))
    })
}

/// Generates a dataset with a planted cue. When `truth_json` is non-null it
/// receives the ground-truth sidecar, to be freed with
/// [`cueprobe_string_free`].
///
/// # Safety
/// `spec` must point to a valid spec whose `cue` is NUL-terminated; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cueprobe_synth_generate(
    spec: *const CueprobePlantSpec,
    out: *mut *mut CueprobeDataset,
    truth_json: *mut *mut c_char,
) -> CueprobeStatus {
    guard(|| {
        let spec = ref_arg(spec, "spec")?;
        let plant = PlantSpec {
            n: spec.n,
            cue: str_arg(spec.cue, "spec.cue")?.to_string(),
            productivity: spec.productivity,
            coverage: spec.coverage,
            filler_vocab: spec.filler_vocab,
            min_len: spec.min_len,
            max_len: spec.max_len,
            seed: spec.seed,
        };
        let (ds, truth) =
            synth::generate(&plant).map_err(|e| Failure(CueprobeStatus::InvalidArgument, e.to_string()))?;
        if out.is_null() {
            return Err(Failure(CueprobeStatus::NullArgument, "output pointer is null".into()));
        }
        if !truth_json.is_null() {
            let text = serde_json::to_string(&truth).expect("ground truth serializes");
            truth_json.write(owned_string(text));
        }
        out.write(boxed_dataset(ds));
        Ok(())
    })
}
