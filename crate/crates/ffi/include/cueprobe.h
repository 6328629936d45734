#ifndef CUEPROBE_H
#define CUEPROBE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CueprobeStatus {
  CUEPROBE_STATUS_OK = 0,
  CUEPROBE_STATUS_NULL_ARGUMENT = 1,
  CUEPROBE_STATUS_INVALID_UTF8 = 2,
  CUEPROBE_STATUS_IO = 3,
  /**
   * Malformed input file or text.
   */
  CUEPROBE_STATUS_PARSE = 4,
  CUEPROBE_STATUS_INVALID_ARGUMENT = 5,
  /**
   * Some claims have no negation; the message lists them.
   */
  CUEPROBE_STATUS_MISSING_NEGATIONS = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  CUEPROBE_STATUS_INTERNAL = 7,
} CueprobeStatus;

/**
 * Opaque dataset handle.
 */
typedef struct CueprobeDataset CueprobeDataset;

/**
 * Opaque negation map handle.
 */
typedef struct CueprobeNegations CueprobeNegations;

/**
 * Cue statistics. `productivity` is NaN when `applicability` is zero.
 */
typedef struct CueprobeCueStats {
  size_t applicability;
  size_t productive;
  size_t n;
  double productivity;
  double coverage;
} CueprobeCueStats;

/**
 * Parameters of a synthetic dataset. `cue` is a NUL-terminated unigram.
 */
typedef struct CueprobePlantSpec {
  size_t n;
  const char *cue;
  double productivity;
  double coverage;
  size_t filler_vocab;
  size_t min_len;
  size_t max_len;
  uint64_t seed;
} CueprobePlantSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *cueprobe_last_error(void);

/**
 * Library version as a static string.
 */
const char *cueprobe_version(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed. Null is ignored.
 */
void cueprobe_string_free(char *s);

/**
 * Loads a dataset file. `format` is "tsv", "jsonl" or null to infer from the
 * extension.
 *
 * # Safety
 * `path` and a non-null `format` must be NUL-terminated strings; `out` must
 * be writable.
 */
enum CueprobeStatus cueprobe_dataset_load(const char *path,
                                          const char *format,
                                          struct CueprobeDataset **out);

/**
 * Parses JSON-lines text into a dataset named `split`.
 *
 * # Safety
 * `text` and `split` must be NUL-terminated strings; `out` must be writable.
 */
enum CueprobeStatus cueprobe_dataset_from_jsonl(const char *text,
                                                const char *split,
                                                struct CueprobeDataset **out);

/**
 * Number of points; zero for a null handle.
 *
 * # Safety
 * `ds` must be null or a live dataset handle.
 */
size_t cueprobe_dataset_len(const struct CueprobeDataset *ds);

/**
 * Serializes the dataset as JSON lines. Free the result with
 * [`cueprobe_string_free`].
 *
 * # Safety
 * `ds` must be a live dataset handle; `out` must be writable.
 */
enum CueprobeStatus cueprobe_dataset_to_jsonl(const struct CueprobeDataset *ds, char **out);

/**
 * # Safety
 * `ds` must come from this library and not have been freed. Null is ignored.
 */
void cueprobe_dataset_free(struct CueprobeDataset *ds);

/**
 * Statistics of one unigram or bigram (two space-separated tokens).
 *
 * # Safety
 * `ds` must be a live dataset handle, `cue` a NUL-terminated string and
 * `out` writable.
 */
enum CueprobeStatus cueprobe_cue_stats(const struct CueprobeDataset *ds,
                                       const char *cue,
                                       struct CueprobeCueStats *out);

/**
 * Full cue report as JSON. `rank_key` is "product", "productivity",
 * "coverage" or null for the default.
 *
 * # Safety
 * `ds` must be a live dataset handle, a non-null `rank_key` NUL-terminated,
 * `out` writable.
 */
enum CueprobeStatus cueprobe_scan_cues_json(const struct CueprobeDataset *ds,
                                            size_t min_applicability,
                                            const char *rank_key,
                                            char **out);

/**
 * Empty negation map.
 */
struct CueprobeNegations *cueprobe_negations_new(void);

/**
 * Loads a negation TSV (claim, negated claim, provenance).
 *
 * # Safety
 * `path` must be NUL-terminated; `out` must be writable.
 */
enum CueprobeStatus cueprobe_negations_load(const char *path, struct CueprobeNegations **out);

/**
 * Adds a human-written negation. With `both_directions` the reverse entry
 * is added too.
 *
 * # Safety
 * `map` must be a live handle; `claim` and `negated` NUL-terminated.
 */
enum CueprobeStatus cueprobe_negations_insert(struct CueprobeNegations *map,
                                              const char *claim,
                                              const char *negated,
                                              bool both_directions);

/**
 * Adds pairs of claims in `ds` that differ by a single negation.
 *
 * # Safety
 * `map` and `ds` must be live handles.
 */
enum CueprobeStatus cueprobe_negations_collect(struct CueprobeNegations *map,
                                               const struct CueprobeDataset *ds);

/**
 * Number of entries; zero for a null handle.
 *
 * # Safety
 * `map` must be null or a live handle.
 */
size_t cueprobe_negations_len(const struct CueprobeNegations *map);

/**
 * # Safety
 * `map` must come from this library and not have been freed. Null is ignored.
 */
void cueprobe_negations_free(struct CueprobeNegations *map);

/**
 * Adversarial twin: every point followed by its mirror. Fails with
 * `MissingNegations` unless every claim is covered by `map`.
 *
 * # Safety
 * `ds` and `map` must be live handles; `out` writable.
 */
enum CueprobeStatus cueprobe_mirror(const struct CueprobeDataset *ds,
                                    const struct CueprobeNegations *map,
                                    struct CueprobeDataset **out);

/**
 * Adds a warrant-swapped, label-flipped copy after every point.
 *
 * # Safety
 * `ds` must be a live handle; `out` writable.
 */
enum CueprobeStatus cueprobe_augment_swap(const struct CueprobeDataset *ds,
                                          struct CueprobeDataset **out);

/**
 * Generates a dataset with a planted cue. When `truth_json` is non-null it
 * receives the ground-truth sidecar, to be freed with
 * [`cueprobe_string_free`].
 *
 * # Safety
 * `spec` must point to a valid spec whose `cue` is NUL-terminated; `out`
 * writable.
 */
enum CueprobeStatus cueprobe_synth_generate(const struct CueprobePlantSpec *spec,
                                            struct CueprobeDataset **out,
                                            char **truth_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUEPROBE_H */
