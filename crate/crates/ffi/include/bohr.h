/* C interface to the bohr exact quantum-logic library.
* All structured data crosses this boundary as JSON text in the
* same encodings the `bohr` command line uses. */

#ifndef BOHR_H
#define BOHR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. `Domain` and `Malformed` mirror the
 * CLI's exit codes 1 and 2; the remaining variants are boundary problems
 * that cannot occur through the CLI.
 */
typedef enum BohrStatus {
  /**
   * The call succeeded; out-parameters are populated.
   */
  BohrStatus_Ok = 0,
  /**
   * Well-formed data violating a mathematical precondition.
   */
  BohrStatus_Domain = 1,
  /**
   * Unparseable or ill-shaped input.
   */
  BohrStatus_Malformed = 2,
  /**
   * A required pointer argument was null.
   */
  BohrStatus_NullPointer = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  BohrStatus_InvalidUtf8 = 4,
  /**
   * An internal panic was caught at the boundary.
   */
  BohrStatus_Panicked = 5,
} BohrStatus;

/**
 * An immutable poset of classical contexts behind an opaque handle.
 */
typedef struct BohrPoset BohrPoset;

/**
 * One element of the frame over a poset, behind an opaque handle. The
 * handle keeps its poset alive internally.
 */
typedef struct BohrSigma BohrSigma;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The library version as a static NUL-terminated string; never freed.
 */
const char *bohr_version(void);

/**
 * The error document of the most recent failing call on this thread, as
 * `{"error": {"code", "message"}}` JSON, or null if no call failed yet.
 * The pointer is owned by the library and stays valid until the next
 * failing call on the same thread; do not free it.
 */
const char *bohr_last_error_message(void);

/**
 * Releases a string previously returned through a `char **`
 * out-parameter. Accepts null.
 *
 * # Safety
 * `text` must be null or a pointer obtained from this library that has
 * not been freed before.
 */
void bohr_string_free(char *text);

/**
 * Parses a poset document into a handle. On success `*out` owns the
 * poset; release it with `bohr_poset_free`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for one write.
 */
enum BohrStatus bohr_poset_from_json(const char *text, struct BohrPoset **out);

/**
 * Closes the given seed contexts (a bare array or `{"seeds": [...]}`)
 * under intersection and returns the resulting poset handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for one write.
 */
enum BohrStatus bohr_poset_build_from_seeds_json(const char *text, struct BohrPoset **out);

/**
 * Serializes a poset handle to its canonical JSON document.
 *
 * # Safety
 * `poset` must be a live handle and `out` valid for one write.
 */
enum BohrStatus bohr_poset_to_json(const struct BohrPoset *poset, char **out);

/**
 * Number of contexts in the poset; 0 if the handle is null.
 *
 * # Safety
 * `poset` must be null or a live handle.
 */
uintptr_t bohr_poset_len(const struct BohrPoset *poset);

/**
 * Releases a poset handle. Accepts null.
 *
 * # Safety
 * `poset` must be null or a pointer obtained from this library that has
 * not been freed before.
 */
void bohr_poset_free(struct BohrPoset *poset);

/**
 * Parses a frame-element document against the given poset. The document
 * may name its poset by label (ignored) or embed it inline (then it must
 * equal the supplied one).
 *
 * # Safety
 * `poset` must be a live handle, `text` a NUL-terminated string, and
 * `out` valid for one write.
 */
enum BohrStatus bohr_sigma_from_json(const struct BohrPoset *poset,
                                     const char *text,
                                     struct BohrSigma **out);

/**
 * The full frame element (every atom of every context selected).
 *
 * # Safety
 * `poset` must be a live handle and `out` valid for one write.
 */
enum BohrStatus bohr_sigma_top(const struct BohrPoset *poset, struct BohrSigma **out);

/**
 * The empty frame element (nothing selected anywhere).
 *
 * # Safety
 * `poset` must be a live handle and `out` valid for one write.
 */
enum BohrStatus bohr_sigma_bot(const struct BohrPoset *poset, struct BohrSigma **out);

/**
 * Serializes a frame element with its poset embedded inline, so the
 * document is self-contained.
 *
 * # Safety
 * `sigma` must be a live handle and `out` valid for one write.
 */
enum BohrStatus bohr_sigma_to_json(const struct BohrSigma *sigma, char **out);

/**
 * True iff the element is the full one. Null yields false.
 *
 * # Safety
 * `sigma` must be null or a live handle.
 */
bool bohr_sigma_is_top(const struct BohrSigma *sigma);

/**
 * True iff the element is the empty one. Null yields false.
 *
 * # Safety
 * `sigma` must be null or a live handle.
 */
bool bohr_sigma_is_bot(const struct BohrSigma *sigma);

/**
 * Releases a frame-element handle. Accepts null.
 *
 * # Safety
 * `sigma` must be null or a pointer obtained from this library that has
 * not been freed before.
 */
void bohr_sigma_free(struct BohrSigma *sigma);

/**
 * Applies a Heyting operation. `op` is one of `"meet"`, `"join"`,
 * `"implies"` (binary: `b` required), `"neg"`, `"notnot"` (unary: `b`
 * must be null). Both operands must live over the same poset.
 *
 * # Safety
 * `op` must be a NUL-terminated string, `a` a live handle, `b` null or a
 * live handle, and `out` valid for one write.
 */
enum BohrStatus bohr_heyting(const char *op,
                             const struct BohrSigma *a,
                             const struct BohrSigma *b,
                             struct BohrSigma **out);

/**
 * Pairs a state (a `{"rho": ...}` density-matrix document) with a frame
 * element: the response carries the upward-closed set of contexts where
 * the state gives the element probability one, and the exact probability
 * at every context, as `{"upper_set": [...], "mu": {...}}`.
 *
 * # Safety
 * `state_text` must be a NUL-terminated string, `sigma` a live handle,
 * and `out` valid for one write.
 */
enum BohrStatus bohr_pair_json(const char *state_text, const struct BohrSigma *sigma, char **out);

/**
 * Spectral data of an observable read in context `context` of the poset:
 * eigenvalues by atom, the support selected by the open, the spectral
 * projection, and the induced frame element, as
 * `{"context", "eigenvalues", "support", "projection", "transform"}`.
 *
 * # Safety
 * `observable_text` and `open_text` must be NUL-terminated strings,
 * `poset` a live handle, and `out` valid for one write.
 */
enum BohrStatus bohr_gelfand_json(const char *observable_text,
                                  uintptr_t context,
                                  const char *open_text,
                                  const struct BohrPoset *poset,
                                  char **out);

/**
 * Searches a ray-set document for a one-per-basis valuation. The
 * response is `{"status": "SAT", "assignment": [...]}` with one 0/1 per
 * ray, or `{"status": "UNSAT", "explored": n}` with the number of
 * decisions the exhaustive search needed.
 *
 * # Safety
 * `rayset_text` must be a NUL-terminated string and `out` valid for one
 * write.
 */
enum BohrStatus bohr_ks_check_json(const char *rayset_text, char **out);

/**
 * Enumerates the partitions of `n` into exactly `k` parts as a JSON
 * array of weakly decreasing part lists.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum BohrStatus bohr_enum_young_json(uintptr_t n, uintptr_t k, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOHR_H */
