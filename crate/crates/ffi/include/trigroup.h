#ifndef TRIGROUP_H
#define TRIGROUP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum TgStatus {
  TG_STATUS_OK = 0,
  TG_STATUS_NULL_POINTER = 1,
  TG_STATUS_INVALID_ARGUMENT = 2,
  TG_STATUS_PARSE = 3,
  TG_STATUS_SOLVER = 4,
  TG_STATUS_INVALID_UTF8 = 5,
  TG_STATUS_PANIC = 6,
} TgStatus;

// Outcome of the spectral (T) test.
typedef enum TgTStatus {
  TG_T_STATUS_CERTIFIED = 0,
  TG_T_STATUS_INCONCLUSIVE = 1,
  TG_T_STATUS_SKIPPED = 2,
  TG_T_STATUS_FAILED = 3,
} TgTStatus;

// Opaque presentation handle.
typedef struct TgPresentation TgPresentation;

// Flat summary of a trial verdict.
typedef struct TgVerdict {
  uint32_t generators;
  uint64_t relations;
  bool free_certified;
  // Rank of the free group; 0 unless `free_certified`.
  uint32_t rank;
  int64_t chi;
  bool chi_witness;
  uint64_t isolated_count;
  bool connected;
  enum TgTStatus t_status;
  // NaN when the spectrum was not computed.
  double lambda2;
} TgVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *tg_last_error_message(void);

// Parse the text presentation format.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum TgStatus tg_presentation_parse(const char *text, struct TgPresentation **out);

// Sample from the binomial model: each relator kept with probability `p`.
//
// # Safety
// `out` must be writable.
enum TgStatus tg_presentation_sample_binomial(uint32_t n,
                                              double p,
                                              uint64_t seed,
                                              struct TgPresentation **out);

// Sample exactly `t` distinct relators uniformly.
//
// # Safety
// `out` must be writable.
enum TgStatus tg_presentation_sample_uniform(uint32_t n,
                                             uint64_t t,
                                             uint64_t seed,
                                             struct TgPresentation **out);

// Release a handle. NULL is ignored.
//
// # Safety
// `p` must come from a `tg_presentation_*` constructor and not be used again.
void tg_presentation_free(struct TgPresentation *p);

// Number of generators, or 0 for NULL.
//
// # Safety
// `p` must be NULL or a live handle.
uint32_t tg_presentation_generator_count(const struct TgPresentation *p);

// Number of relators, or 0 for NULL.
//
// # Safety
// `p` must be NULL or a live handle.
size_t tg_presentation_relation_count(const struct TgPresentation *p);

// Serialize to the text format. Free the result with `tg_string_free`.
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum TgStatus tg_presentation_serialize(const struct TgPresentation *p, char **out);

// Release a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not be used again.
void tg_string_free(char *s);

// Run every certifier and witness on `p`.
//
// A solver failure is reported in `out->t_status` rather than the return
// code, so the rest of the verdict stays usable.
//
// # Safety
// `p` must be a live handle; `out` must be writable.
enum TgStatus tg_classify(const struct TgPresentation *p,
                          double margin,
                          bool spectra,
                          struct TgVerdict *out);

// Second-smallest eigenvalue of the link graph's normalized Laplacian.
//
// # Safety
// `p` must be a live handle; `lambda2` must be writable.
enum TgStatus tg_spectral_gap(const struct TgPresentation *p, double *lambda2);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIGROUP_H */
