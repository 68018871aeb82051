#ifndef ADELIA_H
#define ADELIA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AdeliaStatus {
  ADELIA_STATUS_OK = 0,
  ADELIA_STATUS_NULL_POINTER = 1,
  ADELIA_STATUS_INVALID_UTF8 = 2,
  ADELIA_STATUS_PARSE = 3,
  ADELIA_STATUS_VALIDATION = 4,
  ADELIA_STATUS_COMPUTATION = 5,
  ADELIA_STATUS_PANIC = 6,
} AdeliaStatus;

// A finite field `F_q`.
typedef struct AdeliaField AdeliaField;

// A finished computation: pass flag plus its JSON serialization.
typedef struct AdeliaReport AdeliaReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; valid until the next call.
const char *adelia_last_error(void);

const char *adelia_version(void);

// # Safety
// `out` must be a valid pointer.
enum AdeliaStatus adelia_field_new(uint32_t q, struct AdeliaField **out);

// # Safety
// `field` must come from [`adelia_field_new`] and not be used afterwards.
void adelia_field_free(struct AdeliaField *field);

// # Safety
// `field` must be a live handle or null.
uint32_t adelia_field_order(const struct AdeliaField *field);

// Residue theorem for `f dg` on `P^1`, with `f` and `g` rational functions
// in `x` over `field`.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum AdeliaStatus adelia_residue_curve(const struct AdeliaField *field,
                                       const char *f,
                                       const char *g,
                                       uint64_t seed,
                                       struct AdeliaReport **out);

// `(a, b)_v` for rationals `a`, `b`; `p = 0` selects the real place.
//
// # Safety
// `out` must be a valid pointer.
enum AdeliaStatus adelia_hilbert_symbol(int64_t a_num,
                                        int64_t a_den,
                                        int64_t b_num,
                                        int64_t b_den,
                                        uint64_t p,
                                        int8_t *out);

// `theta_(p,k,a)(z, lambda)` truncated to `eps`; writes real and imaginary parts.
//
// # Safety
// `out_re` and `out_im` must be valid pointers.
enum AdeliaStatus adelia_theta(int64_t p,
                               int64_t k,
                               double a_re,
                               double a_im,
                               double z_re,
                               double z_im,
                               double lambda_re,
                               double lambda_im,
                               double eps,
                               double *out_re,
                               double *out_im);

// Runs a task given as TOML text, as the `verify` command would.
//
// # Safety
// `config` must be a NUL-terminated string and `out` a valid pointer.
enum AdeliaStatus adelia_run_config(const char *config, struct AdeliaReport **out);

// Runs a named property suite.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum AdeliaStatus adelia_run_suite(const char *name, uint64_t seed, struct AdeliaReport **out);

// 1 if every check passed, 0 otherwise or for a null handle.
//
// # Safety
// `report` must be a live handle or null.
int32_t adelia_report_pass(const struct AdeliaReport *report);

// JSON text owned by the report.
//
// # Safety
// `report` must be a live handle or null.
const char *adelia_report_json(const struct AdeliaReport *report);

// # Safety
// `report` must come from this library and not be used afterwards.
void adelia_report_free(struct AdeliaReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ADELIA_H */
