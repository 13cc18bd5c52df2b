/* bsp.h - C interface to the bistochastic stream-privacy engine.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every fallible call returns a bsp_status; on error, a human-readable
 * detail message is available through bsp_last_error_message() (stored
 * per thread). Out-parameters are only written on BSP_OK.
 */
#ifndef BSP_H
#define BSP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bsp_status {
  BSP_OK = 0,
  BSP_INVALID_DIMENSION = 1,
  BSP_SHAPE_ERROR = 2,
  BSP_NOT_BISTOCHASTIC = 3,
  BSP_INVALID_TRANSFORM = 4,
  BSP_INDEX_ERROR = 5,
  BSP_INVALID_LAMBDA = 6,
  BSP_DUPLICATE_ID = 7,
  BSP_INVALID_VALUE = 8,
  BSP_INSUFFICIENT_SEED = 9,
  BSP_UNKNOWN_CATEGORY = 10,
  BSP_ALREADY_KNOWN = 11,
  BSP_EMPTY_INPUT = 12,
  BSP_SCHEMA_ERROR = 13,
  BSP_PARSE_ERROR = 14,
  BSP_INVALID_TARGET = 15,
  BSP_INVALID_RANGE = 16,
  BSP_AUDIT_INPUT_ERROR = 17,
  BSP_INVALID_ARGUMENT = 18,
  BSP_IO_ERROR = 19,
  BSP_UNKNOWN_ERROR = 20
} bsp_status;

const char* bsp_status_name(bsp_status s);
/* Detail message of the last failing call on this thread. */
const char* bsp_last_error_message(void);

/* ---------------- random number generator ---------------- */

typedef struct bsp_rng bsp_rng;

bsp_status bsp_rng_new(uint64_t seed, bsp_rng** out);
/* Substream generator: seed' = splitmix64(master ^ fnv1a64(label)). */
bsp_status bsp_rng_derive(uint64_t master, const char* label, bsp_rng** out);
bsp_status bsp_derive_seed(uint64_t master, const char* label, uint64_t* out);
void bsp_rng_free(bsp_rng* rng);
double bsp_rng_unit(bsp_rng* rng);    /* uniform [0, 1) */
double bsp_rng_lambda(bsp_rng* rng);  /* uniform (0, 1) */
bsp_status bsp_rng_index(bsp_rng* rng, uint64_t n, uint64_t* out);

/* ---------------- bistochastic matrix ---------------- */

typedef struct bsp_matrix bsp_matrix;

bsp_status bsp_matrix_identity(uint64_t r, bsp_matrix** out);
bsp_status bsp_matrix_perfect(uint64_t r, bsp_matrix** out);
/* data is row-major r*r, data[u*r + v] = p_uv. */
bsp_status bsp_matrix_from_dense(const double* data, uint64_t r, double tol,
                                 bsp_matrix** out);
/* Dense text format: one row per line, space-separated decimal floats,
 * '#'-prefixed comment lines ignored. */
bsp_status bsp_matrix_read_text(const char* path, bsp_matrix** out);
bsp_status bsp_matrix_write_text(const bsp_matrix* m, const char* path);
/* Generate a matrix whose privacy level is within 1e-3 of target_beta
 * (0 < target_beta <= 1), via random lam = 0.5 T-transforms plus a final
 * bisected one. achieved_beta may be NULL. */
bsp_status bsp_matrix_generate(uint64_t r, double target_beta, uint64_t seed,
                               bsp_matrix** out, double* achieved_beta);
bsp_status bsp_matrix_clone(const bsp_matrix* m, bsp_matrix** out);
void bsp_matrix_free(bsp_matrix* m);

uint64_t bsp_matrix_dim(const bsp_matrix* m);
uint64_t bsp_matrix_nnz(const bsp_matrix* m);
/* h = entropy rate (bits), h_max = log2 r, beta = h/h_max. Any of the
 * out-pointers may be NULL. O(1). */
bsp_status bsp_matrix_entropy(const bsp_matrix* m, double* h, double* h_max,
                              double* beta);
/* out must hold r*r doubles (row-major). */
bsp_status bsp_matrix_to_dense(const bsp_matrix* m, double* out);
bsp_status bsp_matrix_augment(bsp_matrix* m);
bsp_status bsp_matrix_apply_t(bsp_matrix* m, uint64_t j, uint64_t k,
                              double lam);
/* y = P'x; x and y hold r doubles. */
bsp_status bsp_matrix_apply_numeric(const bsp_matrix* m, const double* x,
                                    uint64_t n, double* y);
/* Draw v with probability p_uv. */
bsp_status bsp_matrix_sample(const bsp_matrix* m, uint64_t u, bsp_rng* rng,
                             uint64_t* v);
bsp_status bsp_matrix_validate(const bsp_matrix* m, double tol);

/* ---------------- stream engine ---------------- */

typedef struct bsp_stream bsp_stream;

typedef enum bsp_lambda_mode {
  BSP_LAMBDA_UNIFORM = 0,
  BSP_LAMBDA_FIXED = 1
} bsp_lambda_mode;

typedef enum bsp_transforms_mode {
  BSP_TRANSFORMS_FIXED = 0,
  BSP_TRANSFORMS_RANGE = 1
} bsp_transforms_mode;

typedef struct bsp_policy {
  bsp_lambda_mode lambda_mode;
  double lambda_value; /* Fixed mode, in (0,1) */
  bsp_transforms_mode transforms_mode;
  uint32_t transforms_lo;
  uint32_t transforms_hi;
} bsp_policy;

typedef enum bsp_unknown_mode {
  BSP_UNKNOWN_REJECT = 0,
  BSP_UNKNOWN_EXPAND = 1
} bsp_unknown_mode;

typedef enum bsp_event_kind {
  BSP_EVENT_RELEASE = 0,
  BSP_EVENT_UPDATE = 1
} bsp_event_kind;

typedef enum bsp_value_kind {
  BSP_VALUE_NUMERIC = 0,
  BSP_VALUE_CATEGORICAL = 1
} bsp_value_kind;

typedef struct bsp_event {
  bsp_event_kind kind;
  uint64_t t; /* arrival counter, 1-based */
  const char* id;
  const char* attr;
  bsp_value_kind value_kind;
  double numeric_value;   /* valid for numeric attributes */
  const char* category;   /* valid for categorical attributes, else NULL */
  const char* partner;    /* mixed partner id, NULL when absent */
  double beta;            /* aggregate guarantee after this arrival */
} bsp_event;

/* Invoked synchronously, once per emitted event, before ingest returns.
 * String pointers are only valid during the callback. */
typedef void (*bsp_event_cb)(const bsp_event* e, void* user);

typedef struct bsp_value {
  bsp_value_kind kind;
  double num;
  const char* cat;
} bsp_value;

bsp_status bsp_stream_new(uint64_t master_seed, bsp_stream** out);
void bsp_stream_free(bsp_stream* s);

/* Attribute declarations; must all happen before the first ingest.
 * The seed matrix (dim r0 >= 2) protects the first r0 records, which are
 * withheld until all r0 have arrived; every numeric attribute must use
 * the same seed dimension. */
bsp_status bsp_stream_add_numeric(bsp_stream* s, const char* name,
                                  const bsp_policy* policy,
                                  const bsp_matrix* seed_matrix);
/* expand_target may be NULL (uniformly random existing label). */
bsp_status bsp_stream_add_categorical(bsp_stream* s, const char* name,
                                      const char* const* labels,
                                      uint64_t n_labels, const bsp_matrix* m,
                                      bsp_unknown_mode unknown_mode,
                                      double expand_lambda,
                                      const char* expand_target);

/* Protect one record; values holds one entry per attribute in declaration
 * order. All of the arrival's events reach cb before the call returns. */
bsp_status bsp_stream_ingest(bsp_stream* s, const char* id,
                             const bsp_value* values, uint64_t n_values,
                             bsp_event_cb cb, void* user);

double bsp_stream_beta(const bsp_stream* s);
uint64_t bsp_stream_arrivals(const bsp_stream* s);
bsp_status bsp_stream_attr_report(const bsp_stream* s, const char* name,
                                  double* h, double* h_max, double* beta);
/* Deep copy of the attribute's current matrix. */
bsp_status bsp_stream_attr_matrix(const bsp_stream* s, const char* name,
                                  bsp_matrix** out);

#ifdef __cplusplus
}
#endif

#endif /* BSP_H */
