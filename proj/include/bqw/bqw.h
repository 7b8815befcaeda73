/* C interface to the witness-set library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call returns a bqw_status; on failure bqw_last_error() describes the
 * problem (thread-local, valid until the next call on the same thread).
 * Strings returned through char** are owned by the caller and released with
 * bqw_string_free. Points are passed as JSON arrays of coordinate arrays whose
 * entries are field-expression strings, e.g. [["0","1/2"],["sqrt(2)","0"]].
 */
#ifndef BQW_BQW_H
#define BQW_BQW_H

#include <stddef.h>
#include <stdint.h>

#if defined(BQW_BUILDING)
#define BQW_API __attribute__((visibility("default")))
#else
#define BQW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bqw_status {
  BQW_OK = 0,
  BQW_ERR_PARSE = 1,        /* malformed JSON or field expression */
  BQW_ERR_PRECONDITION = 2, /* a constructor precondition does not hold */
  BQW_ERR_DOMAIN = 3,       /* division by zero, square root of a negative */
  BQW_ERR_ARGUMENT = 4,     /* null pointer or out-of-range argument */
  BQW_ERR_INTERNAL = 5
} bqw_status;

typedef struct bqw_witness bqw_witness;

BQW_API const char* bqw_version(void);
BQW_API const char* bqw_last_error(void);
BQW_API void bqw_string_free(char* s);
BQW_API void bqw_witness_free(bqw_witness* w);

/* Witness forcing |anchor, anchor + v*direction| = v for the value v of expr.
 * anchor_json / direction_json are single coordinate arrays or NULL for the
 * origin and the first axis. */
BQW_API bqw_status bqw_compile(int dim, const char* expr, const char* anchor_json, const char* direction_json,
                       bqw_witness** out);

BQW_API bqw_status bqw_witness_from_json(const char* text, bqw_witness** out);
BQW_API bqw_status bqw_witness_to_json(const bqw_witness* w, char** out);
BQW_API bqw_status bqw_witness_stats(const bqw_witness* w, size_t* points, size_t* unit_edges, int* tower_depth,
                             size_t* derivation_depth);

/* *passed is 1 when every declared edge and every claim verifies exactly. */
BQW_API bqw_status bqw_verify(const bqw_witness* w, int* passed, char** report_json);

BQW_API bqw_status bqw_hyperplane(int dim, const char* points_json, bqw_witness** out);
/* points_json holds J, K, L, M. */
BQW_API bqw_status bqw_equal_distance(int dim, const char* points_json, bqw_witness** out);
BQW_API bqw_status bqw_less_than(const char* points_json, bqw_witness** out);
/* points_json holds p, q. */
BQW_API bqw_status bqw_distinct(const char* points_json, bqw_witness** out);

/* *violated is 1 when a near-feasible map breaks a claim. */
BQW_API bqw_status bqw_falsify(const bqw_witness* w, int restarts, uint64_t seed, double margin, int* violated,
                       char** report_json);

BQW_API bqw_status bqw_unit_graph(const bqw_witness* w, char** framework_json);
BQW_API bqw_status bqw_rigidity(const char* framework_json, double tol, char** report_json);
/* eps is a field expression. alpha/beta < 0 take the framework's own. */
BQW_API bqw_status bqw_assemble(const char* framework_json, int alpha, int beta, const char* eps,
                        bqw_witness** out);

BQW_API bqw_status bqw_svg(const bqw_witness* w, char** svg);

#ifdef __cplusplus
}
#endif

#endif
