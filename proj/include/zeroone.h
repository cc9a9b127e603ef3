/* zeroone - sparse random relational structures: weight calculus, closures,
 * random expansion and Monte Carlo verification suites.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed here; every function returns a zo_status, with details from
 * zo_last_error(). Strings returned through char** are owned by the caller
 * and released with zo_string_free().
 */
#ifndef ZEROONE_H
#define ZEROONE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined _WIN32
#define ZO_API __declspec(dllexport)
#else
#define ZO_API __attribute__((visibility("default")))
#endif

typedef enum zo_status {
    ZO_OK = 0,
    ZO_ERR_INVALID_ARGUMENT = 1,
    ZO_ERR_PARSE = 2,
    ZO_ERR_HYPOTHESIS = 3,
    ZO_ERR_DEGENERATE_CONTEXT = 4,
    ZO_ERR_INTERNAL = 5,
    ZO_ERR_OVERFLOW = 6
} zo_status;

typedef struct zo_structure zo_structure;
typedef struct zo_context zo_context;
typedef struct zo_system zo_system;
typedef struct zo_spec zo_spec;
typedef struct zo_result zo_result;

ZO_API const char* zo_version(void);

/* Message of the last failing call on this thread; never NULL. */
ZO_API const char* zo_last_error(void);

ZO_API void zo_string_free(char* s);

/* ---- structures ------------------------------------------------------- */
ZO_API zo_status zo_structure_parse(const char* text, zo_structure** out);
ZO_API zo_status zo_structure_parse_file(const char* path, zo_structure** out);
ZO_API zo_status zo_structure_format(const zo_structure* s, char** out);
ZO_API zo_status zo_structure_size(const zo_structure* s, int* out);
ZO_API void zo_structure_free(zo_structure* s);

/* ---- contexts (base + optional expansion lines) ----------------------- */
ZO_API zo_status zo_context_parse(const char* text, zo_context** out);
ZO_API zo_status zo_context_parse_file(const char* path, zo_context** out);
ZO_API zo_status zo_context_format(const zo_context* c, char** out);
ZO_API zo_status zo_context_builtin(const char* name, zo_context** out);
ZO_API void zo_context_free(zo_context* c);

/* Weight of the pair (small, whole structure) under the context. */
ZO_API zo_status zo_pair_weight(const zo_context* c, const zo_structure* big,
                                const int* small, int small_len, double* out);
/* Classification name: equal|algebraic_i|strong_s|primitive_pr|mixed. */
ZO_API zo_status zo_pair_classify(const zo_context* c, const zo_structure* big,
                                  const int* small, int small_len, char** out);

/* Irrationality screen; JSON array of violations. */
ZO_API zo_status zo_screen(const zo_context* c, int size_bound, char** report_json);

/* ---- systems ----------------------------------------------------------- */
ZO_API zo_status zo_system_parse(const char* text, zo_system** out);
ZO_API zo_status zo_system_parse_file(const char* path, zo_system** out);
ZO_API zo_status zo_system_format(const zo_system* s, char** out);
ZO_API zo_status zo_system_builtin(const char* name, zo_system** out);
ZO_API zo_status zo_system_separativity(const zo_system* s, char** out);
ZO_API void zo_system_free(zo_system* s);

/* ---- experiments -------------------------------------------------------- */
ZO_API zo_status zo_spec_parse(const char* text, zo_spec** out);
ZO_API zo_status zo_spec_parse_file(const char* path, zo_spec** out);
/* Overrides applied on top of the spec: pass NULL to keep the spec value. */
ZO_API zo_status zo_spec_override_seed(zo_spec* s, uint64_t seed);
ZO_API zo_status zo_spec_override_trials(zo_spec* s, int trials);
ZO_API zo_status zo_spec_override_n(zo_spec* s, int n);
ZO_API void zo_spec_free(zo_spec* s);

ZO_API zo_status zo_run(const zo_spec* s, zo_result** out);
ZO_API void zo_result_free(zo_result* r);

/* Number of failed checks (0 means success). */
ZO_API int zo_result_failed_checks(const zo_result* r);
/* what: "jsonl" | "csv" | "report". Returned pointer borrows from r. */
ZO_API zo_status zo_result_text(const zo_result* r, const char* what, const char** out);
/* Writes trials.jsonl, summary.csv, report.txt under dir. */
ZO_API zo_status zo_result_write(const zo_result* r, const char* dir);

/* ---- misc --------------------------------------------------------------- */
/* kind: contexts|pairs|systems|quads|all */
ZO_API zo_status zo_catalog(const char* kind, char** out);

/* Parse + reserialize a file of the given kind (structure|context|system|
 * spec); returns the normalized text. */
ZO_API zo_status zo_validate_file(const char* kind, const char* path, char** normalized);

#ifdef __cplusplus
}
#endif

#endif /* ZEROONE_H */
