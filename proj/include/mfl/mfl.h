#ifndef MFL_H
#define MFL_H

/* C interface to the MFL toolchain. All strings are UTF-8 and
 * NUL-terminated. Strings returned through `char**` out-parameters are owned
 * by the caller and released with mfl_string_free. On failure a description
 * is available from mfl_last_error on the calling thread. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MFL_API __declspec(dllexport)
#else
#define MFL_API __attribute__((visibility("default")))
#endif

typedef enum mfl_status {
  MFL_OK = 0,
  MFL_ERR_SYNTAX = 1,
  MFL_ERR_TYPE = 2,
  MFL_ERR_RUNTIME = 3,  /* the program failed, e.g. division by zero */
  MFL_ERR_LIMIT = 4,    /* step or depth limit reached */
  MFL_ERR_BREACH = 5,   /* an evaluator invariant was violated */
  MFL_MISMATCH = 6,     /* the two semantics disagree */
  MFL_ERR_ARGUMENT = 7,
  MFL_ERR_IO = 8,
  MFL_ERR_INTERNAL = 9
} mfl_status;

typedef enum mfl_semantics { MFL_MEMO = 0, MFL_PURE = 1 } mfl_semantics;

typedef enum mfl_fault {
  MFL_FAULT_NONE = 0,
  MFL_FAULT_SKIP_INSERT = 1,
  MFL_FAULT_WRONG_BRANCH = 2
} mfl_fault;

typedef struct mfl_program mfl_program;
typedef struct mfl_result mfl_result;

typedef struct mfl_run_options {
  mfl_semantics semantics;
  int cold;
  int checked;
  mfl_fault fault;
  uint64_t seed;      /* memo-table hash seed */
  uint64_t max_steps; /* 0: unlimited */
  uint64_t max_depth;
  int trace;
} mfl_run_options;

typedef struct mfl_fuzz_options {
  uint64_t count;
  uint64_t seed;
  mfl_fault fault;
  int checked;
  int cold;
  uint64_t max_steps;
  const char* out_dir; /* NULL or "": counterexamples are not written */
} mfl_fuzz_options;

MFL_API const char* mfl_status_string(mfl_status s);

/* "line:col: kind: message" for syntax and type errors, "kind: message"
 * otherwise. Empty if the last call on this thread succeeded. */
MFL_API const char* mfl_last_error(void);

MFL_API void mfl_string_free(char* s);

MFL_API mfl_status mfl_parse(const char* source, size_t length, mfl_program** out);
MFL_API void mfl_program_free(mfl_program* p);

/* Number of bundled corpus programs, and their names and sources. */
MFL_API size_t mfl_corpus_count(void);
MFL_API const char* mfl_corpus_name(size_t i);
MFL_API const char* mfl_corpus_source(size_t i);
MFL_API const char* mfl_corpus_expected(size_t i);

/* On success *type_out, if not NULL, receives the type of main. */
MFL_API mfl_status mfl_check(const mfl_program* p, char** type_out);
MFL_API mfl_status mfl_print(const mfl_program* p, char** out);

MFL_API void mfl_run_options_init(mfl_run_options* o);
MFL_API mfl_status mfl_run(const mfl_program* p, const mfl_run_options* o, mfl_result** out);
MFL_API const char* mfl_result_value(const mfl_result* r);
MFL_API const char* mfl_result_stats_json(const mfl_result* r);
/* Null unless the run was traced under the memo semantics. */
MFL_API const char* mfl_result_trace_json(const mfl_result* r);
MFL_API void mfl_result_free(mfl_result* r);

/* Runs both semantics. Returns MFL_OK, MFL_MISMATCH, MFL_ERR_BREACH or
 * MFL_ERR_LIMIT; *report_json, if not NULL, receives the report either way. */
MFL_API mfl_status mfl_diff(const mfl_program* p, const mfl_run_options* o, char** report_json);

MFL_API void mfl_fuzz_options_init(mfl_fuzz_options* o);
/* MFL_ERR_BREACH if any breach was found, else MFL_MISMATCH on any
 * mismatch, else MFL_OK. *summary_json receives the summary. */
MFL_API mfl_status mfl_fuzz(const mfl_fuzz_options* o, char** summary_json);

MFL_API mfl_status mfl_bench_quicksort(const size_t* sizes, size_t n_sizes, size_t trials,
                                       uint64_t seed, unsigned jobs, char** json);
MFL_API mfl_status mfl_bench_overhead(const int64_t* sizes, size_t n_sizes, uint64_t seed,
                                      char** json);

#ifdef __cplusplus
}
#endif

#endif
