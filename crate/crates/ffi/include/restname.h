#ifndef RESTNAME_H
#define RESTNAME_H

/* This file is generated by cbindgen from restname-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call. Mirrors the CLI exit-code contract, with
// extra codes for boundary misuse.
typedef enum RestnameStatus {
  RESTNAME_STATUS_OK = 0,
  RESTNAME_STATUS_PARSE_ERROR = 1,
  RESTNAME_STATUS_CONFIG_ERROR = 2,
  RESTNAME_STATUS_CONSTRAINT_ERROR = 3,
  RESTNAME_STATUS_NULL_ARGUMENT = 4,
  RESTNAME_STATUS_INVALID_UTF8 = 5,
  RESTNAME_STATUS_INTERNAL_ERROR = 6,
} RestnameStatus;

// Opaque suite handle. Create with one of the constructors, release with
// [`restname_suite_free`].
typedef struct RestnameSuite RestnameSuite;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Owned copy of the last error message on this thread, or null when the
// previous call succeeded. Free with [`restname_string_free`].
char *restname_last_error_message(void);

// Frees a string returned by this library. Passing null is a no-op.
//
// # Safety
// `s` must be a pointer previously returned by a restname function and not
// yet freed.
void restname_string_free(char *s);

// Releases a suite handle. Passing null is a no-op.
//
// # Safety
// `suite` must be a pointer previously returned by a restname constructor
// and not yet freed.
void restname_suite_free(struct RestnameSuite *suite);

// Parses REST-Assured-style source text into a suite handle. `file_name`
// picks the dialect by extension (`.kt` is Kotlin) and labels diagnostics.
//
// # Safety
// `text` and `file_name` must be valid NUL-terminated strings; `out` must
// point to writable storage for one pointer.
enum RestnameStatus restname_suite_parse_source(const char *text,
                                                const char *file_name,
                                                int lenient,
                                                struct RestnameSuite **out);

// Reads a suite from its IR JSON document. With `lenient` unset, unknown
// JSON fields are rejected.
//
// # Safety
// `json` must be a valid NUL-terminated string; `out` must point to
// writable storage for one pointer.
enum RestnameStatus restname_suite_from_json(const char *json,
                                             int lenient,
                                             struct RestnameSuite **out);

// Serializes a suite back to its canonical IR JSON. Returns null only when
// `suite` is null. Free the result with [`restname_string_free`].
//
// # Safety
// `suite` must be a live handle from this library.
char *restname_suite_to_json(const struct RestnameSuite *suite);

// Number of tests in the suite; zero for a null handle.
//
// # Safety
// `suite` must be a live handle from this library or null.
size_t restname_suite_test_count(const struct RestnameSuite *suite);

// Sorts the suite by path, status group, and verb into a new handle; the
// input handle is untouched.
//
// # Safety
// `suite` must be a live handle; `out` must point to writable storage for
// one pointer.
enum RestnameStatus restname_suite_sort(const struct RestnameSuite *suite,
                                        struct RestnameSuite **out);

// Names every test in suite order and returns the names as a JSON string
// array. Conventions: 0 number, 1 result, 2 query, 3 condition. Free the
// result with [`restname_string_free`].
//
// # Safety
// `suite` must be a live handle; `out_json` must point to writable storage
// for one pointer.
enum RestnameStatus restname_suite_names_json(const struct RestnameSuite *suite,
                                              int convention,
                                              size_t max_len,
                                              int suppress_mechanisms,
                                              char **out_json);

// Full pipeline over source text: parse, sort, name, and rewrite. The
// rewritten file is returned through `out_text`; free it with
// [`restname_string_free`].
//
// # Safety
// `text` and `file_name` must be valid NUL-terminated strings; `out_text`
// must point to writable storage for one pointer.
enum RestnameStatus restname_apply_source(const char *text,
                                          const char *file_name,
                                          int convention,
                                          size_t max_len,
                                          int suppress_mechanisms,
                                          int lenient,
                                          char **out_text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RESTNAME_H */
