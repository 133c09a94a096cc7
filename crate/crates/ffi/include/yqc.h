/* SPDX-License-Identifier: Apache-2.0 */

#ifndef YQC_H
#define YQC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum YqcFormat {
  YQC_FORMAT_SVG = 0,
  YQC_FORMAT_TIKZ = 1,
  YQC_FORMAT_IR_JSON = 2,
} YqcFormat;

typedef enum YqcInput {
  YQC_INPUT_YQUANT = 0,
  YQC_INPUT_QASM = 1,
} YqcInput;

// Result code of every fallible call.
typedef enum YqcStatus {
  YQC_STATUS_OK = 0,
  YQC_STATUS_NULL_ARGUMENT = 1,
  YQC_STATUS_INVALID_UTF8 = 2,
  YQC_STATUS_INVALID_ARGUMENT = 3,
  YQC_STATUS_PARSE_ERROR = 4,
  YQC_STATUS_ELABORATION_ERROR = 5,
  YQC_STATUS_STRICT_WARNING = 6,
  YQC_STATUS_PANIC = 7,
} YqcStatus;

// Compilation settings. Created by `yqc_options_new`.
typedef struct YqcOptions YqcOptions;

// Rendered bytes plus diagnostics. Created by `yqc_compile`.
typedef struct YqcOutput YqcOutput;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *yqc_version(void);

// Default options. Never returns null.
struct YqcOptions *yqc_options_new(void);

// # Safety
// `options` is null or a pointer from `yqc_options_new` not yet freed.
void yqc_options_free(struct YqcOptions *options);

// Set one option by name.
//
// Layout keys take lengths (`mm`, `cm`, `pt`, `bp`, `in`; bare numbers are
// mm). Also accepted: `nop_width` (length), `scale` (positive number),
// `margin` (length), `font_family` and `strict` (`true`/`false`).
//
// # Safety
// `options` is a live handle; `key` and `value` are NUL-terminated strings.
enum YqcStatus yqc_options_set(struct YqcOptions *options, const char *key, const char *value);

// Compile `source` (UTF-8, `source_len` bytes, no terminator needed).
//
// `input` is a `YqcInput` value and `format` a `YqcFormat` value; anything
// else yields `YQC_STATUS_INVALID_ARGUMENT`.
// On success `*out` receives a new handle. On failure `*out` is set to null
// and the message and position are available from `yqc_last_error_*`.
// A null `options` means defaults.
//
// # Safety
// `source` is valid for `source_len` bytes; `options` is null or live;
// `out` is a valid pointer to writable storage.
enum YqcStatus yqc_compile(const uint8_t *source,
                           size_t source_len,
                           uint32_t input,
                           uint32_t format,
                           const struct YqcOptions *options,
                           struct YqcOutput **out);

// Pointer to the rendered bytes; `*len` receives their count.
// The bytes are not NUL-terminated and live as long as the handle.
//
// # Safety
// `output` is null or live; `len` is null or writable.
const uint8_t *yqc_output_data(const struct YqcOutput *output, size_t *len);

// # Safety
// `output` is null or live.
size_t yqc_output_warning_count(const struct YqcOutput *output);

// Warning `index` formatted as `line:column: message`, or null when out of
// range. The string lives as long as the handle.
//
// # Safety
// `output` is null or live.
const char *yqc_output_warning(const struct YqcOutput *output, size_t index);

// # Safety
// `output` is null or a handle from `yqc_compile` not yet freed.
void yqc_output_free(struct YqcOutput *output);

// Message of the last failure on this thread, or null if none.
const char *yqc_last_error_message(void);

// 1-based line of the last failure; 0 when it has no source position.
uint32_t yqc_last_error_line(void);

// 1-based column of the last failure; 0 when it has no source position.
uint32_t yqc_last_error_column(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* YQC_H */
