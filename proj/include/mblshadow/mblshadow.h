// Copyright 2026 The mblshadow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MBLSHADOW_H
#define MBLSHADOW_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(MBLSHADOW_BUILDING)
#define MBLS_API __attribute__((visibility("default")))
#else
#define MBLS_API
#endif

typedef enum mbls_status {
  MBLS_OK = 0,
  MBLS_ERR_INVALID_ARGUMENT = 1,
  MBLS_ERR_DIMENSION = 2,
  MBLS_ERR_DOMAIN = 3,
  MBLS_ERR_CONFIG = 4,
  MBLS_ERR_IO = 5,
  MBLS_ERR_RUNTIME = 6,
  MBLS_ERR_NULL_POINTER = 7,
  MBLS_ERR_BUFFER_TOO_SMALL = 8,
} mbls_status;

typedef struct mbls_config mbls_config;
typedef struct mbls_result mbls_result;
typedef struct mbls_table mbls_table;

/// Receives one progress line per call; `line` is valid only during the call.
typedef void (*mbls_log_fn)(const char* line, void* user);

MBLS_API const char* mbls_version(void);

/// Message of the most recent failure on the calling thread; empty if none.
MBLS_API const char* mbls_last_error(void);

MBLS_API mbls_status mbls_config_default(mbls_config** out);
MBLS_API mbls_status mbls_config_parse(const char* text, mbls_config** out);
MBLS_API mbls_status mbls_config_load(const char* path, mbls_config** out);
/// Overrides one key with the same syntax as a config line; the whole
/// configuration is revalidated and left unchanged on failure.
MBLS_API mbls_status mbls_config_set(mbls_config* config, const char* key, const char* value);
/// Canonical text. Writes at most `capacity` bytes including the terminator;
/// `needed` receives the full size including the terminator.
MBLS_API mbls_status mbls_config_to_text(const mbls_config* config, char* buffer,
                                         size_t capacity, size_t* needed);
MBLS_API void mbls_config_free(mbls_config* config);

/// Runs the configured command. A result is produced even when the command
/// fails; its exit code is 0, 1 (validation) or 2 (runtime).
MBLS_API mbls_status mbls_run(const mbls_config* config, mbls_log_fn log, void* user,
                              mbls_result** out);
MBLS_API int mbls_result_exit_code(const mbls_result* result);
MBLS_API const char* mbls_result_error(const mbls_result* result);
MBLS_API size_t mbls_result_artifact_count(const mbls_result* result);
MBLS_API const char* mbls_result_artifact(const mbls_result* result, size_t index);
MBLS_API size_t mbls_result_warning_count(const mbls_result* result);
MBLS_API const char* mbls_result_warning(const mbls_result* result, size_t index);
/// Acceptance criteria evaluated by a verify run.
MBLS_API size_t mbls_result_criterion_count(const mbls_result* result);
MBLS_API mbls_status mbls_result_criterion(const mbls_result* result, size_t index, int* id,
                                           int* passed, double* seconds);
MBLS_API const char* mbls_result_criterion_line(const mbls_result* result, size_t index);
MBLS_API void mbls_result_free(mbls_result* result);

/// In-memory shadow-norm run with the configuration's model and options.
MBLS_API mbls_status mbls_shadow_norm(const mbls_config* config, mbls_table** out);
MBLS_API size_t mbls_table_size(const mbls_table* table);
MBLS_API mbls_status mbls_table_entry(const mbls_table* table, size_t index, int* k, int* start,
                                      double* t, double* lambda);
MBLS_API double mbls_table_max_discarded_weight(const mbls_table* table);
MBLS_API void mbls_table_free(mbls_table* table);

/// Least squares of log(norm) against k over k_min..k_max.
MBLS_API mbls_status mbls_fit_alpha(const int* k, const double* norms, size_t count, int k_min,
                                    int k_max, double* c0, double* alpha, double* stderr_alpha);

/// Natural-log light cone; `force` skips the long-time guard.
MBLS_API mbls_status mbls_lambda_statement1(int k, double xi, double j0, double t, int force,
                                            double* out);
MBLS_API mbls_status mbls_lambda_pair_avg(int n, double xi, double j0, double t, double* out);

MBLS_API int mbls_clifford_count(void);
MBLS_API int mbls_criterion_count(void);

#ifdef __cplusplus
}
#endif

#endif
