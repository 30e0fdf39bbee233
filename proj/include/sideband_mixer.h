/* Copyright 2026 The sideband-mixer Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the sideband-mixer simulator. Handles are opaque; every
 * call returns a status code and failures leave a message retrievable with
 * sm_last_error() on the calling thread. */

#ifndef SIDEBAND_MIXER_H
#define SIDEBAND_MIXER_H

#include <stddef.h>

#if defined(SIDEBAND_MIXER_BUILDING)
#define SM_API __attribute__((visibility("default")))
#else
#define SM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sm_status {
    SM_OK = 0,
    SM_ERR_INTERNAL = 1,
    SM_ERR_CONFIG = 2,
    SM_ERR_CONVERGENCE = 3,
    SM_ERR_IO = 4,
    SM_ERR_INVALID_ARGUMENT = 5
} sm_status;

typedef struct sm_config sm_config;
typedef struct sm_result sm_result;

/* Library version string, e.g. "0.1.0". */
SM_API const char *sm_version(void);

/* Message of the last failed call on this thread ("" if none). */
SM_API const char *sm_last_error(void);
/* Error class name of the last failed call, e.g. "SchemaError". */
SM_API const char *sm_last_error_name(void);

/* Kind names: spectrum, g2, phase-sweep, detuning-map, fan, pathways.
 * kind may be NULL to take it from the config (default spectrum). */
SM_API sm_status sm_config_parse(const char *json_text, const char *kind, sm_config **out);
SM_API sm_status sm_config_load(const char *path, const char *kind, sm_config **out);
SM_API void sm_config_free(sm_config *config);

/* Canonical JSON of the resolved config. The string lives until the handle
 * is freed or the next call to this function on it. */
SM_API sm_status sm_config_emit(sm_config *config, const char **out);
/* Hex SHA-256 of the canonical config. */
SM_API sm_status sm_config_hash(sm_config *config, const char **out);
SM_API sm_status sm_config_kind(const sm_config *config, const char **out);

/* Runs the computation. threads = 0 means 1. */
SM_API sm_status sm_run(const sm_config *config, size_t threads, sm_result **out);
SM_API void sm_result_free(sm_result *result);

SM_API size_t sm_result_rows(const sm_result *result);
SM_API size_t sm_result_cols(const sm_result *result);
SM_API const char *sm_result_column_name(const sm_result *result, size_t col);
SM_API double sm_result_value(const sm_result *result, size_t row, size_t col);
SM_API const char *sm_result_manifest_json(const sm_result *result);

/* Writes the data file and its manifest atomically. path and format may be
 * NULL to use the config's output section. On success *written_path (if
 * non-NULL) points at the path used, valid until the result is freed. */
SM_API sm_status sm_result_write(sm_result *result, const sm_config *config, const char *path,
                                 const char *format, const char **written_path);

#ifdef __cplusplus
}
#endif

#endif
