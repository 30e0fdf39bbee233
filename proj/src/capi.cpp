// Copyright 2026 The sideband-mixer Authors
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

#include "sideband_mixer.h"

#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "sideband/errors.hpp"
#include "sideband/run_config.hpp"

struct sm_config {
    sideband::RunConfig config;
    std::string emitted;
    std::string hash;
};

struct sm_result {
    sideband::RunResult result;
    std::string manifest;
    std::string written_path;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_error_name;

sm_status fail(sm_status code, const char *name, const std::string &msg) {
    last_error = msg;
    last_error_name = name;
    return code;
}

template <typename Fn>
sm_status guarded(Fn &&fn) {
    try {
        fn();
        last_error.clear();
        last_error_name.clear();
        return SM_OK;
    } catch (const sideband::Error &e) {
        return fail(static_cast<sm_status>(static_cast<int>(e.error_class())), e.name(), e.what());
    } catch (const std::bad_alloc &) {
        return fail(SM_ERR_INTERNAL, "OutOfMemory", "out of memory");
    } catch (const std::exception &e) {
        return fail(SM_ERR_INTERNAL, "InternalError", e.what());
    } catch (...) {
        return fail(SM_ERR_INTERNAL, "InternalError", "unknown failure");
    }
}

std::optional<sideband::RunKind> kind_arg(const char *kind) {
    if (!kind) {
        return std::nullopt;
    }
    return sideband::kind_from_name(kind);
}

}  // namespace

extern "C" {

SM_API const char *sm_version(void) {
    return sideband::version();
}

SM_API const char *sm_last_error(void) {
    return last_error.c_str();
}

SM_API const char *sm_last_error_name(void) {
    return last_error_name.c_str();
}

SM_API sm_status sm_config_parse(const char *json_text, const char *kind, sm_config **out) {
    if (!json_text || !out) {
        return fail(SM_ERR_INVALID_ARGUMENT, "InvalidArgument", "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        auto cfg = std::make_unique<sm_config>();
        cfg->config = sideband::parse_config(json_text, kind_arg(kind));
        *out = cfg.release();
    });
}

SM_API sm_status sm_config_load(const char *path, const char *kind, sm_config **out) {
    if (!path || !out) {
        return fail(SM_ERR_INVALID_ARGUMENT, "InvalidArgument", "null argument");
    }
    *out = nullptr;
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        return fail(SM_ERR_IO, "IoError", std::string("cannot read config '") + path + "'");
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return sm_config_parse(ss.str().c_str(), kind, out);
}

SM_API void sm_config_free(sm_config *config) {
    delete config;
}

SM_API sm_status sm_config_emit(sm_config *config, const char **out) {
    if (!config || !out) {
        return fail(SM_ERR_INVALID_ARGUMENT, "InvalidArgument", "null argument");
    }
    return guarded([&] {
        config->emitted = sideband::emit_config(config->config);
        *out = config->emitted.c_str();
    });
}

SM_API sm_status sm_config_hash(sm_config *config, const char **out) {
    if (!config || !out) {
        return fail(SM_ERR_INVALID_ARGUMENT, "InvalidArgument", "null argument");
    }
    return guarded([&] {
        config->hash = sideband::config_hash(config->config);
        *out = config->hash.c_str();
    });
}

SM_API sm_status sm_config_kind(const sm_config *config, const char **out) {
    if (!config || !out) {
        return fail(SM_ERR_INVALID_ARGUMENT, "InvalidArgument", "null argument");
    }
    *out = sideband::kind_name(config->config.kind);
    return SM_OK;
}

SM_API sm_status sm_run(const sm_config *config, size_t threads, sm_result **out) {
    if (!config || !out) {
        return fail(SM_ERR_INVALID_ARGUMENT, "InvalidArgument", "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        auto res = std::make_unique<sm_result>();
        res->result = sideband::run(config->config, threads == 0 ? 1 : threads);
        res->manifest = res->result.manifest.dump(2);
        *out = res.release();
    });
}

SM_API void sm_result_free(sm_result *result) {
    delete result;
}

SM_API size_t sm_result_rows(const sm_result *result) {
    return result ? result->result.rows() : 0;
}

SM_API size_t sm_result_cols(const sm_result *result) {
    return result ? result->result.columns.size() : 0;
}

SM_API const char *sm_result_column_name(const sm_result *result, size_t col) {
    if (!result || col >= result->result.columns.size()) {
        return nullptr;
    }
    return result->result.columns[col].c_str();
}

SM_API double sm_result_value(const sm_result *result, size_t row, size_t col) {
    if (!result || row >= result->result.rows() || col >= result->result.columns.size()) {
        return 0.0;
    }
    return result->result.at(row, col);
}

SM_API const char *sm_result_manifest_json(const sm_result *result) {
    return result ? result->manifest.c_str() : nullptr;
}

SM_API sm_status sm_result_write(sm_result *result, const sm_config *config, const char *path, const char *format,
                                 const char **written_path) {
    if (!result || !config) {
        return fail(SM_ERR_INVALID_ARGUMENT, "InvalidArgument", "null argument");
    }
    return guarded([&] {
        if (format && std::string(format) != "csv" && std::string(format) != "json") {
            throw sideband::SchemaError(std::string("unknown output format '") + format + "'");
        }
        result->written_path =
            sideband::write_outputs(result->result, config->config, path ? path : "", format ? format : "");
        if (written_path) {
            *written_path = result->written_path.c_str();
        }
    });
}

}  // extern "C"
