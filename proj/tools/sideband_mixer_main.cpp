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

#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "sideband_mixer.h"

namespace {

std::string json_escape(const std::string &s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '"':
                out += "\\\"";
                break;
            case '\\':
                out += "\\\\";
                break;
            case '\n':
                out += "\\n";
                break;
            case '\t':
                out += "\\t";
                break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

// One line on stderr, exit code = status.
int report(sm_status st) {
    std::fprintf(stderr, "{\"error\":\"%s\",\"code\":%d,\"message\":\"%s\"}\n",
                 json_escape(sm_last_error_name()).c_str(), static_cast<int>(st),
                 json_escape(sm_last_error()).c_str());
    return static_cast<int>(st);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Resonance-fluorescence spectra of a two-level emitter under one or two modulation tones"};
    app.set_version_flag("--version", std::string(sm_version()));

    std::string kind;
    std::string config_path;
    std::string out_path;
    std::string format;
    std::size_t threads = 0;
    app.add_option("kind", kind, "spectrum | g2 | phase-sweep | detuning-map | fan | pathways")
        ->required()
        ->check(CLI::IsMember({"spectrum", "g2", "phase-sweep", "detuning-map", "fan", "pathways"}));
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_path, "output data path (overrides output.path)");
    app.add_option("--threads", threads, "worker threads (default: $SIDEBAND_MIXER_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", format, "csv or json (overrides output.format)")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (threads == 0) {
        if (const char *env = std::getenv("SIDEBAND_MIXER_THREADS")) {
            char *end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && *end == '\0' && v > 0) {
                threads = static_cast<std::size_t>(v);
            }
        }
    }
    if (threads == 0) {
        threads = 1;
    }

    sm_config *cfg = nullptr;
    sm_status st = sm_config_load(config_path.c_str(), kind.c_str(), &cfg);
    if (st != SM_OK) {
        return report(st);
    }
    sm_result *res = nullptr;
    st = sm_run(cfg, threads, &res);
    if (st != SM_OK) {
        sm_config_free(cfg);
        return report(st);
    }
    const char *written = nullptr;
    st = sm_result_write(res, cfg, out_path.empty() ? nullptr : out_path.c_str(),
                         format.empty() ? nullptr : format.c_str(), &written);
    if (st == SM_OK) {
        std::printf("%s\n", written);
    }
    sm_result_free(res);
    sm_config_free(cfg);
    return st == SM_OK ? 0 : report(st);
}
