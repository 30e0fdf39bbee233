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

#include <openssl/evp.h>

#include <cstdio>
#include <string>

#include "sideband/errors.hpp"
#include "sideband/sweeps.hpp"

namespace sideband {

std::string sha256_hex(const std::string &data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw IoError("sha256 failed");
    }
    std::string out;
    out.reserve(2 * len);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        out += buf;
    }
    return out;
}

std::string cell_fingerprint(const EmitterParams &params, const ModulationProgram &prog,
                             std::span<const double> omega_s, const PipelineOptions &opts) {
    std::string s;
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g;", v);
        s += buf;
    };
    put(params.gamma);
    put(params.gamma_pd);
    put(params.rabi);
    put(params.laser_detuning);
    put(prog.base_omega());
    for (const auto &t : prog.tones()) {
        put(t.omega);
        put(t.amp);
        put(t.phase);
    }
    s += "|";
    put(static_cast<double>(opts.n_t));
    put(static_cast<double>(opts.steps_per_period));
    put(opts.tau_max);
    put(opts.filter.delta_e);
    s += "|";
    put(static_cast<double>(omega_s.size()));
    for (double w : omega_s) {
        put(w);
    }
    return sha256_hex(s);
}

}  // namespace sideband
