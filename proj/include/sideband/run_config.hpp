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

#ifndef SIDEBAND_RUN_CONFIG_HPP
#define SIDEBAND_RUN_CONFIG_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sideband/model.hpp"

namespace sideband {

enum class RunKind { kSpectrum, kG2, kPhaseSweep, kDetuningMap, kFan, kPathways };

const char *kind_name(RunKind kind);
/// Throws SchemaError for unknown names.
RunKind kind_from_name(const std::string &name);

struct ToneSpec {
    double freq_GHz = 0.0;
    std::optional<double> D;
    std::optional<double> delta_GHz;
    double phase_rad = 0.0;
    bool operator==(const ToneSpec &) const = default;
};

struct GridSpec {
    double omega_s_span_GHz = 0.0;  // half width of the omega_s grid
    double omega_s_step_GHz = 0.0;
    int phi_points = 64;
    std::optional<double> tau_max_ns;
    int steps_per_period = 512;
    int n_t = 256;
    bool operator==(const GridSpec &) const = default;
};

struct OutputSpec {
    std::string path;
    std::string format = "csv";
    bool normalize = false;
    bool operator==(const OutputSpec &) const = default;
};

struct SweepSpec {
    bool calibrate = true;
    double phi_span_rad = kTwoPi;
    bool operator==(const SweepSpec &) const = default;
};

struct DetuningSpec {
    std::vector<double> dw_Hz;
    double t_start_hours = 0.0;
    double t_stop_hours = 12.0;
    int t_points = 121;
    double omega_s_GHz = 0.0;
    double phi0_rad = 0.0;
    bool calibrate = true;
    bool operator==(const DetuningSpec &) const = default;
};

struct FanSpec {
    std::vector<double> freqs_GHz;
    double D = 0.0;
    bool scale_D = false;
    double reference_GHz = 0.0;
    bool operator==(const FanSpec &) const = default;
};

struct PathwaysSpec {
    int m_min = -2;
    int m_max = 2;
    int p = 1;
    int q = 2;
    int max_order = 5;
    bool operator==(const PathwaysSpec &) const = default;
};

struct G2Spec {
    double tau_max_ns = 0.0;
    std::optional<double> irf_ps;
    std::string normalization = "mean-squared";
    bool operator==(const G2Spec &) const = default;
};

/// Fully resolved run description. Frequencies are ordinary frequencies in GHz.
struct RunConfig {
    int schema_version = 1;
    RunKind kind = RunKind::kSpectrum;
    double gamma_GHz = 0.0;
    double gamma_pd_GHz = 0.0;
    double rabi_GHz = 0.0;
    double laser_detuning = 0.0;
    std::string laser_detuning_units = "GHz";
    std::vector<ToneSpec> tones;
    double base_freq_GHz = 0.0;
    double filter_GHz = 0.41;
    GridSpec grids;
    OutputSpec output;
    std::optional<SweepSpec> sweep;
    std::optional<DetuningSpec> detuning;
    std::optional<FanSpec> fan;
    std::optional<PathwaysSpec> pathways;
    std::optional<G2Spec> g2;

    bool operator==(const RunConfig &) const = default;
};

/// Parses and validates JSON text, applying defaults. Unknown keys raise
/// SchemaError naming the key path; negative rates raise UnitError;
/// incommensurate tones raise CommensurabilityError. `kind_override`, when
/// given, sets the kind (an explicit, different "kind" key is an error).
RunConfig parse_config(const std::string &text, std::optional<RunKind> kind_override = std::nullopt);

/// Canonical JSON of a resolved config; parse_config(emit_config(c)) == c.
nlohmann::json emit_config_json(const RunConfig &config);
std::string emit_config(const RunConfig &config);

/// SHA-256 of the canonical text.
std::string config_hash(const RunConfig &config);

/// Physical inputs derived from a config.
EmitterParams emitter_from_config(const RunConfig &config);
ModulationProgram program_from_config(const RunConfig &config);

/// Tabular result plus manifest.
struct RunResult {
    std::vector<std::string> columns;
    std::vector<double> data;  // row-major
    nlohmann::json manifest;

    std::size_t rows() const {
        return columns.empty() ? 0 : data.size() / columns.size();
    }
    double at(std::size_t row, std::size_t col) const {
        return data[row * columns.size() + col];
    }
};

/// Executes the configured computation.
RunResult run(const RunConfig &config, std::size_t threads = 1);

/// Data file text in the configured format.
std::string format_result(const RunResult &result, const std::string &format, RunKind kind);

/// Writes text to a sibling temporary file, then renames it over path.
/// Throws IoError; never leaves a partial file at path.
void write_file_atomic(const std::string &path, const std::string &content);

/// Manifest path for a data path.
std::string manifest_path(const std::string &data_path);

/// Writes data and manifest atomically; returns the data path used.
std::string write_outputs(const RunResult &result, const RunConfig &config, const std::string &path_override = "",
                          const std::string &format_override = "");

const char *version();

}  // namespace sideband

#endif
