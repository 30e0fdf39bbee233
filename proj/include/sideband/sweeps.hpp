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

#ifndef SIDEBAND_SWEEPS_HPP
#define SIDEBAND_SWEEPS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sideband/dynamics.hpp"
#include "sideband/model.hpp"
#include "sideband/spectrum.hpp"

namespace sideband {

struct PipelineOptions {
    std::size_t n_t = 256;
    std::size_t steps_per_period = 512;
    double tau_max = 0.0;  // 0: default_tau_max
    FilterSpec filter;
    std::size_t threads = 1;
};

/// Worst-case numerical diagnostics over one or many pipeline evaluations.
struct PipelineDiagnostics {
    double cycle_residual = 0.0;
    double doubling_error = 0.0;
    std::size_t substeps = 0;
    std::size_t periods = 0;
    double tail_residual = 0.0;
    double tau_max = 0.0;
    std::size_t harmonics_retained = 0;
    int max_harmonic = 0;
    double harmonic_cut = 1e-10;
    std::size_t evaluations = 0;

    void merge(const PipelineDiagnostics &other);
};

/// limit_cycle -> g1 -> spectrum_floquet.
Spectrum simulate_spectrum(const EmitterParams &params, const ModulationProgram &prog,
                           std::span<const double> omega_s, const PipelineOptions &opts,
                           PipelineDiagnostics *diag = nullptr);

/// k * step for integer k with |k * step| <= half_span.
std::vector<double> symmetric_grid(double half_span, double step);
/// n points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

/// Intensity map; values are stored x-major: value(ix, iy) = values[ix * y.size() + iy].
struct SweepMap {
    std::string x_name;
    std::string y_name;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> values;
    double raw_max = 0.0;
    std::string normalization = "global-max";
    std::vector<std::string> cell_hash;  // one per x column
    PipelineDiagnostics diagnostics;

    double value(std::size_t ix, std::size_t iy) const {
        return values[ix * y.size() + iy];
    }
    /// The column of values along x at y index iy.
    std::vector<double> trace(std::size_t iy) const;
    /// Index of the y value closest to v.
    std::size_t nearest_y(double v) const;
};

/// Spectra for each phase phi of the higher-frequency tone (internal phase =
/// phi + phase_offset). x = phi (rad), y = omega_s (rad/s).
SweepMap phase_sweep(const EmitterParams &params, const ModulationProgram &prog, std::span<const double> phi_grid,
                     std::span<const double> omega_s, const PipelineOptions &opts, double phase_offset = 0.0);

/// Offset to add to the higher tone's current phase so that the +1
/// sideband (laser_detuning + base_omega) is brightest. Result in (-pi, pi].
/// Throws FlatResponse when the phi contrast is below 1% or there is no second tone.
double calibrate_phase_offset(const EmitterParams &params, const ModulationProgram &prog,
                              const PipelineOptions &opts);

/// Quasi-static detuning of the higher tone: I(t, dw) = I(phi0 + dw t) at one
/// omega_s. x = t (hours), y = dw (rad/s).
SweepMap detuning_time_map(const EmitterParams &params, const ModulationProgram &prog, std::span<const double> dw,
                           std::span<const double> t_hours, double omega_s, const PipelineOptions &opts,
                           double phi0 = 0.0);

/// Single-tone spectra across tone frequencies. With scale_d the index at
/// frequency w is D * reference_omega / w. x = omega_saw (rad/s), y = omega_s.
SweepMap frequency_fan(const EmitterParams &params, double D, std::span<const double> omega_saw,
                       std::span<const double> omega_s, const PipelineOptions &opts, bool scale_d = false,
                       double reference_omega = 0.0);

/// Deterministic fingerprint of one pipeline evaluation.
std::string cell_fingerprint(const EmitterParams &params, const ModulationProgram &prog,
                             std::span<const double> omega_s, const PipelineOptions &opts);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string &data);

}  // namespace sideband

#endif
