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

#include "sideband/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "parallel.hpp"
#include "sideband/correlations.hpp"
#include "sideband/errors.hpp"

namespace sideband {

void PipelineDiagnostics::merge(const PipelineDiagnostics &o) {
    cycle_residual = std::max(cycle_residual, o.cycle_residual);
    doubling_error = std::max(doubling_error, o.doubling_error);
    substeps = std::max(substeps, o.substeps);
    periods = std::max(periods, o.periods);
    tail_residual = std::max(tail_residual, o.tail_residual);
    tau_max = std::max(tau_max, o.tau_max);
    harmonics_retained = std::max(harmonics_retained, o.harmonics_retained);
    max_harmonic = std::max(max_harmonic, o.max_harmonic);
    harmonic_cut = o.harmonic_cut;
    evaluations += o.evaluations;
}

Spectrum simulate_spectrum(const EmitterParams &params, const ModulationProgram &prog,
                           std::span<const double> omega_s, const PipelineOptions &opts, PipelineDiagnostics *diag) {
    params.validate();
    opts.filter.validate();
    CycleOptions copts;
    copts.steps_per_period = opts.steps_per_period;
    PeriodicState cyc = limit_cycle(params, prog, opts.n_t, copts);
    double tau = opts.tau_max > 0 ? opts.tau_max : default_tau_max(params, opts.filter);
    CorrelationOptions gopts;
    gopts.threads = opts.threads;
    CorrelationGrid g = g1(cyc, tau, gopts);
    Spectrum spec = spectrum_floquet(g, opts.filter, omega_s);
    if (diag) {
        PipelineDiagnostics d;
        d.cycle_residual = cyc.residual;
        d.doubling_error = cyc.doubling_error;
        d.substeps = cyc.substeps;
        d.periods = cyc.periods;
        d.tail_residual = g.tail_residual;
        d.tau_max = g.tau_max();
        d.harmonics_retained = spec.diagnostics.harmonics_retained;
        d.max_harmonic = spec.diagnostics.max_harmonic;
        d.harmonic_cut = spec.diagnostics.harmonic_cut;
        d.evaluations = 1;
        *diag = d;
    }
    return spec;
}

std::vector<double> symmetric_grid(double half_span, double step) {
    if (!(step > 0) || !(half_span >= 0)) {
        throw UnitError("grid step must be positive and span non-negative");
    }
    auto k = static_cast<long>(std::floor(half_span / step + 1e-9));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(2 * k + 1));
    for (long i = -k; i <= k; ++i) {
        out.push_back(step * static_cast<double>(i));
    }
    return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

std::vector<double> SweepMap::trace(std::size_t iy) const {
    std::vector<double> out(x.size());
    for (std::size_t ix = 0; ix < x.size(); ++ix) {
        out[ix] = value(ix, iy);
    }
    return out;
}

std::size_t SweepMap::nearest_y(double v) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (std::abs(y[i] - v) < std::abs(y[best] - v)) {
            best = i;
        }
    }
    return best;
}

namespace {

void require_two_tones(const ModulationProgram &prog) {
    if (prog.size() != 2) {
        throw UnitError("phase sweeps need a two-tone program");
    }
}

struct Cell {
    Spectrum spec;
    PipelineDiagnostics diag;
    std::string hash;
};

Cell run_cell(const EmitterParams &params, const ModulationProgram &prog, std::span<const double> omega_s,
              const PipelineOptions &opts) {
    Cell c;
    PipelineOptions inner = opts;
    inner.threads = 1;
    c.spec = simulate_spectrum(params, prog, omega_s, inner, &c.diag);
    c.hash = cell_fingerprint(params, prog, omega_s, inner);
    return c;
}

SweepMap assemble(std::string x_name, std::string y_name, std::vector<double> x, std::vector<double> y,
                  std::vector<double> raw, std::vector<Cell> &cells) {
    SweepMap map;
    map.x_name = std::move(x_name);
    map.y_name = std::move(y_name);
    map.x = std::move(x);
    map.y = std::move(y);
    map.values = std::move(raw);
    for (double v : map.values) {
        map.raw_max = std::max(map.raw_max, v);
    }
    if (map.raw_max > 0) {
        for (double &v : map.values) {
            v /= map.raw_max;
        }
    }
    for (auto &c : cells) {
        map.cell_hash.push_back(c.hash);
        map.diagnostics.merge(c.diag);
    }
    return map;
}

// Intensity at a single shift for phase `phase` of the higher tone.
double intensity_at(const EmitterParams &params, const ModulationProgram &prog, double phase, double omega_s,
                    const PipelineOptions &opts) {
    ModulationProgram p = prog.with_phase(prog.highest_tone(), phase);
    double w[1] = {omega_s};
    return simulate_spectrum(params, p, w, opts).intensity[0];
}

}  // namespace

SweepMap phase_sweep(const EmitterParams &params, const ModulationProgram &prog, std::span<const double> phi_grid,
                     std::span<const double> omega_s, const PipelineOptions &opts, double phase_offset) {
    require_two_tones(prog);
    const std::size_t hi = prog.highest_tone();
    std::vector<Cell> cells(phi_grid.size());
    detail::parallel_for(phi_grid.size(), opts.threads, [&](std::size_t i) {
        cells[i] = run_cell(params, prog.with_phase(hi, phi_grid[i] + phase_offset), omega_s, opts);
    });
    std::vector<double> raw;
    raw.reserve(phi_grid.size() * omega_s.size());
    for (const auto &c : cells) {
        raw.insert(raw.end(), c.spec.intensity.begin(), c.spec.intensity.end());
    }
    return assemble("phi_rad", "omega_s", {phi_grid.begin(), phi_grid.end()}, {omega_s.begin(), omega_s.end()},
                    std::move(raw), cells);
}

double calibrate_phase_offset(const EmitterParams &params, const ModulationProgram &prog,
                              const PipelineOptions &opts) {
    if (prog.size() != 2) {
        throw FlatResponse("calibration needs two tones; a single tone has no phase dependence");
    }
    const std::size_t hi = prog.highest_tone();
    const double start = prog.tones()[hi].phase;
    const double target = params.laser_detuning + prog.base_omega();
    PipelineOptions inner = opts;
    inner.threads = 1;
    auto f = [&](double off) { return intensity_at(params, prog, start + off, target, inner); };

    const std::size_t coarse = 32;
    std::vector<double> vals(coarse);
    detail::parallel_for(coarse, opts.threads, [&](std::size_t i) {
        vals[i] = f(kTwoPi * static_cast<double>(i) / static_cast<double>(coarse));
    });
    auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
    if (!(*mx > 0) || (*mx - *mn) < 0.01 * *mx) {
        throw FlatResponse("+1 sideband phase contrast below 1%");
    }
    const double step = kTwoPi / static_cast<double>(coarse);
    double a = step * static_cast<double>(mx - vals.begin()) - step;
    double b = a + 2.0 * step;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-7) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    double off = wrap_phase(0.5 * (a + b));
    if (off > kPi) {
        off -= kTwoPi;
    }
    return off;
}

SweepMap detuning_time_map(const EmitterParams &params, const ModulationProgram &prog, std::span<const double> dw,
                           std::span<const double> t_hours, double omega_s, const PipelineOptions &opts,
                           double phi0) {
    require_two_tones(prog);
    const std::size_t hi = prog.highest_tone();
    const std::size_t nt = t_hours.size();
    const std::size_t nd = dw.size();
    // Phases are wrapped before lookup so that equal phases share one evaluation.
    std::map<double, std::size_t> slot;
    std::vector<double> phases;
    std::vector<std::size_t> index(nt * nd);
    for (std::size_t it = 0; it < nt; ++it) {
        for (std::size_t id = 0; id < nd; ++id) {
            double ph = wrap_phase(phi0 + dw[id] * t_hours[it] * 3600.0);
            auto [pos, fresh] = slot.emplace(ph, phases.size());
            if (fresh) {
                phases.push_back(ph);
            }
            index[it * nd + id] = pos->second;
        }
    }
    const double w[1] = {omega_s};
    std::vector<Cell> cells(phases.size());
    detail::parallel_for(phases.size(), opts.threads,
                         [&](std::size_t i) { cells[i] = run_cell(params, prog.with_phase(hi, phases[i]), w, opts); });
    std::vector<double> raw(nt * nd);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        raw[i] = cells[index[i]].spec.intensity[0];
    }
    SweepMap map = assemble("t_hours", "dw", {t_hours.begin(), t_hours.end()}, {dw.begin(), dw.end()},
                            std::move(raw), cells);
    // One hash per time column: that of its first detuning row.
    std::vector<std::string> col_hash(nt);
    for (std::size_t it = 0; it < nt; ++it) {
        col_hash[it] = cells[index[it * nd]].hash;
    }
    map.cell_hash = std::move(col_hash);
    return map;
}

SweepMap frequency_fan(const EmitterParams &params, double D, std::span<const double> omega_saw,
                       std::span<const double> omega_s, const PipelineOptions &opts, bool scale_d,
                       double reference_omega) {
    if (scale_d && !(reference_omega > 0)) {
        throw UnitError("scaled fan needs a positive reference frequency");
    }
    std::vector<Cell> cells(omega_saw.size());
    detail::parallel_for(omega_saw.size(), opts.threads, [&](std::size_t i) {
        double w = omega_saw[i];
        double d = scale_d ? D * reference_omega / w : D;
        cells[i] = run_cell(params, single_tone(w, d), omega_s, opts);
    });
    std::vector<double> raw;
    raw.reserve(omega_saw.size() * omega_s.size());
    for (const auto &c : cells) {
        raw.insert(raw.end(), c.spec.intensity.begin(), c.spec.intensity.end());
    }
    return assemble("omega_saw", "omega_s", {omega_saw.begin(), omega_saw.end()}, {omega_s.begin(), omega_s.end()},
                    std::move(raw), cells);
}

}  // namespace sideband
