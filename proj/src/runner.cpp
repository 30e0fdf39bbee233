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

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "sideband/correlations.hpp"
#include "sideband/dynamics.hpp"
#include "sideband/errors.hpp"
#include "sideband/pathways.hpp"
#include "sideband/run_config.hpp"
#include "sideband/spectrum.hpp"
#include "sideband/sweeps.hpp"

#ifndef SIDEBAND_VERSION
#define SIDEBAND_VERSION "0.0.0"
#endif

namespace sideband {

using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

PipelineOptions pipeline_options(const RunConfig &c, std::size_t threads) {
    PipelineOptions o;
    o.n_t = static_cast<std::size_t>(c.grids.n_t);
    o.steps_per_period = static_cast<std::size_t>(c.grids.steps_per_period);
    o.tau_max = c.grids.tau_max_ns ? *c.grids.tau_max_ns * 1e-9 : 0.0;
    o.filter.delta_e = angular_from_ghz(c.filter_GHz);
    o.threads = std::max<std::size_t>(1, threads);
    return o;
}

std::vector<double> omega_grid(const RunConfig &c) {
    return symmetric_grid(angular_from_ghz(c.grids.omega_s_span_GHz), angular_from_ghz(c.grids.omega_s_step_GHz));
}

json diagnostics_json(const PipelineDiagnostics &d) {
    return {{"limit_cycle_residual", d.cycle_residual},
            {"step_doubling_error", d.doubling_error},
            {"rk4_substeps_per_interval", d.substeps},
            {"periods_iterated", d.periods},
            {"g1_tail_residual", d.tail_residual},
            {"tau_max_ns", d.tau_max * 1e9},
            {"harmonics_retained", d.harmonics_retained},
            {"max_harmonic", d.max_harmonic},
            {"harmonic_cut", d.harmonic_cut},
            {"pipeline_evaluations", d.evaluations}};
}

json tolerances_json(const RunConfig &c) {
    return {{"limit_cycle_trace_distance", 1e-10},
            {"max_periods", 10000},
            {"step_doubling", 1e-8},
            {"max_doublings", 8},
            {"g1_tail", 1e-6},
            {"harmonic_cut", 1e-10},
            {"steps_per_period", c.grids.steps_per_period},
            {"N_t", c.grids.n_t},
            {"tau_max_ns", c.grids.tau_max_ns ? json(*c.grids.tau_max_ns) : json("auto")},
            {"filter_GHz", c.filter_GHz},
            {"calibration_contrast_min", 0.01},
            {"calibration_phase_tolerance_rad", 1e-7}};
}

void add_map(RunResult &r, const SweepMap &map, double x_scale, double y_scale) {
    for (std::size_t ix = 0; ix < map.x.size(); ++ix) {
        for (std::size_t iy = 0; iy < map.y.size(); ++iy) {
            r.data.push_back(map.x[ix] * x_scale);
            r.data.push_back(map.y[iy] * y_scale);
            r.data.push_back(map.value(ix, iy));
        }
    }
    r.manifest["normalization"] = map.normalization;
    r.manifest["raw_max"] = map.raw_max;
    r.manifest["cell_hashes"] = map.cell_hash;
    r.manifest["diagnostics"] = diagnostics_json(map.diagnostics);
}

}  // namespace

const char *version() {
    return SIDEBAND_VERSION;
}

RunResult run(const RunConfig &c, std::size_t threads) {
    auto start = std::chrono::steady_clock::now();
    RunResult r;
    r.manifest["version"] = version();
    r.manifest["kind"] = kind_name(c.kind);
    r.manifest["config_hash"] = config_hash(c);
    r.manifest["resolved_config"] = emit_config_json(c);
    r.manifest["tolerances"] = tolerances_json(c);
    r.manifest["threads"] = threads;
    const double to_ghz = 1.0 / angular_from_ghz(1.0);

    if (c.kind == RunKind::kPathways) {
        const auto &p = *c.pathways;
        r.columns = {"m", "net1", "net2", "loops1", "loops2", "order", "phase_multiplier"};
        for (int m = p.m_min; m <= p.m_max; ++m) {
            for (const auto &pr : enumerate_processes(m, p.p, p.q, p.max_order)) {
                for (int v : {m, pr.net1, pr.net2, pr.loops1, pr.loops2, pr.order, pr.phase_multiplier}) {
                    r.data.push_back(v);
                }
            }
        }
        r.manifest["tolerances"] = {{"max_order", p.max_order}};
    } else {
        const EmitterParams params = emitter_from_config(c);
        const ModulationProgram prog = program_from_config(c);
        const PipelineOptions opts = pipeline_options(c, threads);
        switch (c.kind) {
            case RunKind::kSpectrum: {
                std::vector<double> grid = omega_grid(c);
                PipelineDiagnostics d;
                Spectrum s = simulate_spectrum(params, prog, grid, opts, &d);
                if (c.output.normalize) {
                    s = s.normalized();
                }
                r.columns = {"omega_s_GHz", "intensity"};
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    r.data.push_back(grid[i] * to_ghz);
                    r.data.push_back(s.intensity[i]);
                }
                r.manifest["normalization"] = c.output.normalize ? "max1" : "raw";
                r.manifest["diagnostics"] = diagnostics_json(d);
                json lines = json::array();
                for (const auto &l : s.lines) {
                    if (l.weight > 1e-14) {
                        lines.push_back({{"n", l.n}, {"omega_s_GHz", l.omega_s * to_ghz}, {"weight", l.weight}});
                    }
                }
                r.manifest["coherent_lines"] = lines;
                break;
            }
            case RunKind::kG2: {
                CycleOptions copts;
                copts.steps_per_period = opts.steps_per_period;
                PeriodicState cyc = limit_cycle(params, prog, opts.n_t, copts);
                G2Normalization norm = c.g2->normalization == "mean-squared" ? G2Normalization::kMeanSquared
                                                                             : G2Normalization::kStationaryProduct;
                CorrelationOptions gopts;
                gopts.threads = opts.threads;
                G2Curve curve = g2_normalized(cyc, c.g2->tau_max_ns * 1e-9, norm, gopts);
                if (c.g2->irf_ps) {
                    curve = convolve_gaussian_irf(curve, *c.g2->irf_ps * 1e-12);
                }
                r.columns = {"tau_ns", "g2"};
                for (std::size_t i = 0; i < curve.tau.size(); ++i) {
                    r.data.push_back(curve.tau[i] * 1e9);
                    r.data.push_back(curve.g2[i]);
                }
                PipelineDiagnostics d;
                d.cycle_residual = cyc.residual;
                d.doubling_error = cyc.doubling_error;
                d.substeps = cyc.substeps;
                d.periods = cyc.periods;
                d.tau_max = c.g2->tau_max_ns * 1e-9;
                d.evaluations = 1;
                r.manifest["diagnostics"] = diagnostics_json(d);
                r.manifest["normalization"] = c.g2->normalization;
                break;
            }
            case RunKind::kPhaseSweep: {
                std::vector<double> grid = omega_grid(c);
                std::vector<double> phi = linear_grid(0.0, c.sweep->phi_span_rad,
                                                      static_cast<std::size_t>(c.grids.phi_points));
                double offset = 0.0;
                const double current = prog.tones()[prog.highest_tone()].phase;
                if (c.sweep->calibrate) {
                    offset = calibrate_phase_offset(params, prog, opts);
                    r.manifest["phase_offset_rad"] = offset;
                }
                SweepMap map = phase_sweep(params, prog, phi, grid, opts, current + offset);
                r.columns = {"phi_rad", "omega_s_GHz", "intensity"};
                add_map(r, map, 1.0, to_ghz);
                break;
            }
            case RunKind::kDetuningMap: {
                const auto &d = *c.detuning;
                std::vector<double> t = linear_grid(d.t_start_hours, d.t_stop_hours,
                                                    static_cast<std::size_t>(d.t_points));
                std::vector<double> dw;
                for (double v : d.dw_Hz) {
                    dw.push_back(kTwoPi * v);
                }
                double phi0 = prog.tones()[prog.highest_tone()].phase + d.phi0_rad;
                if (d.calibrate) {
                    double offset = calibrate_phase_offset(params, prog, opts);
                    r.manifest["phase_offset_rad"] = offset;
                    phi0 += offset;
                }
                SweepMap map = detuning_time_map(params, prog, dw, t, angular_from_ghz(d.omega_s_GHz), opts, phi0);
                r.columns = {"t_hours", "detuning_Hz", "intensity"};
                add_map(r, map, 1.0, 1.0 / kTwoPi);
                break;
            }
            case RunKind::kFan: {
                const auto &f = *c.fan;
                std::vector<double> grid = omega_grid(c);
                std::vector<double> ws;
                for (double v : f.freqs_GHz) {
                    ws.push_back(angular_from_ghz(v));
                }
                SweepMap map = frequency_fan(params, f.D, ws, grid, opts, f.scale_D, angular_from_ghz(f.reference_GHz));
                r.columns = {"omega_saw_GHz", "omega_s_GHz", "intensity"};
                add_map(r, map, to_ghz, to_ghz);
                break;
            }
            case RunKind::kPathways:
                break;
        }
    }
    std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
    r.manifest["wall_time_s"] = wall.count();
    r.manifest["rows"] = r.rows();
    r.manifest["columns"] = r.columns;
    return r;
}

std::string format_result(const RunResult &result, const std::string &format, RunKind kind) {
    const std::size_t nc = result.columns.size();
    const std::size_t nr = result.rows();
    std::string out;
    if (format == "csv") {
        for (std::size_t j = 0; j < nc; ++j) {
            out += result.columns[j];
            out += j + 1 < nc ? "," : "\n";
        }
        for (std::size_t i = 0; i < nr; ++i) {
            for (std::size_t j = 0; j < nc; ++j) {
                out += num(result.at(i, j));
                out += j + 1 < nc ? "," : "\n";
            }
        }
        return out;
    }
    if (format != "json") {
        throw SchemaError("unknown output format '" + format + "'");
    }
    // Column-oriented JSON; numbers printed like the CSV.
    out = "{\n  \"kind\": \"" + std::string(kind_name(kind)) + "\",\n  \"columns\": {\n";
    for (std::size_t j = 0; j < nc; ++j) {
        out += "    \"" + result.columns[j] + "\": [";
        for (std::size_t i = 0; i < nr; ++i) {
            out += num(result.at(i, j));
            if (i + 1 < nr) {
                out += ", ";
            }
        }
        out += j + 1 < nc ? "],\n" : "]\n";
    }
    out += "  }\n}\n";
    return out;
}

void write_file_atomic(const std::string &path, const std::string &content) {
    static std::atomic<unsigned> counter{0};
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter.fetch_add(1));
    try {
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f) {
                throw IoError("cannot open '" + tmp.string() + "' for writing");
            }
            f.write(content.data(), static_cast<std::streamsize>(content.size()));
            f.flush();
            if (!f) {
                throw IoError("write to '" + tmp.string() + "' failed");
            }
        }
        std::error_code ec;
        fs::rename(tmp, target, ec);
        if (ec) {
            throw IoError("cannot move output into place at '" + path + "': " + ec.message());
        }
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

std::string manifest_path(const std::string &data_path) {
    return data_path + ".manifest.json";
}

std::string write_outputs(const RunResult &result, const RunConfig &config, const std::string &path_override,
                          const std::string &format_override) {
    std::string format = format_override.empty() ? config.output.format : format_override;
    std::string path = path_override.empty() ? config.output.path : path_override;
    if (path.empty()) {
        path = std::string(kind_name(config.kind)) + "." + format;
    }
    std::string data = format_result(result, format, config.kind);
    json manifest = result.manifest;
    manifest["output"] = {{"path", path}, {"format", format}};
    write_file_atomic(path, data);
    write_file_atomic(manifest_path(path), manifest.dump(2) + "\n");
    return path;
}

}  // namespace sideband
