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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "sideband/errors.hpp"
#include "sideband/sweeps.hpp"

using namespace sideband;

namespace {

const double kW = angular_from_ghz(1.0);

EmitterParams emitter() {
    EmitterParams e;
    e.gamma = 0.25 * kW;
    e.rabi = 0.5 * e.gamma;
    return e;
}

PipelineOptions fast_opts() {
    PipelineOptions o;
    o.n_t = 64;
    o.steps_per_period = 128;
    return o;
}

ModulationProgram mixer(double phi = 0.0) {
    return two_tone(kW, 1, 1.2, 2, 1.5, phi);
}

}  // namespace

TEST(sweeps, phase_columns_repeat_after_two_pi) {
    std::vector<double> phi = {0.3, 0.3 + kTwoPi, 1.7, 1.7 - kTwoPi};
    std::vector<double> ws = {-kW, 0.0, kW, 2 * kW};
    auto map = phase_sweep(emitter(), mixer(), phi, ws, fast_opts());
    for (std::size_t iy = 0; iy < ws.size(); ++iy) {
        EXPECT_NEAR(map.value(0, iy), map.value(1, iy), 1e-6);
        EXPECT_NEAR(map.value(2, iy), map.value(3, iy), 1e-6);
    }
    EXPECT_NE(map.cell_hash[0], map.cell_hash[2]);
}

TEST(sweeps, map_normalized_to_global_max) {
    std::vector<double> phi = {0.0, 1.0, 2.0};
    auto ws = symmetric_grid(2 * kW, kW / 8);
    auto map = phase_sweep(emitter(), mixer(), phi, ws, fast_opts());
    EXPECT_EQ(map.normalization, "global-max");
    EXPECT_DOUBLE_EQ(*std::max_element(map.values.begin(), map.values.end()), 1.0);
    EXPECT_GT(map.raw_max, 0.0);
}

TEST(sweeps, sweep_is_deterministic_across_threads) {
    std::vector<double> phi = {0.0, 0.8, 1.6, 2.4};
    std::vector<double> ws = {0.0, kW};
    auto o1 = fast_opts();
    auto o3 = o1;
    o3.threads = 3;
    auto a = phase_sweep(emitter(), mixer(), phi, ws, o1);
    auto b = phase_sweep(emitter(), mixer(), phi, ws, o3);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.cell_hash, b.cell_hash);
}

TEST(sweeps, calibration_rejects_single_tone) {
    EXPECT_THROW(calibrate_phase_offset(emitter(), single_tone(kW, 1.0), fast_opts()), FlatResponse);
}

TEST(sweeps, calibration_is_idempotent) {
    auto e = emitter();
    auto prog = mixer(0.4);
    double off = calibrate_phase_offset(e, prog, fast_opts());
    EXPECT_GT(off, -kPi);
    EXPECT_LE(off, kPi);
    auto shifted = prog.with_phase(prog.highest_tone(), prog.tones()[prog.highest_tone()].phase + off);
    double again = calibrate_phase_offset(e, shifted, fast_opts());
    EXPECT_NEAR(again, 0.0, 1e-3);
}

TEST(sweeps, detuning_map_without_detuning_is_constant_in_time) {
    std::vector<double> dw = {0.0, kTwoPi * 50e-6};
    auto t = linear_grid(0.0, 12.0, 7);
    auto map = detuning_time_map(emitter(), mixer(), dw, t, kW, fast_opts(), 0.3);
    for (std::size_t it = 1; it < t.size(); ++it) {
        EXPECT_DOUBLE_EQ(map.value(it, 0), map.value(0, 0));
    }
    double lo = 1e300, hi = -1e300;
    for (std::size_t it = 0; it < t.size(); ++it) {
        lo = std::min(lo, map.value(it, 1));
        hi = std::max(hi, map.value(it, 1));
    }
    EXPECT_GT(hi - lo, 1e-3);
}

TEST(sweeps, detuning_map_matches_resampled_phase_sweep) {
    const double dw = kTwoPi * 50e-6;
    std::vector<double> dws = {dw};
    auto t = linear_grid(0.0, 6.0, 5);
    const double phi0 = 0.2;
    auto map = detuning_time_map(emitter(), mixer(), dws, t, kW, fast_opts(), phi0);
    std::vector<double> phi;
    for (double th : t) phi.push_back(phi0 + dw * th * 3600.0);
    std::vector<double> ws = {kW};
    auto ps = phase_sweep(emitter(), mixer(), phi, ws, fast_opts());
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_NEAR(map.value(i, 0) * map.raw_max, ps.value(i, 0) * ps.raw_max, 1e-9 * ps.raw_max);
    }
}

TEST(sweeps, anticorrelation_sign_survives_phase_origin) {
    auto ws = std::vector<double>{-kW, kW};
    auto phi = linear_grid(0.0, kTwoPi, 17);
    phi.pop_back();
    auto e = emitter();
    e.rabi = 0.05 * e.gamma;
    double r0 = 0, r1 = 0;
    for (double origin : {0.0, 1.1}) {
        auto m = phase_sweep(e, mixer(), phi, ws, fast_opts(), origin);
        double r = oracle::pearson(m.trace(0), m.trace(1));
        (origin == 0.0 ? r0 : r1) = r;
    }
    EXPECT_NEAR(r0, r1, 1e-6);
}

TEST(sweeps, fan_tracks_tone_frequency) {
    auto e = emitter();
    e.gamma = 0.1 * kW;
    e.rabi = 0.5 * e.gamma;
    std::vector<double> saw = {0.8 * kW, kW, 1.2 * kW};
    auto ws = symmetric_grid(3 * kW, kW / 40);
    auto opts = fast_opts();
    opts.filter.delta_e = 0.1 * kW;
    auto fan = frequency_fan(e, 1.0, saw, ws, opts);
    for (std::size_t ix = 0; ix < saw.size(); ++ix) {
        Spectrum s;
        s.omega_s = ws;
        s.intensity.assign(fan.values.begin() + ix * ws.size(), fan.values.begin() + (ix + 1) * ws.size());
        auto peaks = find_psb_peaks(s, saw[ix], 0.05);
        bool found = false;
        for (const auto &p : peaks) {
            if (p.m == 1) {
                EXPECT_NEAR(p.omega_s, saw[ix], 0.1 * saw[ix]);
                found = true;
            }
        }
        EXPECT_TRUE(found) << ix;
    }
}

TEST(sweeps, fan_without_modulation_has_only_zero_phonon_line) {
    auto e = emitter();
    std::vector<double> saw = {kW};
    auto ws = symmetric_grid(3 * kW, kW / 16);
    auto fan = frequency_fan(e, 0.0, saw, ws, fast_opts());
    std::size_t argmax = 0;
    int local_max = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (fan.values[i] > fan.values[argmax]) argmax = i;
        if (i > 0 && i + 1 < ws.size() && fan.values[i] > fan.values[i - 1] && fan.values[i] > fan.values[i + 1] &&
            fan.values[i] > 1e-3) {
            ++local_max;
        }
    }
    EXPECT_EQ(ws[argmax], 0.0);
    EXPECT_EQ(local_max, 1);
}

TEST(sweeps, scaled_fan_needs_reference) {
    std::vector<double> saw = {kW};
    std::vector<double> ws = {0.0};
    EXPECT_THROW(frequency_fan(emitter(), 1.0, saw, ws, fast_opts(), true, 0.0), UnitError);
}

TEST(sweeps, fingerprint_is_sha256) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
