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

// End-to-end acceptance checks. One line per criterion;
// exit status is the number of failures (capped at 1).

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fftw3.h>

#include "oracles.hpp"
#include "sideband/correlations.hpp"
#include "sideband/dynamics.hpp"
#include "sideband/pathways.hpp"
#include "sideband/spectrum.hpp"
#include "sideband/sweeps.hpp"

using namespace sideband;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

EmitterParams emitter(double gamma_ghz, double rabi_over_gamma, double detuning = 0.0) {
    EmitterParams e;
    e.gamma = angular_from_ghz(gamma_ghz);
    e.rabi = rabi_over_gamma * e.gamma;
    e.laser_detuning = detuning;
    return e;
}

double intensity_at(const EmitterParams &e, const ModulationProgram &prog, double w, const PipelineOptions &o) {
    double ws[1] = {w};
    return simulate_spectrum(e, prog, ws, o).intensity[0];
}

// Harmonic powers 2|X_k|^2 (k >= 1) and |X_0|^2 of a real series.
std::vector<double> harmonic_power(const std::vector<double> &x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> in(x);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n / 2 + 1));
    fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex *>(out.data()), FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    std::vector<double> p(out.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        double a = std::norm(out[k] / static_cast<double>(n));
        p[k] = k == 0 ? a : 2.0 * a;
    }
    return p;
}

std::vector<int> present_harmonics(const std::vector<double> &x) {
    auto p = harmonic_power(x);
    std::vector<int> ks;
    for (std::size_t k = 1; k < p.size(); ++k) {
        if (p[k] > 0.01 * p[0]) ks.push_back(static_cast<int>(k));
    }
    return ks;
}

std::vector<double> phase_grid(std::size_t n) {
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    return phi;
}

// I_m(phi) columns for several m from one phase sweep.
std::vector<std::vector<double>> sideband_traces(const EmitterParams &e, const ModulationProgram &prog,
                                                 const std::vector<int> &ms, std::size_t n_phi,
                                                 const PipelineOptions &o, double offset = 0.0) {
    std::vector<double> ws;
    for (int m : ms) ws.push_back(e.laser_detuning + m * prog.base_omega());
    auto phi = phase_grid(n_phi);
    SweepMap map = phase_sweep(e, prog, phi, ws, o, offset);
    std::vector<std::vector<double>> out;
    for (std::size_t iy = 0; iy < ms.size(); ++iy) out.push_back(map.trace(iy));
    return out;
}

// --- 1 -------------------------------------------------------------------
Outcome single_tone_sidebands() {
    const double w = angular_from_ghz(0.6775);
    EmitterParams e = emitter(0.81, 0.0);
    e.rabi = angular_from_ghz(0.02);
    PipelineOptions o;
    const double step = w / 32.0;
    auto grid = symmetric_grid(6.0 * w, step);
    Spectrum s = simulate_spectrum(e, single_tone(w, 3.0), grid, o);
    auto peaks = find_psb_peaks(s, w, 1e-4);
    double worst = 0.0;
    int found = 0;
    std::string missing;
    for (int m = -4; m <= 4; ++m) {
        auto it = std::find_if(peaks.begin(), peaks.end(), [m](const PsbPeak &p) { return p.m == m; });
        if (it == peaks.end()) {
            missing += fmt(" %+d", m);
            continue;
        }
        ++found;
        worst = std::max(worst, std::abs(it->omega_s - m * w));
    }
    Outcome r;
    r.pass = found == 9 && worst <= step;
    r.detail = fmt("%d/9 peaks (missing:%s), worst offset %.3g MHz (grid step %.3g MHz)", found,
                   missing.empty() ? " none" : missing.c_str(), ghz_from_angular(worst) * 1e3,
                   ghz_from_angular(step) * 1e3);
    return r;
}

// --- 2 -------------------------------------------------------------------
Outcome bessel_limit() {
    const double w = angular_from_ghz(1.0);
    EmitterParams e;
    e.gamma = 0.25 * w;
    e.rabi = 0.05 * e.gamma;
    PipelineOptions o;
    o.filter.delta_e = angular_from_ghz(0.01);
    std::string d;
    bool pass = true;
    double worst = 0.0;
    for (double D : {0.5, 1.0, 3.0}) {
        auto prog = single_tone(w, D);
        std::vector<double> ws;
        for (int m = -3; m <= 3; ++m) ws.push_back(m * w);
        Spectrum s = simulate_spectrum(e, prog, ws, o);
        double i0 = s.intensity[3];
        double j0 = std::pow(bessel_j(0, D), 2);
        double dworst = 0.0;
        for (int m = 1; m <= 3; ++m) {
            double ref = std::pow(bessel_j(m, D), 2) / j0;
            if (ref < 1e-3) continue;  // below the resolvable floor
            for (int sgn : {-1, 1}) {
                double got = s.intensity[static_cast<std::size_t>(3 + sgn * m)] / i0;
                dworst = std::max(dworst, std::abs(got / ref - 1.0));
            }
        }
        worst = std::max(worst, dworst);
        pass = pass && dworst <= 0.05;
        d += fmt("D=%.1f: %.1f%%  ", D, 100 * dworst);
    }
    return {pass, d + fmt("(max relative deviation %.1f%%, limit 5%%)", 100 * worst)};
}

// --- 3 -------------------------------------------------------------------
Outcome mollow() {
    EmitterParams e = emitter(0.25, 10.0);
    PipelineOptions o;
    auto grid = symmetric_grid(1.5 * e.rabi, e.rabi / 400.0);
    Spectrum s = simulate_spectrum(e, ModulationProgram{}, grid, o);
    double lo = 0.0, hi = 0.0, vlo = -1, vhi = -1;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < -0.5 * e.rabi && s.intensity[i] > vlo) {
            vlo = s.intensity[i];
            lo = grid[i];
        }
        if (grid[i] > 0.5 * e.rabi && s.intensity[i] > vhi) {
            vhi = s.intensity[i];
            hi = grid[i];
        }
    }
    double err = std::max(std::abs(-lo / e.rabi - 1.0), std::abs(hi / e.rabi - 1.0));
    return {err <= 0.02, fmt("side peaks at %.4f and %.4f Omega, deviation %.2f%% (limit 2%%)", lo / e.rabi,
                             hi / e.rabi, 100 * err)};
}

// --- 4 -------------------------------------------------------------------
double dominant_period(const std::vector<double> &tau, const std::vector<double> &y, double t_lo, double t_hi) {
    std::vector<double> x;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (tau[i] >= t_lo && tau[i] <= t_hi) x.push_back(y[i]);
    }
    const std::size_t n = x.size();
    double mean = 0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double hann = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n - 1));
        x[i] = (x[i] - mean) * hann;
    }
    // zero-pad for a finer frequency grid
    const std::size_t pad = 16 * n;
    x.resize(pad, 0.0);
    auto p = harmonic_power(x);
    std::size_t k = 1;
    for (std::size_t i = 2; i + 1 < p.size(); ++i) {
        if (p[i] > p[k]) k = i;
    }
    double a = std::log(p[k - 1]), b = std::log(p[k]), c = std::log(p[k + 1]);
    double kk = static_cast<double>(k) + 0.5 * (a - c) / (a - 2 * b + c);
    double dt = tau[1] - tau[0];
    return static_cast<double>(pad) * dt / kk;
}

Outcome g2_period() {
    const double w = angular_from_ghz(0.6775);
    const double target = kTwoPi / w;
    std::string d;
    bool any = false;
    for (double sign : {+1.0, -1.0}) {
        EmitterParams e = emitter(0.81, 0.5, sign * 1.6 * w);
        PeriodicState cyc = limit_cycle(e, single_tone(w, 3.0), 512);
        G2Curve c = g2_normalized(cyc, 12e-9);
        std::size_t i0 = c.tau.size() / 2;
        double g0 = c.g2[i0];
        double period = dominant_period(c.tau, c.g2, 1e-9, 12e-9);
        double err = std::abs(period / target - 1.0);
        bool ok = std::abs(g0) <= 1e-10 && err <= 0.01;
        any = any || ok;
        d += fmt("dL=%+.1fw: g2(0)=%.1e period %.4f ns (%.2f%%)  ", sign * 1.6, g0, period * 1e9, 100 * err);
    }
    return {any, d + fmt("target %.4f ns", target * 1e9)};
}

// --- 5 -------------------------------------------------------------------
Outcome phase_matching() {
    const double w0 = angular_from_ghz(0.6775);
    EmitterParams e = emitter(0.81, 0.05);
    auto prog = two_tone(w0, 1, 1.2, 2, 1.5, 0.0);
    PipelineOptions o;
    double off = calibrate_phase_offset(e, prog, o);
    auto at = [&](double phi, int m) {
        return intensity_at(e, prog.with_phase(1, phi + off), m * w0, o);
    };
    double r0 = at(0.0, 1) / at(0.0, -1);
    double rpi = at(kPi, -1) / at(kPi, 1);
    return {r0 >= 3.0 && rpi >= 3.0,
            fmt("offset %.4f rad, I+1/I-1 at phi=0: %.3f, I-1/I+1 at phi=pi: %.3f (need >= 3)", off, r0, rpi)};
}

// --- 6 -------------------------------------------------------------------
// Lines at +-1 and +-5 w0 must exist in the two-tone run and in neither
// single-tone run. Line content comes from the coherent harmonics; the
// 0.41 GHz filter cannot separate 0.46 GHz neighbours, so local maxima are
// looked for with a narrow filter and only reported for the default one.
Outcome sum_difference() {
    const double w0 = angular_from_ghz(0.46);
    EmitterParams e = emitter(0.81, 0.05);
    PipelineOptions o;
    PipelineOptions narrow = o;
    narrow.filter.delta_e = angular_from_ghz(0.05);
    auto dual = two_tone(w0, 2, 1.0, 3, 1.5, 0.0);
    auto lo = single_tone(2 * w0, 1.0);
    auto hi = single_tone(3 * w0, 1.5);
    auto grid = symmetric_grid(7 * w0, w0 / 32);
    Spectrum sd = simulate_spectrum(e, dual, grid, o);
    Spectrum sn = simulate_spectrum(e, dual, grid, narrow);
    Spectrum s2 = simulate_spectrum(e, lo, grid, o);
    Spectrum s3 = simulate_spectrum(e, hi, grid, o);
    auto line_weight = [](const Spectrum &s, double w) {
        double best = 0.0;
        for (const auto &l : s.lines) {
            if (std::abs(l.omega_s - w) < 1e-6 * std::abs(w) + 1.0) best = std::max(best, l.weight);
        }
        return best;
    };
    auto local_peak = [&](const Spectrum &s, double w) {
        for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
            if (std::abs(grid[i] - w) <= w0 / 8 && s.intensity[i] > s.intensity[i - 1] &&
                s.intensity[i] >= s.intensity[i + 1]) {
                return true;
            }
        }
        return false;
    };
    double zpl = line_weight(sd, 0.0);
    bool pass = true;
    std::string d;
    for (int m : {-5, -1, 1, 5}) {
        double wd = line_weight(sd, m * w0);
        double ws = std::max(line_weight(s2, m * w0), line_weight(s3, m * w0));
        bool peak = local_peak(sn, m * w0);
        bool ok = wd > 1e-3 * zpl && ws == 0.0 && peak;
        pass = pass && ok;
        d += fmt("m=%+d: line %.2e of ZPL, single-tone %.0e, narrow-filter peak %s, 0.41 GHz peak %s; ", m, wd / zpl,
                 ws, peak ? "yes" : "no", local_peak(sd, m * w0) ? "yes" : "no");
    }
    return {pass, d};
}

// --- 7 -------------------------------------------------------------------
Outcome phase_maps() {
    const double w0 = angular_from_ghz(0.6775);
    EmitterParams e = emitter(0.81, 0.05);
    auto prog = two_tone(w0, 1, 1.2, 2, 1.5, 0.0);
    PipelineOptions o;
    auto tr = sideband_traces(e, prog, {-1, 0, 1}, 64, o);
    double r = oracle::pearson(tr[2], tr[0]);
    auto [mn, mx] = std::minmax_element(tr[1].begin(), tr[1].end());
    double mean = 0;
    for (double v : tr[1]) mean += v;
    mean /= static_cast<double>(tr[1].size());
    double var = (*mx - *mn) / mean;
    return {r <= -0.9 && var < 0.1,
            fmt("pearson(I+1, I-1) = %.4f (need <= -0.9), ZPL peak-to-peak %.2f%% of mean (need < 10%%)", r,
                100 * var)};
}

// --- 8 -------------------------------------------------------------------
Outcome pi_periodicity() {
    const double w0 = angular_from_ghz(0.6775);
    EmitterParams e = emitter(0.81, 0.05);
    auto prog = two_tone(w0, 1, 2.6, 2, 1.5, 0.0);
    PipelineOptions o;
    auto tr = sideband_traces(e, prog, {0}, 64, o);
    auto p = harmonic_power(tr[0]);
    std::size_t k = 1;
    for (std::size_t i = 2; i < p.size(); ++i) {
        if (p[i] > p[k]) k = i;
    }
    return {k == 2, fmt("dominant harmonic k=%zu, P1/P0=%.2e P2/P0=%.2e", k, p[1] / p[0], p[2] / p[0])};
}

// --- 9 -------------------------------------------------------------------
Outcome detuning_fringes() {
    const double w1 = angular_from_ghz(0.65);
    EmitterParams e = emitter(0.81, 0.05);
    auto prog = two_tone(w1, 1, 1.2, 2, 1.5, 0.0);
    PipelineOptions o;
    const double dw = kTwoPi * 50e-6;
    std::vector<double> dws = {0.0, dw};
    auto t = linear_grid(0.0, 12.0, 721);
    const double phi0 = 0.37;
    SweepMap map = detuning_time_map(e, prog, dws, t, w1, o, phi0);

    bool flat = true;
    for (std::size_t it = 0; it < t.size(); ++it) flat = flat && map.value(it, 0) == map.value(0, 0);

    std::vector<double> y = map.trace(1);
    double mean = 0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    std::vector<double> ups;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        if (y[i] < mean && y[i + 1] >= mean) {
            ups.push_back(t[i] + (mean - y[i]) / (y[i + 1] - y[i]) * (t[i + 1] - t[i]));
        }
    }
    double period = ups.size() >= 2 ? (ups.back() - ups.front()) / static_cast<double>(ups.size() - 1) : 0.0;
    double target = kTwoPi / dw / 3600.0;
    double err = std::abs(period / target - 1.0);

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, t.size() - 1);
    double worst = 0.0;
    const double ws[1] = {w1};
    for (int i = 0; i < 8; ++i) {
        std::size_t it = pick(rng);
        double phi[1] = {phi0 + dw * t[it] * 3600.0};
        SweepMap ref = phase_sweep(e, prog, phi, ws, o);
        worst = std::max(worst, std::abs(map.value(it, 1) * map.raw_max - ref.raw_max) / ref.raw_max);
    }
    return {flat && err <= 1e-3 && worst <= 1e-9,
            fmt("period %.5f h vs %.5f h (%.3f%%), zero-detuning row %s, resampling oracle max rel %.1e", period,
                target, 100 * err, flat ? "constant" : "varies", worst)};
}

// --- 10 ------------------------------------------------------------------
Outcome cross_oracle() {
    struct Case {
        const char *name;
        EmitterParams e;
        ModulationProgram prog;
        std::size_t n_t;
    };
    const double w = angular_from_ghz(0.6775);
    std::vector<Case> cases = {
        {"weak drive", emitter(0.81, 0.05), ModulationProgram{}, 512},
        {"mollow", emitter(0.25, 10.0), ModulationProgram{}, 1024},
        {"D=3", emitter(0.81, 0.5), single_tone(w, 3.0), 512},
    };
    FilterSpec f;
    double worst_spec = 0.0;
    std::string d;
    for (const auto &c : cases) {
        PeriodicState cyc = limit_cycle(c.e, c.prog, c.n_t);
        CorrelationGrid g = g1(cyc, default_tau_max(c.e, f));
        auto grid = symmetric_grid(4 * w, w / 16);
        Spectrum a = spectrum_floquet(g, f, grid);
        Spectrum b = spectrum_direct(g, f, grid);
        double m = a.max_intensity(), err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(a.intensity[i] - b.intensity[i]) / m);
        worst_spec = std::max(worst_spec, err);
        d += fmt("%s %.1e; ", c.name, err);
    }

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_g1 = 0.0;
    for (int i = 0; i < 5; ++i) {
        EmitterParams e = emitter(0.3 + 0.6 * u(rng), 0.1 + 1.5 * u(rng), angular_from_ghz(u(rng) - 0.5));
        e.gamma_pd = 0.2 * u(rng) * e.gamma;
        double wi = angular_from_ghz(0.5 + u(rng));
        auto prog = i % 2 ? two_tone(wi, 1, 0.5 + u(rng), 2, u(rng), kTwoPi * u(rng)) : single_tone(wi, 3 * u(rng));
        PeriodicState cyc = limit_cycle(e, prog, 64);
        CorrelationGrid g = g1(cyc, 40.0 / e.gamma);
        for (std::size_t k : {std::size_t{0}, std::size_t{29}}) {
            std::vector<double> taus;
            std::vector<std::size_t> idx;
            for (std::size_t j = 0; j < g.cols(); j += g.cols() / 9) {
                taus.push_back(g.lags[j]);
                idx.push_back(j);
            }
            auto ref = oracle::g1_two_time(e, prog, cyc.period, cyc.times[k], taus, 4096);
            for (std::size_t j = 0; j < idx.size(); ++j) {
                worst_g1 = std::max(worst_g1, std::abs(g.values(static_cast<Eigen::Index>(k),
                                                                static_cast<Eigen::Index>(idx[j])) -
                                                       ref[j]));
            }
        }
    }
    return {worst_spec <= 1e-4 && worst_g1 <= 1e-7,
            fmt("floquet vs direct: %smax %.1e (limit 1e-4); regression vs two-time max %.1e (limit 1e-7)", d.c_str(),
                worst_spec, worst_g1)};
}

// --- 11 ------------------------------------------------------------------
Outcome pathways_vs_numerics() {
    struct Pair {
        int p, q;
        double f0, D1, D2;
    };
    std::vector<Pair> pairs = {{1, 2, 0.6775, 1.2, 1.5}, {2, 3, 0.46, 1.0, 1.5}};
    PipelineOptions o;
    EmitterParams e = emitter(0.81, 0.05);
    bool pass = true;
    std::string d;
    std::vector<int> ms = {-2, -1, 0, 1, 2};
    for (const auto &pr : pairs) {
        auto prog = two_tone(angular_from_ghz(pr.f0), pr.p, pr.D1, pr.q, pr.D2, 0.0);
        auto tr = sideband_traces(e, prog, ms, 32, o);
        int order = reachable_order(pr.D1, pr.D2);
        int bad = 0;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            auto pred = predict_periodicity(ms[i], pr.p, pr.q, order);
            for (int k : present_harmonics(tr[i])) {
                if (!pred.allows(k)) {
                    ++bad;
                    d += fmt("[(%d,%d) m=%d k=%d unexplained] ", pr.p, pr.q, ms[i], k);
                }
            }
        }
        pass = pass && bad == 0;
        d += fmt("(%d,%d) order %d: %d unexplained; ", pr.p, pr.q, order, bad);
    }
    auto weak = two_tone(angular_from_ghz(0.6775), 1, 0.2, 2, 0.2, 0.0);
    auto z = sideband_traces(e, weak, {0}, 32, o);
    auto ks = present_harmonics(z[0]);
    bool no_k1 = std::find(ks.begin(), ks.end(), 1) == ks.end();
    auto p = harmonic_power(z[0]);
    pass = pass && no_k1;
    d += fmt("weak ZPL P1/P0 = %.1e (k=1 %s)", p[1] / p[0], no_k1 ? "absent" : "present");
    return {pass, d};
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char *name;
        std::function<Outcome()> fn;
    };
    std::vector<Entry> all = {
        {1, "single-tone sidebands at m*w", single_tone_sidebands},
        {2, "weak-drive Bessel ratios", bessel_limit},
        {3, "Mollow side peaks", mollow},
        {4, "g2 antibunching and period", g2_period},
        {5, "phase matching of +-1 sidebands", phase_matching},
        {6, "sum and difference lines (2,3)", sum_difference},
        {7, "phase-map anticorrelation", phase_maps},
        {8, "pi-periodic ZPL at large D1", pi_periodicity},
        {9, "detuning fringes", detuning_fringes},
        {10, "cross-oracle equivalence", cross_oracle},
        {11, "pathways vs numerics", pathways_vs_numerics},
    };
    int failed = 0;
    for (const auto &c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = c.fn();
        } catch (const std::exception &ex) {
            r = {false, std::string("exception: ") + ex.what()};
        }
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        std::printf("[%s] criterion %d: %s: %s [%.1f s]\n", r.pass ? "PASS" : "FAIL", c.id, c.name, r.detail.c_str(),
                    dt.count());
        std::fflush(stdout);
        failed += r.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed ? 1 : 0;
}
