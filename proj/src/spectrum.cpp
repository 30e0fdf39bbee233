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

#include "sideband/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "sideband/errors.hpp"

namespace sideband {

namespace {

// FFTW's planner is not reentrant.
std::mutex &planner_mutex() {
    static std::mutex mu;
    return mu;
}

// In-place backward DFTs (sum_k x_k e^{+2 pi i k n / N}) of `howmany`
// contiguous blocks of length n.
void backward_dfts(std::complex<double> *data, int n, int howmany) {
    fftw_complex *buf = reinterpret_cast<fftw_complex *>(data);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_many_dft(1, &n, howmany, buf, nullptr, 1, n, buf, nullptr, 1, n, FFTW_BACKWARD,
                                  FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
}

int signed_harmonic(std::size_t idx, std::size_t n) {
    return idx < (n + 1) / 2 ? static_cast<int>(idx) : static_cast<int>(idx) - static_cast<int>(n);
}

void check_inputs(const CorrelationGrid &g, const FilterSpec &filter, std::span<const double> omega_s) {
    filter.validate();
    if (g.rows() == 0 || g.cols() < 2) {
        throw UnitError("spectrum needs a non-empty correlation grid");
    }
    for (std::size_t i = 1; i < omega_s.size(); ++i) {
        if (!(omega_s[i] > omega_s[i - 1])) {
            throw UnitError("frequency grid must be strictly increasing");
        }
    }
}

// sum_j c_j e^{i w s_j} with s_j = j h, rotating a phasor and reseeding it
// every 64 steps.
std::complex<double> fourier_sum(const std::vector<std::complex<double>> &c, double w, double h) {
    const std::complex<double> rot = std::polar(1.0, w * h);
    std::complex<double> acc = 0.0;
    std::complex<double> z = 1.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if ((j & 63) == 0) {
            z = std::polar(1.0, w * h * static_cast<double>(j));
        }
        acc += c[j] * z;
        z *= rot;
    }
    return acc;
}

}  // namespace

double Spectrum::max_intensity() const {
    double m = 0.0;
    for (double v : intensity) {
        m = std::max(m, v);
    }
    return m;
}

Spectrum Spectrum::normalized() const {
    Spectrum out = *this;
    double m = max_intensity();
    if (m > 0) {
        for (double &v : out.intensity) {
            v /= m;
        }
        for (auto &line : out.lines) {
            line.weight /= m;
        }
    }
    out.normalization = Normalization::kMax1;
    return out;
}

Spectrum spectrum_floquet(const CorrelationGrid &g, const FilterSpec &filter, std::span<const double> omega_s) {
    check_inputs(g, filter, omega_s);
    const std::size_t n = g.rows();
    const std::size_t nlag = g.cols();
    const double h = g.step;
    const double w0 = kTwoPi / g.period;
    const double de = filter.delta_e;

    // Harmonic expansion over the base time for every lag.
    std::vector<std::complex<double>> harm(n * nlag);
    std::copy(g.values.data(), g.values.data() + n * nlag, harm.begin());
    backward_dfts(harm.data(), static_cast<int>(n), static_cast<int>(nlag));
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> peak(n, 0.0);
    std::vector<std::complex<double>> g0(nlag);
    for (std::size_t j = 0; j < nlag; ++j) {
        for (std::size_t h_idx = 0; h_idx < n; ++h_idx) {
            peak[h_idx] = std::max(peak[h_idx], std::abs(harm[j * n + h_idx]) * inv_n);
        }
        g0[j] = harm[j * n] * inv_n;
    }

    Spectrum spec;
    spec.diagnostics.tail_residual = g.tail_residual;
    spec.diagnostics.tau_max = g.tau_max();
    spec.diagnostics.lags = nlag;
    for (std::size_t h_idx = 0; h_idx < n; ++h_idx) {
        if (peak[h_idx] > spec.diagnostics.harmonic_cut * peak[0]) {
            ++spec.diagnostics.harmonics_retained;
            spec.diagnostics.max_harmonic =
                std::max(spec.diagnostics.max_harmonic, std::abs(signed_harmonic(h_idx, n)));
        }
    }

    // Coherent lines from the harmonics of <sigma_->.
    std::vector<std::complex<double>> a(g.sigma_minus);
    backward_dfts(a.data(), static_cast<int>(n), 1);
    for (std::size_t i = 0; i < n; ++i) {
        double wgt = std::norm(a[i] * inv_n);
        if (wgt > 0) {
            int hn = signed_harmonic(i, n);
            spec.lines.push_back(CoherentLine{hn, g.laser_detuning + hn * w0, wgt});
        }
    }
    std::sort(spec.lines.begin(), spec.lines.end(),
              [](const CoherentLine &x, const CoherentLine &y) { return x.n < y.n; });

    // Incoherent remainder r(s) = g0(s) - coherent part, weighted by the
    // filter autocorrelation A(s) = e^{-de s}(s + 1/de).
    std::vector<std::complex<double>> r(nlag);
    for (std::size_t j = 0; j < nlag; ++j) {
        std::complex<double> c = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            c += std::conj(g.sigma_minus[k]) * g.sigma_minus[(k + j) % n];
        }
        c *= inv_n;
        double s = h * static_cast<double>(j);
        double wt = (j == 0 || j + 1 == nlag) ? 0.5 : 1.0;
        r[j] = wt * h * std::exp(-de * s) * (s + 1.0 / de) * (g0[j] - c);
    }
    double coh0 = 0.0;
    for (const auto &v : g.sigma_minus) {
        coh0 += std::norm(v);
    }
    const std::complex<double> r0 = g0[0] - coh0 * inv_n;
    const std::complex<double> dr0 = g.slope0 - g.coherent_slope0;

    spec.omega_s.assign(omega_s.begin(), omega_s.end());
    spec.intensity.resize(omega_s.size());
    for (std::size_t i = 0; i < omega_s.size(); ++i) {
        const double w = omega_s[i] - g.laser_detuning;
        double coh = 0.0;
        for (const auto &line : spec.lines) {
            double x = w - line.n * w0;
            double kt = 2.0 * de / (de * de + x * x);
            coh += line.weight * kt * kt;
        }
        std::complex<double> inc = fourier_sum(r, w, h);
        // Euler-Maclaurin endpoint term h^2/12 F'(0).
        inc += (h * h / 12.0) * (dr0 + std::complex<double>(0.0, w) * r0) / de;
        spec.intensity[i] = coh + 2.0 * inc.real();
    }
    return spec;
}

Spectrum spectrum_direct(const CorrelationGrid &g, const FilterSpec &filter, std::span<const double> omega_s,
                         const DirectOptions &opts) {
    check_inputs(g, filter, omega_s);
    const std::size_t n = g.rows();
    const double h = g.step;
    const double de = filter.delta_e;
    const double inv_t = 1.0 / g.period;
    const auto reach = static_cast<long>(std::floor(opts.truncation / (de * h)));
    const std::size_t ns = static_cast<std::size_t>(reach) + 1;

    // H(s_j) = (1/T) sum_t sum_tau K(t - tau) K(t - tau - s) G(tau, tau + s) with
    // tau = t_i - u_m; G taken from the periodic images of the base grid.
    std::vector<std::complex<double>> col(n);
    std::vector<std::complex<double>> hs(ns);
    for (std::size_t j = 0; j < ns; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            col[k] = g.value_or_tail(k, j);
        }
        const long jj = static_cast<long>(j);
        const long m_lo = std::max(-reach, jj - reach);
        const long m_hi = std::min(reach, jj + reach);
        std::complex<double> acc = 0.0;
        if (opts.literal_time_sum) {
            for (long m = m_lo; m <= m_hi; ++m) {
                double kk = std::exp(-de * h * static_cast<double>(std::labs(m) + std::labs(m - jj)));
                std::complex<double> ts = 0.0;
                for (std::size_t i = 0; i <= n; ++i) {
                    double wt = (i == 0 || i == n) ? 0.5 : 1.0;
                    long row = (static_cast<long>(i) - m) % static_cast<long>(n);
                    if (row < 0) {
                        row += static_cast<long>(n);
                    }
                    ts += wt * col[static_cast<std::size_t>(row)];
                }
                acc += kk * ts;
            }
        } else {
            // The t-sum spans exactly one period of the periodic images, so it
            // does not depend on u.
            std::complex<double> ts = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                ts += col[k];
            }
            double ksum = 0.0;
            for (long m = m_lo; m <= m_hi; ++m) {
                ksum += std::exp(-de * h * static_cast<double>(std::labs(m) + std::labs(m - jj)));
            }
            acc = ksum * ts;
        }
        double ws = (j == 0 || j + 1 == ns) ? 0.5 : 1.0;
        hs[j] = ws * h * inv_t * h * h * acc;
    }

    Spectrum spec;
    spec.diagnostics.tail_residual = g.tail_residual;
    spec.diagnostics.tau_max = g.tau_max();
    spec.diagnostics.lags = ns;
    spec.omega_s.assign(omega_s.begin(), omega_s.end());
    spec.intensity.resize(omega_s.size());
    for (std::size_t i = 0; i < omega_s.size(); ++i) {
        const double w = omega_s[i] - g.laser_detuning;
        spec.intensity[i] = 2.0 * fourier_sum(hs, w, h).real();
    }
    return spec;
}

std::vector<PsbPeak> find_psb_peaks(const Spectrum &spec, double base_omega, double threshold, double origin) {
    const auto &x = spec.omega_s;
    const auto &y = spec.intensity;
    if (x.size() < 3) {
        return {};
    }
    double step = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    for (std::size_t i = 1; i < x.size(); ++i) {
        step = std::max(step, x[i] - x[i - 1]);
    }
    if (!(base_omega > 0) || step > base_omega / 8.0 * (1 + 1e-9)) {
        throw GridTooCoarse("frequency grid must have at least 8 points per base frequency");
    }
    const double top = spec.max_intensity();
    if (!(top > 0)) {
        return {};
    }
    const int m_lo = static_cast<int>(std::ceil((x.front() - origin) / base_omega - 0.5));
    const int m_hi = static_cast<int>(std::floor((x.back() - origin) / base_omega + 0.5));
    std::vector<PsbPeak> out;
    for (int m = m_lo; m <= m_hi; ++m) {
        const double centre = origin + m * base_omega;
        std::size_t best = 0;
        double best_dist = 0.0;
        bool found = false;
        for (std::size_t i = 1; i + 1 < x.size(); ++i) {
            double d = std::abs(x[i] - centre);
            // Half-open window so each maximum belongs to one m.
            if (x[i] - centre < -0.5 * base_omega || x[i] - centre >= 0.5 * base_omega) {
                continue;
            }
            if (y[i] < threshold * top || y[i] < y[i - 1] || y[i] < y[i + 1]) {
                continue;
            }
            if (y[i] == y[i - 1] && y[i] == y[i + 1]) {
                continue;
            }
            if (!found || d < best_dist) {
                best = i;
                best_dist = d;
                found = true;
            }
        }
        if (!found) {
            continue;
        }
        // Parabolic refinement through the three samples.
        double y0 = y[best - 1], y1 = y[best], y2 = y[best + 1];
        double den = y0 - 2.0 * y1 + y2;
        double off = den != 0 ? 0.5 * (y0 - y2) / den : 0.0;
        off = std::clamp(off, -0.5, 0.5);
        double xs = x[best] + off * (off > 0 ? x[best + 1] - x[best] : x[best] - x[best - 1]);
        out.push_back(PsbPeak{m, xs, y1});
    }
    return out;
}

}  // namespace sideband
