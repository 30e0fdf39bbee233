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

#include "sideband/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "parallel.hpp"
#include "sideband/errors.hpp"

namespace sideband {

namespace {

std::size_t lag_count(const PeriodicState &cycle, double tau_max) {
    if (cycle.size() == 0 || cycle.step_maps.size() != cycle.size()) {
        throw UnitError("correlations need a converged limit cycle");
    }
    if (!(tau_max > 0) || !std::isfinite(tau_max)) {
        throw UnitError("tau_max must be positive and finite");
    }
    return static_cast<std::size_t>(std::ceil(tau_max / cycle.step() - 1e-9));
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::complex<double> CorrelationGrid::factorized(std::size_t k, std::size_t j) const {
    const std::size_t n = rows();
    return std::conj(sigma_minus[k]) * sigma_minus[(k + j) % n];
}

std::complex<double> CorrelationGrid::value_or_tail(std::size_t k, std::size_t j) const {
    if (j < cols()) {
        return values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
    }
    return factorized(k, j);
}

double default_tau_max(const EmitterParams &params, const FilterSpec &filter) {
    double a = 10.0 / std::min(params.gamma, filter.delta_e);
    double b = 2.0 * std::log(1e8) / params.gamma;
    return std::max(a, b);
}

CorrelationGrid g1(const PeriodicState &cycle, double tau_max, const CorrelationOptions &opts) {
    const std::size_t n = cycle.size();
    const std::size_t nlag = lag_count(cycle, tau_max);
    if (tau_max * cycle.params.gamma < 10.0 - 1e-9) {
        throw UnitError("tau_max must be at least 10/gamma");
    }
    CorrelationGrid g;
    g.period = cycle.period;
    g.step = cycle.step();
    g.laser_detuning = cycle.params.laser_detuning;
    g.gamma = cycle.params.gamma;
    g.base_times = cycle.times;
    g.lags.resize(nlag + 1);
    for (std::size_t j = 0; j <= nlag; ++j) {
        g.lags[j] = g.step * static_cast<double>(j);
    }
    g.sigma_minus.resize(n);
    g.excited.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        g.sigma_minus[k] = cycle.states[k].eg();
        g.excited[k] = cycle.states[k].ee().real();
    }
    g.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nlag + 1));

    detail::parallel_for(n, opts.threads, [&](std::size_t k) {
        const DensityMatrix &rho = cycle.states[k];
        OpVec x = OpVec::Zero();
        x(0) = rho.ge();
        x(2) = rho.ee();
        const auto row = static_cast<Eigen::Index>(k);
        g.values(row, 0) = x(2);
        for (std::size_t j = 1; j <= nlag; ++j) {
            x = cycle.step_maps[(k + j - 1) % n] * x;
            g.values(row, static_cast<Eigen::Index>(j)) = x(2);
        }
    });

    double tail = 0.0;
    std::complex<double> s_all = 0.0, s_coh = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        auto row = static_cast<Eigen::Index>(k);
        tail = std::max(tail, std::abs(g.values(row, static_cast<Eigen::Index>(nlag)) - g.factorized(k, nlag)));
        const DensityMatrix &rho = cycle.states[k];
        SuperOp l = generator(cycle.params, cycle.program, cycle.times[k]);
        OpVec x = OpVec::Zero();
        x(0) = rho.ge();
        x(2) = rho.ee();
        s_all += (l * x)(2);
        s_coh += rho.ge() * (l * rho.vec())(2);
    }
    g.tail_residual = tail;
    g.slope0 = s_all / static_cast<double>(n);
    g.coherent_slope0 = s_coh / static_cast<double>(n);
    if (tail > opts.tail_tolerance) {
        throw TailNotDecayed("G1 tail residual " + fmt(tail) + " exceeds " + fmt(opts.tail_tolerance) +
                             " at tau_max = " + fmt(tau_max * 1e9) + " ns");
    }
    return g;
}

G2Curve g2_normalized(const PeriodicState &cycle, double tau_max, G2Normalization norm,
                      const CorrelationOptions &opts) {
    const std::size_t n = cycle.size();
    const std::size_t nlag = lag_count(cycle, tau_max);
    Eigen::MatrixXd vals(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nlag + 1));
    detail::parallel_for(n, opts.threads, [&](std::size_t k) {
        OpVec x = OpVec::Zero();
        x(0) = cycle.states[k].ee();
        const auto row = static_cast<Eigen::Index>(k);
        vals(row, 0) = x(3).real();
        for (std::size_t j = 1; j <= nlag; ++j) {
            x = cycle.step_maps[(k + j - 1) % n] * x;
            vals(row, static_cast<Eigen::Index>(j)) = x(3).real();
        }
    });

    std::vector<double> pe(n);
    double mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        pe[k] = cycle.states[k].ee().real();
        mean += pe[k];
    }
    mean /= static_cast<double>(n);

    double tail = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double lim = pe[k] * pe[(k + nlag) % n];
        tail = std::max(tail, std::abs(vals(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(nlag)) - lim));
    }
    if (tail > opts.tail_tolerance) {
        throw TailNotDecayed("G2 tail residual " + fmt(tail) + " exceeds " + fmt(opts.tail_tolerance));
    }

    std::vector<double> half(nlag + 1);
    for (std::size_t j = 0; j <= nlag; ++j) {
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            num += vals(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
            den += pe[k] * pe[(k + j) % n];
        }
        num /= static_cast<double>(n);
        den /= static_cast<double>(n);
        if (norm == G2Normalization::kMeanSquared) {
            den = mean * mean;
        }
        half[j] = den > 0 ? std::max(0.0, num / den) : 0.0;
    }

    G2Curve out;
    const double h = cycle.step();
    out.tau.reserve(2 * nlag + 1);
    out.g2.reserve(2 * nlag + 1);
    for (std::size_t i = 0; i <= 2 * nlag; ++i) {
        auto j = static_cast<long>(i) - static_cast<long>(nlag);
        out.tau.push_back(h * static_cast<double>(j));
        out.g2.push_back(half[static_cast<std::size_t>(std::labs(j))]);
    }
    return out;
}

G2Curve convolve_gaussian_irf(const G2Curve &curve, double sigma) {
    if (!(sigma > 0) || curve.tau.size() < 2) {
        return curve;
    }
    const double h = curve.tau[1] - curve.tau[0];
    const auto reach = static_cast<long>(std::ceil(6.0 * sigma / h));
    std::vector<double> w(static_cast<std::size_t>(2 * reach + 1));
    for (long i = -reach; i <= reach; ++i) {
        double x = h * static_cast<double>(i) / sigma;
        w[static_cast<std::size_t>(i + reach)] = std::exp(-0.5 * x * x);
    }
    G2Curve out = curve;
    const auto n = static_cast<long>(curve.g2.size());
    for (long i = 0; i < n; ++i) {
        double acc = 0.0, norm = 0.0;
        for (long d = -reach; d <= reach; ++d) {
            long src = i - d;
            if (src < 0 || src >= n) {
                continue;
            }
            double wt = w[static_cast<std::size_t>(d + reach)];
            acc += wt * curve.g2[static_cast<std::size_t>(src)];
            norm += wt;
        }
        out.g2[static_cast<std::size_t>(i)] = acc / norm;
    }
    return out;
}

}  // namespace sideband
