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

#include <cmath>
#include <cstdlib>

#include "sideband/errors.hpp"
#include "sideband/spectrum.hpp"

namespace sideband {

namespace {

constexpr double kBesselCut = 1e-12;

// Largest order kept for modulation index D.
int bessel_extent(double D) {
    if (D == 0) {
        return 0;
    }
    int n = static_cast<int>(std::ceil(D));
    while (std::abs(std::cyl_bessel_j(static_cast<double>(n), D)) >= kBesselCut) {
        ++n;
    }
    return n - 1;
}

}  // namespace

double bessel_j(int n, double x) {
    double v = std::cyl_bessel_j(static_cast<double>(std::abs(n)), std::abs(x));
    int sign = 1;
    if (n < 0 && (n % 2) != 0) {
        sign = -sign;
    }
    if (x < 0 && (n % 2) != 0) {
        sign = -sign;
    }
    return sign * v;
}

std::complex<double> SidebandWeights::amplitude(int m) const {
    if (m < m_min || m > m_max()) {
        return 0.0;
    }
    return amplitudes[static_cast<std::size_t>(m - m_min)];
}

double SidebandWeights::total() const {
    double s = 0.0;
    for (const auto &a : amplitudes) {
        s += std::norm(a);
    }
    return s;
}

SidebandWeights bessel_weights(double D) {
    if (!(D >= 0) || !std::isfinite(D)) {
        throw UnitError("modulation index must be non-negative");
    }
    int k = bessel_extent(D);
    SidebandWeights w;
    w.m_min = -k;
    w.amplitudes.resize(static_cast<std::size_t>(2 * k + 1));
    for (int m = -k; m <= k; ++m) {
        w.amplitudes[static_cast<std::size_t>(m + k)] = bessel_j(m, D);
    }
    return w;
}

SidebandWeights dual_tone_weights(double D1, double D2, double phi, int p, int q) {
    if (p <= 0 || q <= 0 || p == q) {
        throw UnitError("harmonics p, q must be positive and distinct");
    }
    if (!(D1 >= 0) || !(D2 >= 0) || !std::isfinite(D1) || !std::isfinite(D2)) {
        throw UnitError("modulation indices must be non-negative");
    }
    const int k1 = bessel_extent(D1);
    const int k2 = bessel_extent(D2);
    const int span = p * k1 + q * k2;
    SidebandWeights w;
    w.m_min = -span;
    w.amplitudes.assign(static_cast<std::size_t>(2 * span + 1), 0.0);
    const bool phase_on_first = p > q;
    for (int a = -k1; a <= k1; ++a) {
        double ja = bessel_j(a, D1);
        for (int b = -k2; b <= k2; ++b) {
            int carrier = phase_on_first ? a : b;
            std::complex<double> ph = std::polar(1.0, -carrier * phi);
            w.amplitudes[static_cast<std::size_t>(p * a + q * b + span)] += ja * bessel_j(b, D2) * ph;
        }
    }
    return w;
}

}  // namespace sideband
