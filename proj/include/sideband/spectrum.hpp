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

#ifndef SIDEBAND_SPECTRUM_HPP
#define SIDEBAND_SPECTRUM_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sideband/correlations.hpp"
#include "sideband/model.hpp"

namespace sideband {

enum class Normalization { kRaw, kMax1 };

/// Coherent (delta-like) emission line of the periodic steady state.
struct CoherentLine {
    int n = 0;              // harmonic of the base frequency
    double omega_s = 0.0;   // laser_detuning + n * base_omega
    double weight = 0.0;    // |<sigma_->_n|^2
};

struct SpectrumDiagnostics {
    std::size_t harmonics_retained = 0;  // Floquet harmonics above the cut
    int max_harmonic = 0;                // largest |n| retained
    double harmonic_cut = 1e-10;         // relative threshold used
    double tail_residual = 0.0;
    double tau_max = 0.0;
    std::size_t lags = 0;
};

/// Filtered intensity on a grid of shifts omega_s relative to the bare
/// transition (the laser sits at omega_s = laser_detuning).
struct Spectrum {
    std::vector<double> omega_s;
    std::vector<double> intensity;
    Normalization normalization = Normalization::kRaw;
    std::vector<CoherentLine> lines;
    SpectrumDiagnostics diagnostics;

    double max_intensity() const;
    Spectrum normalized() const;
};

/// Fast path: period-average of G over the base grid, analytic filter
/// integrals for the coherent part, trapezoid plus endpoint correction for
/// the incoherent remainder.
Spectrum spectrum_floquet(const CorrelationGrid &g, const FilterSpec &filter, std::span<const double> omega_s);

struct DirectOptions {
    double truncation = 30.0;  // kernel cut at truncation / delta_e
    /// Evaluate the t-sum inside the u-loop instead of hoisting it. Much slower.
    bool literal_time_sum = false;
};

/// Reference path: trapezoid sums of the filtered triple integral over t in
/// [0, T], tau over the periodic images and s >= 0.
Spectrum spectrum_direct(const CorrelationGrid &g, const FilterSpec &filter, std::span<const double> omega_s,
                         const DirectOptions &opts = {});

/// Integer-order Bessel function of the first kind, any sign of n.
double bessel_j(int n, double x);

/// Map m -> complex amplitude A_m.
struct SidebandWeights {
    int m_min = 0;
    std::vector<std::complex<double>> amplitudes;

    int m_max() const {
        return m_min + static_cast<int>(amplitudes.size()) - 1;
    }
    std::complex<double> amplitude(int m) const;
    double weight(int m) const {
        return std::norm(amplitude(m));
    }
    double total() const;
};

/// Jacobi-Anger weights A_m = J_m(D), truncated at |J_m| < 1e-12.
SidebandWeights bessel_weights(double D);

/// Two tones at p*w0 and q*w0: A_m = sum_{p k1 + q k2 = m} J_k1(D1) J_k2(D2) e^{-i k phi},
/// phi carried by the higher-frequency tone.
SidebandWeights dual_tone_weights(double D1, double D2, double phi, int p, int q);

struct PsbPeak {
    int m = 0;
    double omega_s = 0.0;
    double height = 0.0;
};

/// Local maxima nearest to origin + m*base_omega, one per m, above
/// threshold * max(I). Throws GridTooCoarse below 8 points per base_omega.
std::vector<PsbPeak> find_psb_peaks(const Spectrum &spec, double base_omega, double threshold, double origin = 0.0);

}  // namespace sideband

#endif
