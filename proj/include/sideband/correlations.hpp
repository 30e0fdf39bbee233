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

#ifndef SIDEBAND_CORRELATIONS_HPP
#define SIDEBAND_CORRELATIONS_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "sideband/dynamics.hpp"
#include "sideband/model.hpp"

namespace sideband {

/// G(t_k, t_k + tau_j) on the cycle grid; lags share the grid step T/N_t.
struct CorrelationGrid {
    double period = 0.0;
    double step = 0.0;
    double laser_detuning = 0.0;
    double gamma = 0.0;
    std::vector<double> base_times;
    std::vector<double> lags;
    /// values(k, j) = G(t_k, t_k + lags[j]).
    Eigen::MatrixXcd values;
    /// <sigma_-> = rho_eg on the base grid, for the factorized tail.
    std::vector<std::complex<double>> sigma_minus;
    /// rho_ee on the base grid.
    std::vector<double> excited;
    /// max_k |G(t_k, tau_max) - factorized|.
    double tail_residual = 0.0;
    /// Period averages of dG/dtau at tau = 0: full and coherent (factorized) parts.
    std::complex<double> slope0 = 0.0;
    std::complex<double> coherent_slope0 = 0.0;

    std::size_t rows() const {
        return base_times.size();
    }
    std::size_t cols() const {
        return lags.size();
    }
    double tau_max() const {
        return lags.empty() ? 0.0 : lags.back();
    }
    /// <sigma_+>(t_k) <sigma_->(t_k + j*step) for any j >= 0.
    std::complex<double> factorized(std::size_t k, std::size_t j) const;
    /// G on the grid, falling back to the factorized value past tau_max.
    std::complex<double> value_or_tail(std::size_t k, std::size_t j) const;
};

struct CorrelationOptions {
    std::size_t threads = 1;
    double tail_tolerance = 1e-6;
};

/// Smallest lag window that resolves both the emitter and the filter.
double default_tau_max(const EmitterParams &params, const FilterSpec &filter);

/// G1(t, t+tau) = tr[sigma_- V(t+tau, t){rho(t) sigma_+}] by quantum regression.
/// Requires tau_max >= 10/gamma. Throws TailNotDecayed.
CorrelationGrid g1(const PeriodicState &cycle, double tau_max, const CorrelationOptions &opts = {});

enum class G2Normalization {
    kMeanSquared,       // divide by (t-average of rho_ee)^2
    kStationaryProduct  // divide by t-average of rho_ee(t) rho_ee(t+tau)
};

struct G2Curve {
    std::vector<double> tau;  // symmetric, -tau_max .. tau_max
    std::vector<double> g2;
};

/// Period-averaged, normalized G2(tau) from regression of sigma_- rho sigma_+.
G2Curve g2_normalized(const PeriodicState &cycle, double tau_max,
                      G2Normalization norm = G2Normalization::kMeanSquared, const CorrelationOptions &opts = {});

/// Convolves with a unit-area Gaussian of standard deviation sigma (seconds).
G2Curve convolve_gaussian_irf(const G2Curve &curve, double sigma);

}  // namespace sideband

#endif
