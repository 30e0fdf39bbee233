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

#ifndef SIDEBAND_DYNAMICS_HPP
#define SIDEBAND_DYNAMICS_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "sideband/model.hpp"

namespace sideband {

using cplx = std::complex<double>;

/// Operator on the two-level space flattened as (gg, ge, eg, ee), where
/// X = gg|g><g| + ge|g><e| + eg|e><g| + ee|e><e|. Density matrices and the
/// non-Hermitian regression states share this layout.
using OpVec = Eigen::Vector4cd;
/// Linear map on OpVec.
using SuperOp = Eigen::Matrix4cd;

/// 2x2 state of the emitter. <sigma_-> = eg, <sigma_+> = ge.
class DensityMatrix {
   public:
    DensityMatrix() : v_(OpVec::Zero()) {
        v_(0) = 1.0;
    }
    explicit DensityMatrix(const OpVec &v) : v_(v) {
    }

    static DensityMatrix ground();
    static DensityMatrix excited();

    cplx gg() const {
        return v_(0);
    }
    cplx ge() const {
        return v_(1);
    }
    cplx eg() const {
        return v_(2);
    }
    cplx ee() const {
        return v_(3);
    }
    const OpVec &vec() const {
        return v_;
    }

    cplx trace() const {
        return v_(0) + v_(3);
    }
    /// max |rho - rho^dagger| entry.
    double hermiticity_error() const;
    /// Smallest eigenvalue of the Hermitian part.
    double min_eigenvalue() const;

   private:
    OpVec v_;
};

/// Half the trace norm of a - b.
double trace_distance(const DensityMatrix &a, const DensityMatrix &b);

/// Lindblad generator at time t in the laser frame:
/// H = -delta(t) P_e + (rabi/2)(sigma_+ + sigma_-), delta(t) = laser_detuning - shift(t),
/// plus gamma D[sigma_-] and gamma_pd D[P_e].
SuperOp generator(const EmitterParams &params, const ModulationProgram &prog, double t);

/// One RK4 step of length h starting at t, as a matrix.
SuperOp rk4_step(const EmitterParams &params, const ModulationProgram &prog, double t, double h);

/// Product of `steps` RK4 steps covering [t0, t1].
SuperOp rk4_propagator(const EmitterParams &params, const ModulationProgram &prog, double t0, double t1,
                       std::size_t steps);

struct PropagateOptions {
    std::size_t steps_per_period = 512;
    double tolerance = 1e-8;
    int max_doublings = 8;
};

struct Propagation {
    DensityMatrix rho;
    double doubling_error = 0.0;  // max entry change at the accepted refinement
    std::size_t steps = 0;
};

/// Evolves rho0 from t0 to t1, refining the step until step doubling changes
/// no entry by more than the tolerance. Throws ToleranceNotMet.
Propagation propagate_checked(const DensityMatrix &rho0, double t0, double t1, const EmitterParams &params,
                              const ModulationProgram &prog, const PropagateOptions &opts = {});

DensityMatrix propagate(const DensityMatrix &rho0, double t0, double t1, const EmitterParams &params,
                        const ModulationProgram &prog, std::size_t steps_per_period = 512);

struct CycleOptions {
    std::size_t steps_per_period = 512;
    double integration_tolerance = 1e-8;
    int max_doublings = 8;
    double tolerance = 1e-10;
    std::size_t max_periods = 10000;
    std::optional<DensityMatrix> initial;  // ground state if unset
};

/// Driven periodic steady state sampled on N_t uniform points of [0, T).
struct PeriodicState {
    EmitterParams params;
    ModulationProgram program;
    double period = 0.0;
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    /// step_maps[k] propagates from times[k] to times[k] + period / N_t.
    std::vector<SuperOp> step_maps;
    std::size_t substeps = 0;  // RK4 steps per grid interval
    double residual = 0.0;     // trace distance between the last two periods
    double doubling_error = 0.0;
    std::size_t periods = 0;  // iterations of the period map

    std::size_t size() const {
        return times.size();
    }
    double step() const {
        return period / static_cast<double>(times.size());
    }
};

PeriodicState limit_cycle(const EmitterParams &params, const ModulationProgram &prog, std::size_t n_t,
                          const CycleOptions &opts = {});

}  // namespace sideband

#endif
