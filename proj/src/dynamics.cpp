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

#include "sideband/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sideband/errors.hpp"

namespace sideband {

namespace {

// Eigenvalues of the Hermitian part of a 2x2 operator stored as OpVec.
void hermitian_eigs(const OpVec &v, double *lo, double *hi) {
    double a = v(0).real();
    double d = v(3).real();
    cplx off = 0.5 * (v(1) + std::conj(v(2)));
    double mid = 0.5 * (a + d);
    double rad = std::hypot(0.5 * (a - d), std::abs(off));
    *lo = mid - rad;
    *hi = mid + rad;
}

double max_abs_entry(const SuperOp &m) {
    return m.cwiseAbs().maxCoeff();
}

std::size_t steps_for(double duration, double period, std::size_t steps_per_period) {
    double n = std::ceil(duration / period * static_cast<double>(steps_per_period) - 1e-9);
    return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

}  // namespace

DensityMatrix DensityMatrix::ground() {
    OpVec v = OpVec::Zero();
    v(0) = 1.0;
    return DensityMatrix(v);
}

DensityMatrix DensityMatrix::excited() {
    OpVec v = OpVec::Zero();
    v(3) = 1.0;
    return DensityMatrix(v);
}

double DensityMatrix::hermiticity_error() const {
    double e = std::max(std::abs(v_(0).imag()), std::abs(v_(3).imag()));
    return std::max(e, std::abs(v_(1) - std::conj(v_(2))));
}

double DensityMatrix::min_eigenvalue() const {
    double lo, hi;
    hermitian_eigs(v_, &lo, &hi);
    return lo;
}

double trace_distance(const DensityMatrix &a, const DensityMatrix &b) {
    double lo, hi;
    hermitian_eigs(a.vec() - b.vec(), &lo, &hi);
    return 0.5 * (std::abs(lo) + std::abs(hi));
}

SuperOp generator(const EmitterParams &params, const ModulationProgram &prog, double t) {
    const double delta = params.laser_detuning - instantaneous_shift(prog, t);
    const double g = params.gamma;
    const double big_gamma = 0.5 * (params.gamma + params.gamma_pd);
    const cplx a(0.0, 0.5 * params.rabi);
    const cplx i_delta(0.0, delta);
    SuperOp m;
    // columns: gg, ge, eg, ee
    m << 0.0, a, -a, g,
         a, -i_delta - big_gamma, 0.0, -a,
         -a, 0.0, i_delta - big_gamma, a,
         0.0, -a, a, -g;
    return m;
}

SuperOp rk4_step(const EmitterParams &params, const ModulationProgram &prog, double t, double h) {
    const SuperOp id = SuperOp::Identity();
    const SuperOp l0 = generator(params, prog, t);
    const SuperOp lm = generator(params, prog, t + 0.5 * h);
    const SuperOp l1 = generator(params, prog, t + h);
    const SuperOp k1 = l0;
    const SuperOp k2 = lm * (id + (0.5 * h) * k1);
    const SuperOp k3 = lm * (id + (0.5 * h) * k2);
    const SuperOp k4 = l1 * (id + h * k3);
    return id + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

SuperOp rk4_propagator(const EmitterParams &params, const ModulationProgram &prog, double t0, double t1,
                       std::size_t steps) {
    SuperOp p = SuperOp::Identity();
    const double h = (t1 - t0) / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        p = rk4_step(params, prog, t0 + h * static_cast<double>(i), h) * p;
    }
    return p;
}

Propagation propagate_checked(const DensityMatrix &rho0, double t0, double t1, const EmitterParams &params,
                              const ModulationProgram &prog, const PropagateOptions &opts) {
    params.validate();
    if (!(t1 >= t0)) {
        throw UnitError("propagate: t1 must not precede t0");
    }
    if (opts.steps_per_period < 32) {
        throw UnitError("propagate: steps_per_period must be at least 32");
    }
    Propagation out;
    if (t1 == t0) {
        out.rho = rho0;
        return out;
    }
    const double period = effective_period(params, prog);
    std::size_t n = steps_for(t1 - t0, period, opts.steps_per_period);
    OpVec coarse = rk4_propagator(params, prog, t0, t1, n) * rho0.vec();
    for (int level = 0; level < opts.max_doublings; ++level) {
        n *= 2;
        OpVec fine = rk4_propagator(params, prog, t0, t1, n) * rho0.vec();
        double err = (fine - coarse).cwiseAbs().maxCoeff();
        if (err <= opts.tolerance) {
            out.rho = DensityMatrix(fine);
            out.doubling_error = err;
            out.steps = n;
            return out;
        }
        coarse = fine;
    }
    throw ToleranceNotMet("step doubling did not reach tolerance after " + std::to_string(opts.max_doublings) +
                          " refinements");
}

DensityMatrix propagate(const DensityMatrix &rho0, double t0, double t1, const EmitterParams &params,
                        const ModulationProgram &prog, std::size_t steps_per_period) {
    PropagateOptions opts;
    opts.steps_per_period = steps_per_period;
    return propagate_checked(rho0, t0, t1, params, prog, opts).rho;
}

PeriodicState limit_cycle(const EmitterParams &params, const ModulationProgram &prog, std::size_t n_t,
                          const CycleOptions &opts) {
    params.validate();
    if (n_t < 64) {
        throw UnitError("limit_cycle: N_t must be at least 64");
    }
    if (opts.steps_per_period < 32) {
        throw UnitError("limit_cycle: steps_per_period must be at least 32");
    }
    PeriodicState cyc;
    cyc.params = params;
    cyc.program = prog;
    cyc.period = effective_period(params, prog);
    const double dt = cyc.period / static_cast<double>(n_t);
    cyc.times.resize(n_t);
    for (std::size_t k = 0; k < n_t; ++k) {
        cyc.times[k] = dt * static_cast<double>(k);
    }

    auto build = [&](std::size_t sub, std::vector<SuperOp> *maps) {
        maps->resize(n_t);
        SuperOp m = SuperOp::Identity();
        for (std::size_t k = 0; k < n_t; ++k) {
            (*maps)[k] = rk4_propagator(params, prog, cyc.times[k], cyc.times[k] + dt, sub);
            m = (*maps)[k] * m;
        }
        return m;
    };

    std::size_t sub = (opts.steps_per_period + n_t - 1) / n_t;
    std::vector<SuperOp> coarse_maps, fine_maps;
    SuperOp coarse = build(sub, &coarse_maps);
    SuperOp period_map;
    bool ok = false;
    for (int level = 0; level < opts.max_doublings; ++level) {
        sub *= 2;
        SuperOp fine = build(sub, &fine_maps);
        double err = max_abs_entry(fine - coarse);
        if (err <= opts.integration_tolerance) {
            cyc.doubling_error = err;
            ok = true;
            period_map = fine;
            break;
        }
        coarse = fine;
        coarse_maps.swap(fine_maps);
    }
    if (!ok) {
        throw ToleranceNotMet("period map step doubling did not reach tolerance after " +
                              std::to_string(opts.max_doublings) + " refinements");
    }
    cyc.substeps = sub;
    cyc.step_maps = std::move(fine_maps);

    DensityMatrix rho = opts.initial.value_or(DensityMatrix::ground());
    bool converged = false;
    for (std::size_t it = 1; it <= opts.max_periods; ++it) {
        DensityMatrix next(period_map * rho.vec());
        double r = trace_distance(next, rho);
        rho = next;
        if (r <= opts.tolerance) {
            cyc.residual = r;
            cyc.periods = it;
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NoConvergence("limit cycle not reached after " + std::to_string(opts.max_periods) + " periods");
    }
    cyc.states.resize(n_t);
    cyc.states[0] = rho;
    for (std::size_t k = 1; k < n_t; ++k) {
        cyc.states[k] = DensityMatrix(cyc.step_maps[k - 1] * cyc.states[k - 1].vec());
    }
    return cyc;
}

}  // namespace sideband
