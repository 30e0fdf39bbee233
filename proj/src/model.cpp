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

#include "sideband/model.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "sideband/errors.hpp"

namespace sideband {

namespace {

std::string fmt_ghz(double omega) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g GHz", ghz_from_angular(omega));
    return buf;
}

}  // namespace

double wrap_phase(double phase) {
    double r = std::fmod(phase, kTwoPi);
    if (r < 0) {
        r += kTwoPi;
    }
    if (r >= kTwoPi) {
        r = 0;
    }
    return r;
}

void EmitterParams::validate() const {
    auto check = [](double v, const char *name, bool strict) {
        if (!std::isfinite(v)) {
            throw UnitError(std::string(name) + " must be finite");
        }
        if (strict ? !(v > 0) : !(v >= 0)) {
            throw UnitError(std::string(name) + (strict ? " must be positive" : " must be non-negative"));
        }
    };
    check(gamma, "gamma", true);
    check(gamma_pd, "gamma_pd", false);
    check(rabi, "rabi", false);
    if (!std::isfinite(laser_detuning)) {
        throw UnitError("laser_detuning must be finite");
    }
}

void FilterSpec::validate() const {
    if (!std::isfinite(delta_e) || !(delta_e > 0)) {
        throw UnitError("filter delta_e must be positive and finite");
    }
}

double ModulationProgram::period() const {
    return base_omega_ > 0 ? kTwoPi / base_omega_ : 0.0;
}

std::size_t ModulationProgram::highest_tone() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < tones_.size(); ++i) {
        if (tones_[i].omega > tones_[best].omega) {
            best = i;
        }
    }
    return best;
}

ModulationProgram ModulationProgram::with_phase(std::size_t i, double phase) const {
    ModulationProgram out = *this;
    out.tones_.at(i).phase = wrap_phase(phase);
    return out;
}

ModulationProgram validate_program(std::vector<SawTone> tones, double base_omega) {
    if (tones.size() > 2) {
        throw CommensurabilityError("at most two tones are supported");
    }
    if (!std::isfinite(base_omega) || base_omega < 0 || (!tones.empty() && base_omega == 0)) {
        throw UnitError("base frequency must be positive and finite");
    }
    ModulationProgram prog;
    prog.base_omega_ = base_omega;
    for (std::size_t i = 0; i < tones.size(); ++i) {
        SawTone t = tones[i];
        if (!std::isfinite(t.omega) || !(t.omega > 0)) {
            throw UnitError("tone " + std::to_string(i) + ": frequency must be positive");
        }
        if (!std::isfinite(t.amp) || t.amp < 0) {
            throw UnitError("tone " + std::to_string(i) + ": amplitude must be non-negative");
        }
        if (!std::isfinite(t.phase)) {
            throw UnitError("tone " + std::to_string(i) + ": phase must be finite");
        }
        double ratio = t.omega / base_omega;
        double n = std::round(ratio);
        if (n < 1 || std::abs(ratio - n) > 1e-12 * ratio) {
            throw CommensurabilityError("tone " + std::to_string(i) + " at " + fmt_ghz(t.omega) +
                                        " is not an integer multiple of base frequency " + fmt_ghz(base_omega));
        }
        int h = static_cast<int>(n);
        for (int prev : prog.harmonics_) {
            if (prev == h) {
                throw CommensurabilityError("tone " + std::to_string(i) + " at " + fmt_ghz(t.omega) +
                                            " repeats harmonic " + std::to_string(h));
            }
        }
        t.phase = wrap_phase(t.phase);
        prog.tones_.push_back(t);
        prog.harmonics_.push_back(h);
    }
    return prog;
}

ModulationProgram single_tone(double omega, double D, double phase) {
    return validate_program({SawTone{omega, D * omega, phase}}, omega);
}

ModulationProgram two_tone(double omega0, int p, double D1, int q, double D2, double phi) {
    double w1 = p * omega0;
    double w2 = q * omega0;
    double phi1 = w1 > w2 ? phi : 0.0;
    double phi2 = w1 > w2 ? 0.0 : phi;
    return validate_program({SawTone{w1, D1 * w1, phi1}, SawTone{w2, D2 * w2, phi2}}, omega0);
}

double instantaneous_shift(const ModulationProgram &prog, double t) {
    double s = 0.0;
    for (const SawTone &tone : prog.tones()) {
        s += tone.amp * std::cos(tone.omega * t + tone.phase);
    }
    return s;
}

double effective_period(const EmitterParams &params, const ModulationProgram &prog) {
    if (prog.base_omega() > 0) {
        return prog.period();
    }
    return kTwoPi / params.gamma;
}

}  // namespace sideband
