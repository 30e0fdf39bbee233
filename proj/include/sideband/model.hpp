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

#ifndef SIDEBAND_MODEL_HPP
#define SIDEBAND_MODEL_HPP

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace sideband {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angular frequency in rad/s from an ordinary frequency given in GHz.
constexpr double angular_from_ghz(double f_ghz) {
    return kTwoPi * f_ghz * 1e9;
}
/// Inverse of angular_from_ghz.
constexpr double ghz_from_angular(double omega) {
    return omega / (kTwoPi * 1e9);
}

/// Wraps an angle into [0, 2*pi).
double wrap_phase(double phase);

/// Emitter and drive laser. All rates are angular frequencies (rad/s).
struct EmitterParams {
    double gamma = 0.0;           // spontaneous decay
    double gamma_pd = 0.0;        // pure dephasing
    double rabi = 0.0;            // laser Rabi frequency
    double laser_detuning = 0.0;  // omega_laser - omega_X

    /// Throws UnitError when a field is out of range or not finite.
    void validate() const;
    bool operator==(const EmitterParams &) const = default;
};

/// One coherent modulation tone: shift(t) = amp * cos(omega t + phase).
struct SawTone {
    double omega = 0.0;
    double amp = 0.0;
    double phase = 0.0;

    double modulation_index() const {
        return amp / omega;
    }
    bool operator==(const SawTone &) const = default;
};

/// Lorentzian detection filter; time kernel K(t) = exp(-delta_e |t|).
struct FilterSpec {
    double delta_e = angular_from_ghz(0.41);

    void validate() const;
    bool operator==(const FilterSpec &) const = default;
};

/// Zero, one or two commensurate tones sharing a base frequency.
class ModulationProgram {
   public:
    /// Empty program (no modulation, no base frequency).
    ModulationProgram() = default;

    std::span<const SawTone> tones() const {
        return tones_;
    }
    std::span<const int> harmonics() const {
        return harmonics_;
    }
    std::size_t size() const {
        return tones_.size();
    }
    bool empty() const {
        return tones_.empty();
    }
    /// Base angular frequency; 0 for an empty program.
    double base_omega() const {
        return base_omega_;
    }
    /// 2*pi/base_omega, or 0 for an empty program.
    double period() const;

    /// Index of the tone with the larger frequency (0 for single tone).
    std::size_t highest_tone() const;

    /// Copy with tone i's phase replaced (wrapped into [0, 2*pi)).
    ModulationProgram with_phase(std::size_t i, double phase) const;

    bool operator==(const ModulationProgram &) const = default;

   private:
    friend ModulationProgram validate_program(std::vector<SawTone> tones, double base_omega);

    std::vector<SawTone> tones_;
    std::vector<int> harmonics_;
    double base_omega_ = 0.0;
};

/// Builds a program, checking that every tone is an integer multiple of
/// base_omega to 1e-12 relative. Throws CommensurabilityError otherwise.
/// With no tones base_omega may be 0.
ModulationProgram validate_program(std::vector<SawTone> tones, double base_omega);

/// Convenience: single tone with modulation index D, base frequency = omega.
ModulationProgram single_tone(double omega, double D, double phase = 0.0);

/// Convenience: two tones at p*omega0 and q*omega0 with indices D1, D2.
/// phi is applied to the higher-frequency tone.
ModulationProgram two_tone(double omega0, int p, double D1, int q, double D2, double phi);

/// Transition-energy shift Delta E(t)/hbar = sum_i amp_i cos(omega_i t + phase_i).
double instantaneous_shift(const ModulationProgram &prog, double t);

/// Period used for time averages: T of the program, or 2*pi/gamma when empty.
double effective_period(const EmitterParams &params, const ModulationProgram &prog);

}  // namespace sideband

#endif
