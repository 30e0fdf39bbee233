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

#ifndef SIDEBAND_PATHWAYS_HPP
#define SIDEBAND_PATHWAYS_HPP

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace sideband {

/// Net phonon exchange with each tone plus virtual absorb/emit loop pairs.
struct PhononProcess {
    int net1 = 0;
    int net2 = 0;
    int loops1 = 0;
    int loops2 = 0;
    int order = 0;
    int phase_multiplier = 0;  // net2

    int sideband(int p, int q) const {
        return p * net1 + q * net2;
    }
    auto operator<=>(const PhononProcess &) const = default;
};

/// Every process with p*net1 + q*net2 = m and 1 <= order <= max_order,
/// sorted by (order, net2, net1, loops1). The empty process is not listed.
/// max_order is limited to 8.
std::vector<PhononProcess> enumerate_processes(int m, int p, int q, int max_order = 5);

/// Lowest orders at which a phi-harmonic k can appear in |sum of amplitudes|^2.
struct HarmonicOnset {
    int k = 0;
    int process_order = 0;    // max order of the two interfering processes
    int intensity_order = 0;  // summed order of the two processes
};

struct PeriodicityPrediction {
    int m = 0;
    std::optional<int> min_order;        // lowest enumerated process
    std::optional<int> min_phase_order;  // lowest process with nonzero multiplier
    std::vector<int> harmonics;          // k values, ascending; period 2*pi/k
    std::vector<HarmonicOnset> onsets;   // one per harmonic

    std::vector<double> periods() const;
    bool allows(int k) const;
    const HarmonicOnset *onset(int k) const;
};

/// Cross terms between processes with multipliers a, b oscillate as
/// e^{-i (a - b) phi}. For m = 0 the elastic (order 0) amplitude takes part.
PeriodicityPrediction predict_periodicity(int m, int p, int q, int max_order = 5);

/// Highest process order with a non-negligible amplitude for indices D1, D2:
/// per tone the largest n with |J_n(D)| >= 1e-2, summed and capped at 8.
int reachable_order(double D1, double D2);

/// One row per process: m,net1,net2,loops1,loops2,order,phase_multiplier.
std::string process_table_csv(const std::vector<int> &ms, int p, int q, int max_order);
std::string process_table_json(const std::vector<int> &ms, int p, int q, int max_order);

}  // namespace sideband

#endif
