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

#include "sideband/pathways.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "json.hpp"
#include "sideband/errors.hpp"
#include "sideband/model.hpp"
#include "sideband/spectrum.hpp"

namespace sideband {

namespace {

void check_args(int p, int q, int max_order) {
    if (p <= 0 || q <= 0 || p == q) {
        throw UnitError("harmonics p, q must be positive and distinct");
    }
    if (max_order < 0 || max_order > 8) {
        throw UnitError("max_order must lie in [0, 8]");
    }
}

}  // namespace

std::vector<PhononProcess> enumerate_processes(int m, int p, int q, int max_order) {
    check_args(p, q, max_order);
    std::vector<PhononProcess> out;
    for (int net2 = -max_order; net2 <= max_order; ++net2) {
        int rest = m - q * net2;
        if (rest % p != 0) {
            continue;
        }
        int net1 = rest / p;
        int base = std::abs(net1) + std::abs(net2);
        for (int loops = 0; base + 2 * loops <= max_order; ++loops) {
            if (base + 2 * loops == 0) {
                continue;
            }
            for (int l1 = 0; l1 <= loops; ++l1) {
                PhononProcess proc;
                proc.net1 = net1;
                proc.net2 = net2;
                proc.loops1 = l1;
                proc.loops2 = loops - l1;
                proc.order = base + 2 * loops;
                proc.phase_multiplier = net2;
                out.push_back(proc);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const PhononProcess &a, const PhononProcess &b) {
        if (a.order != b.order) return a.order < b.order;
        if (a.net2 != b.net2) return a.net2 < b.net2;
        if (a.net1 != b.net1) return a.net1 < b.net1;
        return a.loops1 < b.loops1;
    });
    return out;
}

std::vector<double> PeriodicityPrediction::periods() const {
    std::vector<double> out;
    for (int k : harmonics) {
        out.push_back(kTwoPi / k);
    }
    return out;
}

bool PeriodicityPrediction::allows(int k) const {
    return k == 0 || std::find(harmonics.begin(), harmonics.end(), std::abs(k)) != harmonics.end();
}

const HarmonicOnset *PeriodicityPrediction::onset(int k) const {
    for (const auto &o : onsets) {
        if (o.k == k) {
            return &o;
        }
    }
    return nullptr;
}

PeriodicityPrediction predict_periodicity(int m, int p, int q, int max_order) {
    std::vector<PhononProcess> procs = enumerate_processes(m, p, q, max_order);
    PeriodicityPrediction pred;
    pred.m = m;
    for (const auto &pr : procs) {
        if (!pred.min_order) {
            pred.min_order = pr.order;
        }
        if (pr.phase_multiplier != 0 && !pred.min_phase_order) {
            pred.min_phase_order = pr.order;
        }
    }
    // Amplitudes taking part in the intensity: the enumerated processes, and
    // for the zero-phonon line the elastic one.
    std::vector<std::pair<int, int>> amps;  // (multiplier, order)
    if (m == 0) {
        amps.emplace_back(0, 0);
    }
    for (const auto &pr : procs) {
        amps.emplace_back(pr.phase_multiplier, pr.order);
    }
    std::map<int, HarmonicOnset> found;
    for (std::size_t a = 0; a < amps.size(); ++a) {
        for (std::size_t b = a + 1; b < amps.size(); ++b) {
            int d = std::abs(amps[a].first - amps[b].first);
            if (d == 0) {
                continue;
            }
            int po = std::max(amps[a].second, amps[b].second);
            int io = amps[a].second + amps[b].second;
            auto it = found.find(d);
            if (it == found.end()) {
                found[d] = HarmonicOnset{d, po, io};
            } else {
                it->second.process_order = std::min(it->second.process_order, po);
                it->second.intensity_order = std::min(it->second.intensity_order, io);
            }
        }
    }
    for (const auto &[k, onset] : found) {
        pred.harmonics.push_back(k);
        pred.onsets.push_back(onset);
    }
    return pred;
}

int reachable_order(double D1, double D2) {
    auto extent = [](double D) {
        int n = 0;
        for (int k = 1; k <= 8; ++k) {
            if (std::abs(bessel_j(k, D)) >= 1e-2) {
                n = k;
            }
        }
        return n;
    };
    return std::min(8, extent(D1) + extent(D2));
}

std::string process_table_csv(const std::vector<int> &ms, int p, int q, int max_order) {
    std::ostringstream os;
    os << "m,net1,net2,loops1,loops2,order,phase_multiplier\n";
    for (int m : ms) {
        for (const auto &pr : enumerate_processes(m, p, q, max_order)) {
            os << m << ',' << pr.net1 << ',' << pr.net2 << ',' << pr.loops1 << ',' << pr.loops2 << ','
               << pr.order << ',' << pr.phase_multiplier << '\n';
        }
    }
    return os.str();
}

std::string process_table_json(const std::vector<int> &ms, int p, int q, int max_order) {
    nlohmann::json rows = nlohmann::json::array();
    for (int m : ms) {
        for (const auto &pr : enumerate_processes(m, p, q, max_order)) {
            rows.push_back({{"m", m},
                            {"net1", pr.net1},
                            {"net2", pr.net2},
                            {"loops1", pr.loops1},
                            {"loops2", pr.loops2},
                            {"order", pr.order},
                            {"phase_multiplier", pr.phase_multiplier}});
        }
    }
    nlohmann::json doc = {{"p", p}, {"q", q}, {"max_order", max_order}, {"processes", rows}};
    return doc.dump(2) + "\n";
}

}  // namespace sideband
