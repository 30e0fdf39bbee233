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
#include <cstdio>
#include <set>
#include <string>

#include "sideband/errors.hpp"
#include "sideband/run_config.hpp"
#include "sideband/sweeps.hpp"

namespace sideband {

using nlohmann::json;

namespace {

struct KindName {
    RunKind kind;
    const char *name;
};
constexpr KindName kKinds[] = {
    {RunKind::kSpectrum, "spectrum"},       {RunKind::kG2, "g2"},   {RunKind::kPhaseSweep, "phase-sweep"},
    {RunKind::kDetuningMap, "detuning-map"}, {RunKind::kFan, "fan"}, {RunKind::kPathways, "pathways"},
};

// Reads one JSON object, remembering which keys were consumed.
class Reader {
   public:
    Reader(const json &j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            throw SchemaError(path_ + ": expected an object");
        }
    }

    std::string key_path(const char *key) const {
        return path_ + "." + key;
    }

    const json *get(const char *key) {
        used_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end() || it->is_null()) {
            return nullptr;
        }
        return &*it;
    }

    std::optional<double> number(const char *key) {
        const json *v = get(key);
        if (!v) {
            return std::nullopt;
        }
        if (!v->is_number()) {
            throw SchemaError(key_path(key) + ": expected a number");
        }
        return v->get<double>();
    }

    std::optional<int> integer(const char *key) {
        const json *v = get(key);
        if (!v) {
            return std::nullopt;
        }
        if (!v->is_number_integer()) {
            throw SchemaError(key_path(key) + ": expected an integer");
        }
        return v->get<int>();
    }

    std::optional<bool> boolean(const char *key) {
        const json *v = get(key);
        if (!v) {
            return std::nullopt;
        }
        if (!v->is_boolean()) {
            throw SchemaError(key_path(key) + ": expected true or false");
        }
        return v->get<bool>();
    }

    std::optional<std::string> string(const char *key) {
        const json *v = get(key);
        if (!v) {
            return std::nullopt;
        }
        if (!v->is_string()) {
            throw SchemaError(key_path(key) + ": expected a string");
        }
        return v->get<std::string>();
    }

    std::vector<double> numbers(const char *key) {
        const json *v = get(key);
        std::vector<double> out;
        if (!v) {
            return out;
        }
        if (!v->is_array()) {
            throw SchemaError(key_path(key) + ": expected an array of numbers");
        }
        for (const auto &e : *v) {
            if (!e.is_number()) {
                throw SchemaError(key_path(key) + ": expected an array of numbers");
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!used_.count(it.key())) {
                throw SchemaError("unknown key '" + path_ + "." + it.key() + "'");
            }
        }
    }

   private:
    const json &j_;
    std::string path_;
    std::set<std::string> used_;
};

double require_positive(std::optional<double> v, const std::string &path) {
    if (!v) {
        throw SchemaError("missing key '" + path + "'");
    }
    if (!(*v > 0)) {
        throw UnitError(path + " must be positive");
    }
    return *v;
}

double require_nonneg(double v, const std::string &path) {
    if (!(v >= 0)) {
        throw UnitError(path + " must be non-negative");
    }
    return v;
}

// Smallest base frequency of which all tones are integer multiples.
double infer_base(const std::vector<ToneSpec> &tones) {
    double lo = tones[0].freq_GHz;
    for (const auto &t : tones) {
        lo = std::min(lo, t.freq_GHz);
    }
    for (int n = 1; n <= 64; ++n) {
        double base = lo / n;
        bool ok = true;
        for (const auto &t : tones) {
            double r = t.freq_GHz / base;
            if (std::abs(r - std::round(r)) > 1e-9 * r) {
                ok = false;
            }
        }
        if (ok) {
            return base;
        }
    }
    throw CommensurabilityError("tones share no base frequency with a small integer ratio");
}

bool needs_emitter(RunKind k) {
    return k != RunKind::kPathways;
}

}  // namespace

const char *kind_name(RunKind kind) {
    for (const auto &k : kKinds) {
        if (k.kind == kind) {
            return k.name;
        }
    }
    return "unknown";
}

RunKind kind_from_name(const std::string &name) {
    for (const auto &k : kKinds) {
        if (name == k.name) {
            return k.kind;
        }
    }
    throw SchemaError("unknown kind '" + name + "'");
}

RunConfig parse_config(const std::string &text, std::optional<RunKind> kind_override) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    Reader root(doc, "$");
    RunConfig c;

    if (auto v = root.integer("schema_version")) {
        if (*v != 1) {
            throw SchemaError("$.schema_version: unsupported version " + std::to_string(*v));
        }
    }
    if (auto k = root.string("kind")) {
        c.kind = kind_from_name(*k);
        if (kind_override && *kind_override != c.kind) {
            throw SchemaError("$.kind: config says '" + *k + "' but '" + kind_name(*kind_override) +
                              "' was requested");
        }
    } else if (kind_override) {
        c.kind = *kind_override;
    }
    const bool physics = needs_emitter(c.kind);

    auto gamma = root.number("gamma_GHz");
    auto rabi = root.number("rabi_GHz");
    if (physics || gamma) {
        c.gamma_GHz = require_positive(gamma, "$.gamma_GHz");
    }
    if (physics && !rabi) {
        throw SchemaError("missing key '$.rabi_GHz'");
    }
    c.rabi_GHz = require_nonneg(rabi.value_or(0.0), "$.rabi_GHz");
    c.gamma_pd_GHz = require_nonneg(root.number("gamma_pd_GHz").value_or(0.0), "$.gamma_pd_GHz");
    c.laser_detuning = root.number("laser_detuning").value_or(0.0);
    c.laser_detuning_units = root.string("laser_detuning_units").value_or("GHz");
    if (c.laser_detuning_units != "GHz" && c.laser_detuning_units != "omega_saw") {
        throw SchemaError("$.laser_detuning_units: expected \"GHz\" or \"omega_saw\"");
    }
    c.filter_GHz = root.number("filter_GHz").value_or(0.41);
    if (!(c.filter_GHz > 0)) {
        throw UnitError("$.filter_GHz must be positive");
    }

    if (const json *tones = root.get("tones")) {
        if (!tones->is_array()) {
            throw SchemaError("$.tones: expected an array");
        }
        for (std::size_t i = 0; i < tones->size(); ++i) {
            std::string path = "$.tones[" + std::to_string(i) + "]";
            Reader r((*tones)[i], path);
            ToneSpec t;
            t.freq_GHz = require_positive(r.number("freq_GHz"), path + ".freq_GHz");
            t.D = r.number("D");
            t.delta_GHz = r.number("delta_GHz");
            if (t.D.has_value() == t.delta_GHz.has_value()) {
                throw SchemaError(path + ": exactly one of D or delta_GHz is required");
            }
            if (t.D) {
                require_nonneg(*t.D, path + ".D");
            } else {
                require_nonneg(*t.delta_GHz, path + ".delta_GHz");
            }
            t.phase_rad = r.number("phase_rad").value_or(0.0);
            r.finish();
            c.tones.push_back(t);
        }
    }
    if (c.tones.size() > 2) {
        throw SchemaError("$.tones: at most two tones are supported");
    }
    if (auto b = root.number("base_freq_GHz")) {
        c.base_freq_GHz = require_positive(b, "$.base_freq_GHz");
    } else if (!c.tones.empty()) {
        c.base_freq_GHz = infer_base(c.tones);
    }
    if (c.laser_detuning_units == "omega_saw" && c.base_freq_GHz == 0) {
        throw SchemaError("$.laser_detuning_units: \"omega_saw\" needs a tone or base_freq_GHz");
    }

    // Reference scale for default frequency grids.
    double scale = c.base_freq_GHz;
    if (scale == 0) {
        scale = std::max(c.gamma_GHz, c.rabi_GHz);
    }

    Reader gr = [&]() {
        static const json empty = json::object();
        const json *g = root.get("grids");
        return Reader(g ? *g : empty, "$.grids");
    }();
    c.grids.omega_s_span_GHz = gr.number("omega_s_span_GHz").value_or(6.0 * scale);
    c.grids.omega_s_step_GHz = gr.number("omega_s_step_GHz").value_or(scale / 32.0);
    c.grids.phi_points = gr.integer("phi_points").value_or(64);
    c.grids.tau_max_ns = gr.number("tau_max_ns");
    c.grids.steps_per_period = gr.integer("steps_per_period").value_or(512);
    c.grids.n_t = gr.integer("N_t").value_or(256);
    gr.finish();
    if (physics) {
        require_positive(c.grids.omega_s_step_GHz, "$.grids.omega_s_step_GHz");
        require_nonneg(c.grids.omega_s_span_GHz, "$.grids.omega_s_span_GHz");
    }
    if (c.grids.tau_max_ns) {
        require_positive(c.grids.tau_max_ns, "$.grids.tau_max_ns");
    }
    if (c.grids.phi_points < 2) {
        throw SchemaError("$.grids.phi_points: need at least 2 points");
    }
    if (c.grids.steps_per_period < 32) {
        throw SchemaError("$.grids.steps_per_period: must be at least 32");
    }
    if (c.grids.n_t < 64) {
        throw SchemaError("$.grids.N_t: must be at least 64");
    }

    if (const json *o = root.get("output")) {
        Reader r(*o, "$.output");
        c.output.path = r.string("path").value_or("");
        c.output.format = r.string("format").value_or("csv");
        c.output.normalize = r.boolean("normalize").value_or(false);
        r.finish();
    }
    if (c.output.format != "csv" && c.output.format != "json") {
        throw SchemaError("$.output.format: expected \"csv\" or \"json\"");
    }

    auto section = [&](const char *key, bool wanted) -> std::optional<Reader> {
        const json *s = root.get(key);
        if (!s && !wanted) {
            return std::nullopt;
        }
        static const json empty = json::object();
        return Reader(s ? *s : empty, std::string("$.") + key);
    };

    if (auto r = section("sweep", c.kind == RunKind::kPhaseSweep)) {
        SweepSpec s;
        s.calibrate = r->boolean("calibrate").value_or(true);
        s.phi_span_rad = r->number("phi_span_rad").value_or(kTwoPi);
        r->finish();
        if (!(s.phi_span_rad > 0)) {
            throw UnitError("$.sweep.phi_span_rad must be positive");
        }
        c.sweep = s;
    }
    if (auto r = section("detuning", c.kind == RunKind::kDetuningMap)) {
        DetuningSpec d;
        d.dw_Hz = r->numbers("dw_Hz");
        d.t_start_hours = r->number("t_start_hours").value_or(0.0);
        d.t_stop_hours = r->number("t_stop_hours").value_or(12.0);
        d.t_points = r->integer("t_points").value_or(121);
        d.omega_s_GHz = r->number("omega_s_GHz").value_or(c.laser_detuning_units == "GHz"
                                                             ? c.laser_detuning + c.base_freq_GHz
                                                             : (c.laser_detuning + 1.0) * c.base_freq_GHz);
        d.phi0_rad = r->number("phi0_rad").value_or(0.0);
        d.calibrate = r->boolean("calibrate").value_or(true);
        r->finish();
        if (c.kind == RunKind::kDetuningMap && d.dw_Hz.empty()) {
            throw SchemaError("$.detuning.dw_Hz: at least one detuning is required");
        }
        if (d.t_points < 1 || !(d.t_stop_hours >= d.t_start_hours)) {
            throw SchemaError("$.detuning: invalid time grid");
        }
        c.detuning = d;
    }
    if (auto r = section("fan", c.kind == RunKind::kFan)) {
        FanSpec f;
        f.freqs_GHz = r->numbers("freqs_GHz");
        f.D = require_nonneg(r->number("D").value_or(0.0), "$.fan.D");
        f.scale_D = r->boolean("scale_D").value_or(false);
        for (double v : f.freqs_GHz) {
            if (!(v > 0)) {
                throw UnitError("$.fan.freqs_GHz entries must be positive");
            }
        }
        f.reference_GHz = r->number("reference_GHz").value_or(f.freqs_GHz.empty() ? 0.0 : f.freqs_GHz.front());
        r->finish();
        if (c.kind == RunKind::kFan && f.freqs_GHz.empty()) {
            throw SchemaError("$.fan.freqs_GHz: at least one frequency is required");
        }
        c.fan = f;
    }
    if (auto r = section("pathways", c.kind == RunKind::kPathways)) {
        PathwaysSpec p;
        p.m_min = r->integer("m_min").value_or(-2);
        p.m_max = r->integer("m_max").value_or(2);
        p.p = r->integer("p").value_or(1);
        p.q = r->integer("q").value_or(2);
        p.max_order = r->integer("max_order").value_or(5);
        r->finish();
        if (p.p <= 0 || p.q <= 0 || p.p == p.q) {
            throw SchemaError("$.pathways: p and q must be positive and distinct");
        }
        if (p.max_order < 0 || p.max_order > 8) {
            throw SchemaError("$.pathways.max_order: must lie in [0, 8]");
        }
        if (p.m_max < p.m_min) {
            throw SchemaError("$.pathways: m_max must not be below m_min");
        }
        c.pathways = p;
    }
    if (auto r = section("g2", c.kind == RunKind::kG2)) {
        G2Spec g;
        double auto_tau = c.gamma_GHz > 0 ? 2.0 * std::log(1e8) / angular_from_ghz(c.gamma_GHz) * 1e9 : 0.0;
        g.tau_max_ns = r->number("tau_max_ns").value_or(auto_tau);
        g.irf_ps = r->number("irf_ps");
        g.normalization = r->string("normalization").value_or("mean-squared");
        r->finish();
        if (g.normalization != "mean-squared" && g.normalization != "stationary-product") {
            throw SchemaError("$.g2.normalization: expected \"mean-squared\" or \"stationary-product\"");
        }
        if (c.kind == RunKind::kG2) {
            require_positive(g.tau_max_ns, "$.g2.tau_max_ns");
        }
        if (g.irf_ps) {
            require_positive(g.irf_ps, "$.g2.irf_ps");
        }
        c.g2 = g;
    }
    root.finish();

    if (physics) {
        emitter_from_config(c).validate();
        program_from_config(c);
    }
    return c;
}

json emit_config_json(const RunConfig &c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["kind"] = kind_name(c.kind);
    j["gamma_GHz"] = c.gamma_GHz;
    j["gamma_pd_GHz"] = c.gamma_pd_GHz;
    j["rabi_GHz"] = c.rabi_GHz;
    j["laser_detuning"] = c.laser_detuning;
    j["laser_detuning_units"] = c.laser_detuning_units;
    j["tones"] = json::array();
    for (const auto &t : c.tones) {
        json tj;
        tj["freq_GHz"] = t.freq_GHz;
        if (t.D) {
            tj["D"] = *t.D;
        }
        if (t.delta_GHz) {
            tj["delta_GHz"] = *t.delta_GHz;
        }
        tj["phase_rad"] = t.phase_rad;
        j["tones"].push_back(tj);
    }
    if (c.base_freq_GHz > 0) {
        j["base_freq_GHz"] = c.base_freq_GHz;
    }
    j["filter_GHz"] = c.filter_GHz;
    json g;
    g["omega_s_span_GHz"] = c.grids.omega_s_span_GHz;
    g["omega_s_step_GHz"] = c.grids.omega_s_step_GHz;
    g["phi_points"] = c.grids.phi_points;
    if (c.grids.tau_max_ns) {
        g["tau_max_ns"] = *c.grids.tau_max_ns;
    }
    g["steps_per_period"] = c.grids.steps_per_period;
    g["N_t"] = c.grids.n_t;
    j["grids"] = g;
    j["output"] = {{"path", c.output.path}, {"format", c.output.format}, {"normalize", c.output.normalize}};
    if (c.sweep) {
        j["sweep"] = {{"calibrate", c.sweep->calibrate}, {"phi_span_rad", c.sweep->phi_span_rad}};
    }
    if (c.detuning) {
        const auto &d = *c.detuning;
        j["detuning"] = {{"dw_Hz", d.dw_Hz},
                         {"t_start_hours", d.t_start_hours},
                         {"t_stop_hours", d.t_stop_hours},
                         {"t_points", d.t_points},
                         {"omega_s_GHz", d.omega_s_GHz},
                         {"phi0_rad", d.phi0_rad},
                         {"calibrate", d.calibrate}};
    }
    if (c.fan) {
        const auto &f = *c.fan;
        j["fan"] = {{"freqs_GHz", f.freqs_GHz}, {"D", f.D}, {"scale_D", f.scale_D}, {"reference_GHz", f.reference_GHz}};
    }
    if (c.pathways) {
        const auto &p = *c.pathways;
        j["pathways"] = {{"m_min", p.m_min}, {"m_max", p.m_max}, {"p", p.p}, {"q", p.q}, {"max_order", p.max_order}};
    }
    if (c.g2) {
        json gj = {{"tau_max_ns", c.g2->tau_max_ns}, {"normalization", c.g2->normalization}};
        if (c.g2->irf_ps) {
            gj["irf_ps"] = *c.g2->irf_ps;
        }
        j["g2"] = gj;
    }
    return j;
}

std::string emit_config(const RunConfig &config) {
    return emit_config_json(config).dump(2) + "\n";
}

std::string config_hash(const RunConfig &config) {
    return sha256_hex(emit_config_json(config).dump());
}

EmitterParams emitter_from_config(const RunConfig &c) {
    EmitterParams p;
    p.gamma = angular_from_ghz(c.gamma_GHz);
    p.gamma_pd = angular_from_ghz(c.gamma_pd_GHz);
    p.rabi = angular_from_ghz(c.rabi_GHz);
    double det = c.laser_detuning_units == "GHz" ? c.laser_detuning : c.laser_detuning * c.base_freq_GHz;
    p.laser_detuning = angular_from_ghz(det);
    return p;
}

ModulationProgram program_from_config(const RunConfig &c) {
    std::vector<SawTone> tones;
    for (const auto &t : c.tones) {
        SawTone s;
        s.omega = angular_from_ghz(t.freq_GHz);
        s.amp = t.D ? *t.D * s.omega : angular_from_ghz(*t.delta_GHz);
        s.phase = t.phase_rad;
        tones.push_back(s);
    }
    return validate_program(std::move(tones), angular_from_ghz(c.base_freq_GHz));
}

}  // namespace sideband
