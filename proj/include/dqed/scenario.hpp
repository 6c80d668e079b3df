// Copyright 2026 The dqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqed/common.hpp"
#include "dqed/drive.hpp"
#include "dqed/model.hpp"

namespace dqed {

struct PhaseSpaceRequest {
    enum class Which { Q, W, Both };
    Which which = Which::Both;
    double re_min = -3.0, re_max = 3.0, im_min = -3.0, im_max = 3.0;
    int n_re = 41, n_im = 41;
    std::vector<double> snapshot_times;  // empty = default [t_max]
};

struct Scenario {
    enum class FieldInit { Coherent, Fock };
    enum class Method { Analytic, Oracle, Both };

    Truncation truncation{32};
    ModelParams params;
    DriveSpec drive;
    FieldInit field_kind = FieldInit::Coherent;
    Complex alpha{0.0, 0.0};
    int fock_n = 0;
    Complex c_e{1.0, 0.0}, c_g{0.0, 0.0};
    double t_max = 1.0;
    int steps = 1;
    std::vector<std::string> observables;
    std::optional<PhaseSpaceRequest> phase_space;
    Method method = Method::Analytic;

    /// Snapshot times resolved to the default [t_max] when unspecified.
    std::vector<double> snapshot_times() const {
        if (phase_space && !phase_space->snapshot_times.empty())
            return phase_space->snapshot_times;
        return {t_max};
    }
};

inline const std::set<std::string>& known_observables() {
    static const std::set<std::string> names{"inversion", "mean_photon", "purity", "coherence",
                                             "trace_check"};
    return names;
}

inline std::string method_name(Scenario::Method m) {
    switch (m) {
        case Scenario::Method::Analytic: return "analytic";
        case Scenario::Method::Oracle: return "oracle";
        case Scenario::Method::Both: return "both";
    }
    return "?";
}

inline Scenario::Method parse_method(const std::string& s, const std::string& field) {
    if (s == "analytic") return Scenario::Method::Analytic;
    if (s == "oracle") return Scenario::Method::Oracle;
    if (s == "both") return Scenario::Method::Both;
    throw ScenarioError(field, field + ": expected analytic|oracle|both, got \"" + s + "\"");
}

namespace detail {

using json = nlohmann::json;

inline const json& require_field(const json& j, const std::string& key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw ScenarioError(path + key, path + key + ": missing required field");
    return *it;
}

inline double as_number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ScenarioError(field, field + ": expected a number");
    return j.get<double>();
}

inline int as_int(const json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ScenarioError(field, field + ": expected an integer");
    return j.get<int>();
}

/// Complex values are [re, im]; a bare number is accepted as purely real.
inline Complex as_complex(const json& j, const std::string& field) {
    if (j.is_number()) return Complex{j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex{j[0].get<double>(), j[1].get<double>()};
    throw ScenarioError(field, field + ": expected [re, im] or a real number");
}

inline DriveSpec parse_drive(const json& j) {
    if (!j.is_object()) throw ScenarioError("drive", "drive: expected a tagged object");
    const std::string kind = require_field(j, "kind", "drive.").get<std::string>();
    if (kind == "constant") {
        return DriveSpec::constant(as_complex(require_field(j, "f0", "drive."), "drive.f0"));
    }
    if (kind == "exponential") {
        return DriveSpec::exponential(
            as_complex(require_field(j, "f0", "drive."), "drive.f0"),
            as_complex(require_field(j, "kappa", "drive."), "drive.kappa"));
    }
    if (kind == "sinusoid") {
        return DriveSpec::sinusoid(as_complex(require_field(j, "f0", "drive."), "drive.f0"),
                                   as_number(require_field(j, "omega", "drive."), "drive.omega"),
                                   as_number(require_field(j, "phi", "drive."), "drive.phi"));
    }
    if (kind == "piecewise") {
        const json& arr = require_field(j, "samples", "drive.");
        if (!arr.is_array() || arr.size() < 2)
            throw ScenarioError("drive.samples", "drive.samples: expected >= 2 samples");
        std::vector<DriveSample> samples;
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "drive.samples[" + std::to_string(i) + "]";
            DriveSample s;
            s.t = as_number(require_field(arr[i], "t", path + "."), path + ".t");
            s.f = as_complex(require_field(arr[i], "f", path + "."), path + ".f");
            samples.push_back(s);
        }
        try {
            return DriveSpec::piecewise(std::move(samples));
        } catch (const DomainError& e) {
            throw ScenarioError("drive.samples", std::string("drive.samples: ") + e.what());
        }
    }
    throw ScenarioError("drive.kind",
                        "drive.kind: expected constant|exponential|sinusoid|piecewise, got \"" +
                            kind + "\"");
}

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& j) {
    using detail::as_complex;
    using detail::as_int;
    using detail::as_number;
    using detail::require_field;

    if (!j.is_object()) throw ScenarioError("(root)", "scenario: expected a JSON object");
    Scenario sc;

    if (auto it = j.find("truncation"); it != j.end()) {
        const int n_max = as_int(require_field(*it, "n_max", "truncation."), "truncation.n_max");
        if (n_max < 1)
            throw ScenarioError("truncation.n_max", "truncation.n_max: must be >= 1");
        sc.truncation = Truncation{n_max};
    }

    const auto& p = require_field(j, "params", "");
    const double nu = as_number(require_field(p, "nu", "params."), "params.nu");
    const double omega = as_number(require_field(p, "omega", "params."), "params.omega");
    const double chi = as_number(require_field(p, "chi", "params."), "params.chi");
    const double gamma = as_number(require_field(p, "gamma", "params."), "params.gamma");
    if (gamma < 0.0) throw ScenarioError("params.gamma", "params.gamma: must be >= 0");
    sc.params = ModelParams{nu, omega, chi, gamma};

    sc.drive = detail::parse_drive(require_field(j, "drive", ""));

    const auto& init = require_field(j, "initial", "");
    const auto& field = require_field(init, "field", "initial.");
    if (field.contains("coherent")) {
        const auto& c = field["coherent"];
        sc.field_kind = Scenario::FieldInit::Coherent;
        sc.alpha = Complex{as_number(require_field(c, "re", "initial.field.coherent."),
                                     "initial.field.coherent.re"),
                           as_number(require_field(c, "im", "initial.field.coherent."),
                                     "initial.field.coherent.im")};
    } else if (field.contains("fock")) {
        sc.field_kind = Scenario::FieldInit::Fock;
        sc.fock_n = as_int(require_field(field["fock"], "n", "initial.field.fock."),
                           "initial.field.fock.n");
        if (sc.fock_n < 0 || sc.fock_n > sc.truncation.n_max)
            throw ScenarioError("initial.field.fock.n",
                                "initial.field.fock.n: outside [0, n_max]");
    } else {
        throw ScenarioError("initial.field", "initial.field: expected {coherent: ...} or {fock: ...}");
    }
    const auto& atom = require_field(init, "atom", "initial.");
    sc.c_e = as_complex(require_field(atom, "c_e", "initial.atom."), "initial.atom.c_e");
    sc.c_g = as_complex(require_field(atom, "c_g", "initial.atom."), "initial.atom.c_g");
    if (std::abs(std::norm(sc.c_e) + std::norm(sc.c_g) - 1.0) > 1e-9)
        throw ScenarioError("initial.atom",
                            "initial.atom: |c_e|^2 + |c_g|^2 must be 1 within 1e-9");

    const auto& times = require_field(j, "times", "");
    sc.t_max = as_number(require_field(times, "t_max", "times."), "times.t_max");
    if (!(sc.t_max > 0.0)) throw ScenarioError("times.t_max", "times.t_max: must be > 0");
    sc.steps = as_int(require_field(times, "steps", "times."), "times.steps");
    if (sc.steps < 1) throw ScenarioError("times.steps", "times.steps: must be >= 1");

    if (auto it = j.find("observables"); it != j.end()) {
        if (!it->is_array())
            throw ScenarioError("observables", "observables: expected an array of names");
        for (size_t i = 0; i < it->size(); ++i) {
            const auto& name = (*it)[i];
            const std::string path = "observables[" + std::to_string(i) + "]";
            if (!name.is_string() || !known_observables().count(name.get<std::string>()))
                throw ScenarioError(path, path +
                                              ": expected one of inversion|mean_photon|purity|"
                                              "coherence|trace_check");
            sc.observables.push_back(name.get<std::string>());
        }
    } else {
        sc.observables.assign(known_observables().begin(), known_observables().end());
    }

    if (auto it = j.find("phase_space"); it != j.end()) {
        PhaseSpaceRequest ps;
        const std::string which =
            require_field(*it, "which", "phase_space.").get<std::string>();
        if (which == "q") ps.which = PhaseSpaceRequest::Which::Q;
        else if (which == "w") ps.which = PhaseSpaceRequest::Which::W;
        else if (which == "both") ps.which = PhaseSpaceRequest::Which::Both;
        else
            throw ScenarioError("phase_space.which", "phase_space.which: expected q|w|both");
        const auto& b = require_field(*it, "bounds", "phase_space.");
        if (!b.is_array() || b.size() != 4)
            throw ScenarioError("phase_space.bounds",
                                "phase_space.bounds: expected [re_min, re_max, im_min, im_max]");
        ps.re_min = as_number(b[0], "phase_space.bounds[0]");
        ps.re_max = as_number(b[1], "phase_space.bounds[1]");
        ps.im_min = as_number(b[2], "phase_space.bounds[2]");
        ps.im_max = as_number(b[3], "phase_space.bounds[3]");
        if (!(ps.re_min < ps.re_max) || !(ps.im_min < ps.im_max))
            throw ScenarioError("phase_space.bounds", "phase_space.bounds: must be ordered");
        const auto& res = require_field(*it, "resolution", "phase_space.");
        if (res.is_number_integer()) {
            ps.n_re = ps.n_im = res.get<int>();
        } else if (res.is_array() && res.size() == 2) {
            ps.n_re = as_int(res[0], "phase_space.resolution[0]");
            ps.n_im = as_int(res[1], "phase_space.resolution[1]");
        } else {
            throw ScenarioError("phase_space.resolution",
                                "phase_space.resolution: expected N or [n_re, n_im]");
        }
        if (ps.n_re < 2 || ps.n_im < 2)
            throw ScenarioError("phase_space.resolution", "phase_space.resolution: must be >= 2");
        if (auto st = it->find("snapshot_times"); st != it->end()) {
            if (!st->is_array())
                throw ScenarioError("phase_space.snapshot_times",
                                    "phase_space.snapshot_times: expected an array of times");
            double prev = -1.0;
            for (size_t i = 0; i < st->size(); ++i) {
                const std::string path = "phase_space.snapshot_times[" + std::to_string(i) + "]";
                const double t = as_number((*st)[i], path);
                if (t < 0.0 || t > sc.t_max)
                    throw ScenarioError(path, path + ": must lie in [0, t_max]");
                if (t <= prev) throw ScenarioError(path, path + ": must be strictly ascending");
                prev = t;
                ps.snapshot_times.push_back(t);
            }
        }
        sc.phase_space = ps;
    }

    if (auto it = j.find("method"); it != j.end()) {
        if (!it->is_string()) throw ScenarioError("method", "method: expected a string");
        sc.method = parse_method(it->get<std::string>(), "method");
    }

    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("(file)", "cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError("(json)", std::string("scenario parse error: ") + e.what());
    }
    return parse_scenario(j);
}

}  // namespace dqed
