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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqed/blocks.hpp"
#include "dqed/common.hpp"
#include "dqed/oracle.hpp"
#include "dqed/phase_space.hpp"
#include "dqed/scenario.hpp"

namespace dqed {

struct RunOptions {
    std::string scenario_path;
    std::string out_dir = "./out";
    std::optional<int> truncation_override;
    std::optional<Scenario::Method> method_override;
    bool quiet = false;
};

/// Analytic-vs-oracle comparison written to verification.json for
/// method=both runs.
struct VerificationReport {
    std::vector<double> snapshot_times;
    int compared_snapshots = 0;
    int guard_refusals = 0;
    double dist_ee = 0.0, dist_gg = 0.0, dist_eg = 0.0, dist_ge = 0.0;
    double trace_ratio_max_deviation = 0.0;
    double direct_scalar_residual = 0.0;
    double magnus_scalar_residual = 0.0;
    double comm_jl = 0.0, comm_rj = 0.0, comm_rl = 0.0, comm_s = 0.0;
    double empirical_s_coefficient = 0.0;
    bool blocks_pass = false;
    bool prefactor_pass = false;
    bool commutators_pass = false;
    bool all_pass = false;

    static constexpr double kTolDiagonal = 1e-6;
    static constexpr double kTolCoherence = 1e-5;
    static constexpr double kTolCommutator = 1e-10;
};

namespace detail {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline nlohmann::ordered_json matrix_json(const FieldMatrix& m) {
    auto rows = nlohmann::ordered_json::array();
    for (int r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (int c = 0; c < m.cols(); ++c)
            row.push_back(nlohmann::ordered_json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void emit_machine_error(const std::string& msg, const std::string& field) {
    nlohmann::ordered_json j;
    j["error"] = msg;
    if (field.empty())
        j["field"] = nullptr;
    else
        j["field"] = field;
    std::cerr << j.dump() << "\n";
}

/// Restores the previous warning handler on scope exit.
class WarningSilencer {
  public:
    explicit WarningSilencer(bool active) : active_(active) {
        if (active_) {
            prev_ = warning_handler();
            warning_handler() = nullptr;
        }
    }
    ~WarningSilencer() {
        if (active_) warning_handler() = prev_;
    }

  private:
    bool active_;
    WarningHandler prev_;
};

struct CommutatorResiduals {
    double jl = 0.0, rj = 0.0, rl = 0.0, s = 0.0;
    double s_coefficient = 0.0;
};

/// Residuals of the superoperator algebra on seeded random matrices
/// supported on n <= n_max/2. The S-commutator coefficient is extracted by
/// least squares rather than assumed.
inline CommutatorResiduals commutator_residuals(const SuperopParams& sp, int n_max,
                                                unsigned seed = 12345, int count = 20) {
    const int d = n_max + 1;
    const int support = n_max / 2;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const Complex eps{0.3, -0.7};

    CommutatorResiduals out;
    double coeff_num = 0.0;
    double coeff_den = 0.0;
    for (int k = 0; k < count; ++k) {
        FieldMatrix rho = FieldMatrix::Zero(d, d);
        for (int m = 0; m <= support; ++m)
            for (int n = 0; n <= support; ++n) rho(m, n) = Complex{uni(rng), uni(rng)};

        const FieldMatrix jl =
            apply_J(apply_L(rho)) - apply_L(apply_J(rho)) - 2.0 * apply_J(rho);
        const FieldMatrix rj = apply_R(sp, apply_J(rho)) - apply_J(apply_R(sp, rho));
        const FieldMatrix rl = apply_R(sp, apply_L(rho)) - apply_L(apply_R(sp, rho));
        const FieldMatrix sc = apply_S(eps, apply_lindblad(sp, rho)) -
                               apply_lindblad(sp, apply_S(eps, rho));
        const FieldMatrix s_base = apply_S(eps, rho);
        const FieldMatrix s_resid = sc - sp.gamma * s_base;

        out.jl = std::max(out.jl, jl.norm());
        out.rj = std::max(out.rj, rj.norm());
        out.rl = std::max(out.rl, rl.norm());
        out.s = std::max(out.s, s_resid.norm());
        coeff_num += (s_base.conjugate().cwiseProduct(sc)).sum().real();
        coeff_den += s_base.squaredNorm();
    }
    out.s_coefficient = coeff_den > 0.0 ? coeff_num / coeff_den : 0.0;
    return out;
}

inline nlohmann::ordered_json report_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["snapshot_times"] = r.snapshot_times;
    j["compared_snapshots"] = r.compared_snapshots;
    j["guard_refusals"] = r.guard_refusals;
    j["blocks"] = {
        {"ee", {{"max_frobenius_distance", r.dist_ee}, {"tolerance", VerificationReport::kTolDiagonal}}},
        {"gg", {{"max_frobenius_distance", r.dist_gg}, {"tolerance", VerificationReport::kTolDiagonal}}},
        {"eg", {{"max_frobenius_distance", r.dist_eg}, {"tolerance", VerificationReport::kTolCoherence}}},
        {"ge", {{"max_frobenius_distance", r.dist_ge}, {"tolerance", VerificationReport::kTolCoherence}}},
        {"pass", r.blocks_pass},
    };
    j["prefactor"] = {
        {"trace_ratio_max_deviation", r.trace_ratio_max_deviation},
        {"direct_scalar_residual", r.direct_scalar_residual},
        {"magnus_scalar_residual", r.magnus_scalar_residual},
        {"tolerance", VerificationReport::kTolCoherence},
        {"pass", r.prefactor_pass},
    };
    j["commutators"] = {
        {"JL_minus_2J", r.comm_jl},
        {"RJ", r.comm_rj},
        {"RL", r.comm_rl},
        {"S_lindblad_minus_gamma_S", r.comm_s},
        {"empirical_S_coefficient", r.empirical_s_coefficient},
        {"tolerance", VerificationReport::kTolCommutator},
        {"pass", r.commutators_pass},
    };
    j["all_pass"] = r.all_pass;
    return j;
}

inline void run_impl(const RunOptions& opt) {
    namespace fs = std::filesystem;
    WarningSilencer silence(opt.quiet);

    Scenario sc = load_scenario(opt.scenario_path);
    if (opt.truncation_override) {
        if (*opt.truncation_override < 1)
            throw ScenarioError("truncation", "truncation override: must be >= 1");
        sc.truncation = Truncation{*opt.truncation_override};
        if (sc.field_kind == Scenario::FieldInit::Fock && sc.fock_n > sc.truncation.n_max)
            throw ScenarioError("initial.field.fock.n",
                                "initial.field.fock.n: outside [0, n_max] after override");
    }
    if (opt.method_override) sc.method = *opt.method_override;

    fs::create_directories(opt.out_dir);
    const auto out_path = [&](const std::string& name) {
        return (fs::path(opt.out_dir) / name).string();
    };

    const Truncation trunc = sc.truncation;
    const ModelParams& params = sc.params;
    const DriveSpec& drive = sc.drive;
    const bool analytic_wanted = sc.method != Scenario::Method::Oracle;
    const bool oracle_wanted = sc.method != Scenario::Method::Analytic;

    const FieldVector field0 = sc.field_kind == Scenario::FieldInit::Coherent
                                   ? coherent_state(sc.alpha, trunc)
                                   : fock_state(sc.fock_n, trunc);
    const AtomFieldState state0 = product_state(sc.c_e, sc.c_g, field0);

    std::vector<double> grid_times(sc.steps + 1);
    for (int k = 0; k <= sc.steps; ++k) grid_times[k] = sc.t_max * k / sc.steps;
    const std::vector<double> snap_times = sc.snapshot_times();

    // Analytic propagation, time point by time point. A coherence-guard
    // refusal is fatal for method=analytic; for method=both the oracle block
    // takes over at the refused times.
    struct AnalyticPoint {
        AtomFieldState state;
        bool refused = false;
    };
    auto analytic_at = [&](double t) {
        AnalyticPoint p;
        p.state.rho_ee = solve_rho_ee(params, drive, state0.rho_ee, t);
        p.state.rho_gg = solve_rho_gg(params, drive, state0.rho_gg, t);
        try {
            p.state.rho_eg = solve_rho_eg(params, drive, state0.rho_eg, t);
            p.state.rho_ge = solve_rho_ge(params, drive, state0.rho_ge, t);
        } catch (const OverflowGuardError&) {
            if (sc.method == Scenario::Method::Analytic) throw;
            p.refused = true;
            const int d = trunc.dim();
            p.state.rho_eg = FieldMatrix::Zero(d, d);
            p.state.rho_ge = FieldMatrix::Zero(d, d);
        }
        return p;
    };

    std::vector<AnalyticPoint> analytic_grid, analytic_snap;
    int refusals = 0;
    if (analytic_wanted) {
        for (double t : grid_times) analytic_grid.push_back(analytic_at(t));
        for (double t : snap_times) analytic_snap.push_back(analytic_at(t));
        for (const auto& p : analytic_grid) refusals += p.refused ? 1 : 0;
        for (const auto& p : analytic_snap) refusals += p.refused ? 1 : 0;
    }

    // Oracle propagation over the union of all times that need it.
    const bool oracle_needed =
        oracle_wanted || refusals > 0;
    std::vector<double> oracle_times;
    if (oracle_needed) {
        oracle_times = snap_times;
        if (sc.method == Scenario::Method::Oracle || refusals > 0)
            oracle_times.insert(oracle_times.end(), grid_times.begin(), grid_times.end());
        std::sort(oracle_times.begin(), oracle_times.end());
        oracle_times.erase(std::unique(oracle_times.begin(), oracle_times.end()),
                           oracle_times.end());
    }
    std::map<double, AtomFieldState> oracle_states;
    if (oracle_needed) {
        const auto ee = rk4_integrate_path(BlockKind::ee, params, drive, state0.rho_ee, oracle_times);
        const auto gg = rk4_integrate_path(BlockKind::gg, params, drive, state0.rho_gg, oracle_times);
        const auto eg = rk4_integrate_path(BlockKind::eg, params, drive, state0.rho_eg, oracle_times);
        const auto ge = rk4_integrate_path(BlockKind::ge, params, drive, state0.rho_ge, oracle_times);
        for (size_t i = 0; i < oracle_times.size(); ++i)
            oracle_states[oracle_times[i]] = AtomFieldState{ee[i], eg[i], ge[i], gg[i]};
    }

    // Authoritative state selection: analytic when available, oracle when the
    // method says so or the guard refused.
    auto authoritative = [&](double t, const AnalyticPoint* ap) -> AtomFieldState {
        if (sc.method == Scenario::Method::Oracle) return oracle_states.at(t);
        AtomFieldState st = ap->state;
        if (ap->refused) {
            const AtomFieldState& orc = oracle_states.at(t);
            st.rho_eg = orc.rho_eg;
            st.rho_ge = orc.rho_ge;
        }
        return st;
    };

    std::vector<AtomFieldState> grid_states, snap_states;
    for (size_t k = 0; k < grid_times.size(); ++k) {
        grid_states.push_back(
            authoritative(grid_times[k], analytic_wanted ? &analytic_grid[k] : nullptr));
        validate_state(grid_states.back(), "t=" + std::to_string(grid_times[k]));
    }
    for (size_t k = 0; k < snap_times.size(); ++k)
        snap_states.push_back(
            authoritative(snap_times[k], analytic_wanted ? &analytic_snap[k] : nullptr));

    // observables.csv
    {
        std::ofstream csv(out_path("observables.csv"));
        csv << "t";
        for (const auto& name : sc.observables) csv << "," << name;
        csv << "\n";
        for (size_t k = 0; k < grid_times.size(); ++k) {
            const AtomFieldState& st = grid_states[k];
            csv << fmt17(grid_times[k]);
            for (const auto& name : sc.observables) {
                double v = 0.0;
                if (name == "inversion") v = atomic_inversion(st);
                else if (name == "mean_photon") v = mean_photon(st.rho_ee + st.rho_gg);
                else if (name == "purity") v = purity(st);
                else if (name == "coherence") v = coherence_magnitude(st);
                else if (name == "trace_check")
                    v = std::abs((st.rho_ee.trace() + st.rho_gg.trace()).real() - 1.0);
                csv << "," << fmt17(v);
            }
            csv << "\n";
        }
        if (!opt.quiet) std::cout << "wrote " << out_path("observables.csv") << "\n";
    }

    // Snapshots (lab frame) and any phase-space grids.
    for (size_t k = 0; k < snap_times.size(); ++k) {
        const double t = snap_times[k];
        const AtomFieldState lab = to_lab_frame(params, snap_states[k], t);

        nlohmann::ordered_json j;
        j["t"] = t;
        j["frame"] = "lab";
        j["n_max"] = trunc.n_max;
        j["rho_ee"] = matrix_json(lab.rho_ee);
        j["rho_eg"] = matrix_json(lab.rho_eg);
        j["rho_ge"] = matrix_json(lab.rho_ge);
        j["rho_gg"] = matrix_json(lab.rho_gg);
        const std::string snap_name = "blocks_t" + std::to_string(k) + ".json";
        std::ofstream(out_path(snap_name)) << j.dump(2) << "\n";
        if (!opt.quiet) std::cout << "wrote " << out_path(snap_name) << "\n";

        if (sc.phase_space) {
            const auto& ps = *sc.phase_space;
            const FieldMatrix rho_f = lab.rho_ee + lab.rho_gg;
            const PhaseSpaceGrid base = PhaseSpaceGrid::make(ps.re_min, ps.re_max, ps.im_min,
                                                             ps.im_max, ps.n_re, ps.n_im);
            auto write_grid = [&](const PhaseSpaceGrid& g, const std::string& name) {
                std::ofstream out(out_path(name));
                out << "re,im,value\n";
                for (int i = 0; i < g.n_im; ++i)
                    for (int jx = 0; jx < g.n_re; ++jx) {
                        const Complex pt = g.point(i, jx);
                        out << fmt17(pt.real()) << "," << fmt17(pt.imag()) << ","
                            << fmt17(g.at(i, jx)) << "\n";
                    }
                if (!opt.quiet) std::cout << "wrote " << out_path(name) << "\n";
            };
            if (ps.which != PhaseSpaceRequest::Which::W)
                write_grid(husimi_q(rho_f, base), "q_grid_" + std::to_string(k) + ".csv");
            if (ps.which != PhaseSpaceRequest::Which::Q)
                write_grid(wigner(rho_f, base), "w_grid_" + std::to_string(k) + ".csv");
        }
    }

    // verification.json for method=both.
    if (sc.method == Scenario::Method::Both) {
        VerificationReport rep;
        rep.snapshot_times = snap_times;
        rep.guard_refusals = refusals;

        const Complex beta = params.beta();
        for (size_t k = 0; k < snap_times.size(); ++k) {
            const double t = snap_times[k];
            const AnalyticPoint& ap = analytic_snap[k];
            const AtomFieldState& orc = oracle_states.at(t);
            rep.dist_ee = std::max(rep.dist_ee, frobenius_distance(ap.state.rho_ee, orc.rho_ee));
            rep.dist_gg = std::max(rep.dist_gg, frobenius_distance(ap.state.rho_gg, orc.rho_gg));
            if (ap.refused) continue;
            rep.compared_snapshots += 1;
            const double d_eg = frobenius_distance(ap.state.rho_eg, orc.rho_eg);
            const double d_ge = frobenius_distance(ap.state.rho_ge, orc.rho_ge);
            rep.dist_eg = std::max(rep.dist_eg, d_eg);
            rep.dist_ge = std::max(rep.dist_ge, d_ge);
            rep.direct_scalar_residual = std::max(rep.direct_scalar_residual, d_eg);

            const Complex tr_o = orc.rho_eg.trace();
            if (std::abs(tr_o) > 1e-14)
                rep.trace_ratio_max_deviation =
                    std::max(rep.trace_ratio_max_deviation,
                             std::abs(ap.state.rho_eg.trace() / tr_o - 1.0));

            if (t > 0.0 && std::abs(beta) > 0.0) {
                const auto diag = prefactor_diagnostics(drive, params, beta, t);
                const Complex rescale = std::exp(diag.magnus_theta + diag.phi);
                rep.magnus_scalar_residual =
                    std::max(rep.magnus_scalar_residual,
                             frobenius_distance(rescale * ap.state.rho_eg, orc.rho_eg));
            } else {
                rep.magnus_scalar_residual = std::max(rep.magnus_scalar_residual, d_eg);
            }
        }

        const CommutatorResiduals comm = commutator_residuals(params.superop(), trunc.n_max);
        rep.comm_jl = comm.jl;
        rep.comm_rj = comm.rj;
        rep.comm_rl = comm.rl;
        rep.comm_s = comm.s;
        rep.empirical_s_coefficient = comm.s_coefficient;

        rep.blocks_pass = rep.dist_ee <= VerificationReport::kTolDiagonal &&
                          rep.dist_gg <= VerificationReport::kTolDiagonal &&
                          rep.dist_eg <= VerificationReport::kTolCoherence &&
                          rep.dist_ge <= VerificationReport::kTolCoherence;
        rep.prefactor_pass =
            std::min(rep.direct_scalar_residual, rep.magnus_scalar_residual) <=
            VerificationReport::kTolCoherence;
        rep.commutators_pass =
            rep.comm_jl <= VerificationReport::kTolCommutator &&
            rep.comm_rj <= VerificationReport::kTolCommutator &&
            rep.comm_rl <= VerificationReport::kTolCommutator &&
            rep.comm_s <= VerificationReport::kTolCommutator;
        rep.all_pass = rep.blocks_pass && rep.prefactor_pass && rep.commutators_pass;

        std::ofstream(out_path("verification.json")) << report_json(rep).dump(2) << "\n";
        if (!opt.quiet) std::cout << "wrote " << out_path("verification.json") << "\n";
    }
}

}  // namespace detail

/// Run a scenario; on failure, print a one-line machine-readable JSON error
/// to stderr and return nonzero.
inline int run_scenario(const RunOptions& opt) {
    try {
        detail::run_impl(opt);
        return 0;
    } catch (const ScenarioError& e) {
        detail::emit_machine_error(e.what(), e.field);
    } catch (const OverflowGuardError& e) {
        detail::emit_machine_error(std::string(e.what()) + "; rerun with method=oracle", "method");
    } catch (const std::exception& e) {
        detail::emit_machine_error(e.what(), "");
    }
    return 1;
}

inline int run_scenario(const std::string& path, const std::string& output_dir) {
    RunOptions opt;
    opt.scenario_path = path;
    opt.out_dir = output_dir;
    return run_scenario(opt);
}

}  // namespace dqed
