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
//
// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failures. Tolerances are pinned here and nowhere else.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "dqed/dqed.hpp"

using namespace dqed;
namespace fs = std::filesystem;

namespace {

struct Crit {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

FieldMatrix random_supported(std::mt19937& rng, int dim, int support) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    FieldMatrix m = FieldMatrix::Zero(dim, dim);
    for (int r = 0; r <= support; ++r)
        for (int c = 0; c <= support; ++c) m(r, c) = Complex{uni(rng), uni(rng)};
    return m;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 1. Superoperator algebra: [J,L] = 2J, [R,J] = [R,L] = 0, and the damped
//    drive relation [S, gamma(J-L)] = gamma S, on 50 random half-supported
//    matrices at n_max = 32.
Crit criterion_algebra() {
    const double tol = 1e-10;
    const Truncation tr{32};
    const SuperopParams sp{0.83, 0.37};
    const Complex eps{0.3, -0.7};
    std::mt19937 rng(2024);

    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const FieldMatrix rho = random_supported(rng, tr.dim(), 16);
        const double scale = std::max(1.0, rho.norm());
        worst = std::max(worst,
                         (apply_J(apply_L(rho)) - apply_L(apply_J(rho)) - 2.0 * apply_J(rho)).norm() / scale);
        worst = std::max(worst,
                         (apply_R(sp, apply_J(rho)) - apply_J(apply_R(sp, rho))).norm() / scale);
        worst = std::max(worst,
                         (apply_R(sp, apply_L(rho)) - apply_L(apply_R(sp, rho))).norm() / scale);
        const FieldMatrix sc = apply_S(eps, apply_lindblad(sp, rho)) -
                               apply_lindblad(sp, apply_S(eps, rho));
        worst = std::max(worst, (sc - sp.gamma * apply_S(eps, rho)).norm() / scale);
    }
    return {worst < tol, "max residual " + fmt(worst) + ", tol " + fmt(tol)};
}

// 2. The factorized decay propagator equals the dense exponential of the
//    undriven ee generator across gamma and t, including one larger-space
//    spot check.
Crit criterion_factorization() {
    const double tol = 1e-8;
    const DriveSpec off = DriveSpec::constant({0, 0});

    auto compare = [&](int n_max, double gamma, double t) {
        const Truncation tr{n_max};
        const int d = tr.dim();
        const ModelParams params{0.0, 0.0, 0.3, gamma};
        const Eigen::MatrixXcd prop =
            (liouvillian_matrix(BlockKind::ee, params, off, 0.0, tr) * t).exp();
        double w = 0.0;
        for (int q = 0; q < d; ++q) {
            for (int p = 0; p < d; ++p) {
                FieldMatrix basis = FieldMatrix::Zero(d, d);
                basis(p, q) = 1.0;
                const Eigen::VectorXcd col =
                    vectorize(decay_propagator(params.superop(), t, +1, basis));
                w = std::max(w, (col - prop.col(vec_index(p, q, d))).norm());
            }
        }
        return w;
    };

    double worst = 0.0;
    for (double gamma : {0.05, 0.2})
        for (double t : {1.0, 2.0, 5.0}) worst = std::max(worst, compare(16, gamma, t));
    worst = std::max(worst, compare(24, 0.2, 2.0));
    return {worst < tol, "max column distance " + fmt(worst) + ", tol " + fmt(tol)};
}

// 3. Undriven coherent-state photon number follows e^{-2 gamma t} |alpha|^2.
Crit criterion_decay_law() {
    const double tol = 1e-6;
    const Truncation tr{32};
    const ModelParams params{1.0, 5.0, 0.2, 0.3};
    const DriveSpec off = DriveSpec::constant({0, 0});
    const FieldVector v = coherent_state({1.0, 0.0}, tr);
    const FieldMatrix rho0 = v * v.adjoint();

    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0, 3.0, 5.0}) {
        const double got = mean_photon(solve_rho_ee(params, off, rho0, t));
        const double want = std::exp(-2.0 * params.gamma * t);
        worst = std::max(worst, std::abs(got - want) / want);
    }
    return {worst < tol, "max relative error " + fmt(worst) + ", tol " + fmt(tol)};
}

const ModelParams kDriven{1.0, 5.0, 0.2, 0.05};
const DriveSpec kDrivenDrive = DriveSpec::constant({0.1, 0.0});

// 4. Diagonal closed forms against the independent integrator.
Crit criterion_diagonal_blocks() {
    const double tol = 1e-6;
    const Truncation tr{32};
    const FieldVector v = coherent_state({1.0, 0.0}, tr);
    const FieldMatrix rho0 = v * v.adjoint();
    const std::vector<double> times{0.5, 1.0, 2.0};

    const auto ee = rk4_integrate_path(BlockKind::ee, kDriven, kDrivenDrive, rho0, times);
    const auto gg = rk4_integrate_path(BlockKind::gg, kDriven, kDrivenDrive, rho0, times);
    double worst = 0.0;
    for (size_t i = 0; i < times.size(); ++i) {
        worst = std::max(worst, frobenius_distance(
                                    solve_rho_ee(kDriven, kDrivenDrive, rho0, times[i]), ee[i]));
        worst = std::max(worst, frobenius_distance(
                                    solve_rho_gg(kDriven, kDrivenDrive, rho0, times[i]), gg[i]));
    }
    return {worst < tol, "max distance " + fmt(worst) + ", tol " + fmt(tol)};
}

// 5. Coherence closed forms against the integrator, with the scalar prefactor
//    checked along both routes: as computed, and rescaled through the Magnus
//    exponent.
Crit criterion_coherence_blocks() {
    const double tol = 1e-5;
    const Truncation tr{32};
    const FieldVector v = coherent_state({1.0, 0.0}, tr);
    const FieldMatrix rho0 = 0.5 * (v * v.adjoint());
    const std::vector<double> times{0.5, 1.0, 2.0};

    const auto eg = rk4_integrate_path(BlockKind::eg, kDriven, kDrivenDrive, rho0, times);
    const auto ge = rk4_integrate_path(BlockKind::ge, kDriven, kDrivenDrive, rho0.adjoint(), times);

    double worst = 0.0, worst_direct = 0.0, worst_magnus = 0.0;
    for (size_t i = 0; i < times.size(); ++i) {
        const FieldMatrix eg_ana = solve_rho_eg(kDriven, kDrivenDrive, rho0, times[i]);
        const FieldMatrix ge_ana = solve_rho_ge(kDriven, kDrivenDrive, rho0.adjoint(), times[i]);
        const double d_direct = frobenius_distance(eg_ana, eg[i]);
        worst_direct = std::max(worst_direct, d_direct);
        worst = std::max(worst, std::max(d_direct, frobenius_distance(ge_ana, ge[i])));

        const auto diag =
            prefactor_diagnostics(kDrivenDrive, kDriven, kDriven.beta(), times[i]);
        const Complex rescale = std::exp(diag.magnus_theta + diag.phi);
        worst_magnus = std::max(worst_magnus, frobenius_distance(rescale * eg_ana, eg[i]));
    }
    const bool pass = worst < tol && worst_direct < tol && worst_magnus < tol;
    return {pass, "max distance " + fmt(worst) + " (direct " + fmt(worst_direct) +
                      ", Magnus-rescaled " + fmt(worst_magnus) + "), tol " + fmt(tol)};
}

// 6. Dispersive cat coherence: |tr rho_eg(t)| = (1/2) e^{-|alpha|^2 (1 - cos 2 chi t)}.
Crit criterion_cat_coherence() {
    const double tol = 1e-8;
    const Truncation tr{32};
    const ModelParams params{0.0, 5.0, 0.5, 0.0};
    const DriveSpec off = DriveSpec::constant({0, 0});
    const FieldVector v = coherent_state({1.0, 0.0}, tr);
    const FieldMatrix rho0 = 0.5 * (v * v.adjoint());

    double worst = 0.0;
    for (int i = 1; i <= 20; ++i) {
        const double t = i * M_PI / 10.0;
        const double got = std::abs(solve_rho_eg(params, off, rho0, t).trace());
        const double want = 0.5 * std::exp(-(1.0 - std::cos(2.0 * params.chi * t)));
        worst = std::max(worst, std::abs(got - want));
    }

    const double revival_min =
        std::abs(solve_rho_eg(params, off, rho0, M_PI).trace());
    const double pinned = 0.067667641618306346;
    worst = std::max(worst, std::abs(revival_min - pinned));
    return {worst < tol, "max deviation " + fmt(worst) + ", tol " + fmt(tol)};
}

// 7. Physicality of every state the other criteria produce: unit trace,
//    Hermiticity, and spectrum bounded below by -1e-8.
Crit criterion_physicality() {
    const double tol_trace = 1e-8, tol_herm = 1e-10, tol_eig = -1e-8;
    const Truncation tr{32};
    double worst_trace = 0.0, worst_herm = 0.0, min_eig = 0.0;

    auto check_field = [&](const FieldMatrix& rho) {
        worst_trace = std::max(worst_trace, std::abs(trace(rho) - Complex{1.0, 0.0}));
        worst_herm = std::max(worst_herm, (rho - rho.adjoint().eval()).norm());
        Eigen::SelfAdjointEigenSolver<FieldMatrix> es(
            (0.5 * (rho + rho.adjoint().eval())).eval(), Eigen::EigenvaluesOnly);
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    };
    auto check_full = [&](const AtomFieldState& st) {
        const StateHealth h = check_state(st);
        worst_trace = std::max(worst_trace, h.trace_deviation);
        worst_herm = std::max({worst_herm, h.herm_ee, h.herm_gg, h.adjoint_mismatch});
        min_eig = std::min(min_eig, h.min_eigenvalue);
    };

    {
        const ModelParams params{1.0, 5.0, 0.2, 0.3};
        const DriveSpec off = DriveSpec::constant({0, 0});
        const FieldVector v = coherent_state({1.0, 0.0}, tr);
        check_field(solve_rho_ee(params, off, v * v.adjoint(), 5.0));
    }
    {
        const Complex inv_sqrt2{1.0 / std::sqrt(2.0), 0.0};
        const AtomFieldState st0 =
            product_state(inv_sqrt2, inv_sqrt2, coherent_state({1.0, 0.0}, tr));
        for (double t : {0.5, 1.0, 2.0})
            check_full(evolve_state(kDriven, kDrivenDrive, st0, t));
    }
    {
        const ModelParams cat{0.0, 5.0, 0.5, 0.0};
        const DriveSpec off = DriveSpec::constant({0, 0});
        const Complex inv_sqrt2{1.0 / std::sqrt(2.0), 0.0};
        const AtomFieldState st0 =
            product_state(inv_sqrt2, inv_sqrt2, coherent_state({1.0, 0.0}, tr));
        check_full(evolve_state(cat, off, st0, M_PI));
    }

    const bool pass = worst_trace < tol_trace && worst_herm < tol_herm && min_eig > tol_eig;
    return {pass, "trace dev " + fmt(worst_trace) + ", herm " + fmt(worst_herm) +
                      ", min eig " + fmt(min_eig)};
}

// 8. Phase-space distributions: the coherent-state Wigner function matches its
//    Gaussian on a 41x41 grid, and the vacuum Husimi peak is 1/pi.
Crit criterion_phase_space() {
    const double tol_w = 1e-6, tol_q = 1e-10;
    const Complex alpha0{1.5, 0.0};

    const Truncation tr_w{64};
    const FieldVector vw = coherent_state(alpha0, tr_w);
    PhaseSpaceGrid g = PhaseSpaceGrid::make(-3.0, 3.0, -3.0, 3.0, 41, 41);
    g = wigner(vw * vw.adjoint(), g);
    double worst_w = 0.0;
    for (int i = 0; i < g.n_im; ++i)
        for (int j = 0; j < g.n_re; ++j) {
            const double want = 2.0 / M_PI * std::exp(-2.0 * std::norm(g.point(i, j) - alpha0));
            worst_w = std::max(worst_w, std::abs(g.at(i, j) - want));
        }

    const Truncation tr_q{32};
    const FieldVector v0 = fock_state(0, tr_q);
    PhaseSpaceGrid q = PhaseSpaceGrid::make(-1.0, 1.0, -1.0, 1.0, 3, 3);
    q = husimi_q(v0 * v0.adjoint(), q);
    const double err_q = std::abs(q.at(1, 1) - 1.0 / M_PI);

    const bool pass = worst_w < tol_w && err_q < tol_q;
    return {pass, "Wigner dev " + fmt(worst_w) + " (tol " + fmt(tol_w) + "), Husimi dev " +
                      fmt(err_q) + " (tol " + fmt(tol_q) + ")"};
}

// 9. The integrator behind the cross-checks converges at fourth order.
Crit criterion_integrator_order() {
    const Truncation tr{16};
    const FieldVector v = coherent_state({1.0, 0.0}, tr);
    const FieldMatrix rho0 = v * v.adjoint();

    IntegratorConfig ref_cfg, c1, c2;
    ref_cfg.dt = 0.00125;
    c1.dt = 0.02;
    c2.dt = 0.01;
    const FieldMatrix ref =
        rk4_integrate(BlockKind::ee, kDriven, kDrivenDrive, rho0, 1.0, ref_cfg);
    const double e1 = frobenius_distance(
        rk4_integrate(BlockKind::ee, kDriven, kDrivenDrive, rho0, 1.0, c1), ref);
    const double e2 = frobenius_distance(
        rk4_integrate(BlockKind::ee, kDriven, kDrivenDrive, rho0, 1.0, c2), ref);
    const double ratio = e1 / e2;
    return {ratio > 14.0 && ratio < 18.0,
            "error ratio " + fmt(ratio) + ", expected within [14, 18]"};
}

// 10. The shipped example scenario runs, verifies, and is bit-reproducible.
Crit criterion_scenario(const std::string& scenarios_dir) {
    const std::string scenario = scenarios_dir + "/example.json";
    const fs::path out1 = fs::temp_directory_path() / "dqed_acceptance_out1";
    const fs::path out2 = fs::temp_directory_path() / "dqed_acceptance_out2";
    fs::remove_all(out1);
    fs::remove_all(out2);

    for (const fs::path& out : {out1, out2}) {
        RunOptions opt;
        opt.scenario_path = scenario;
        opt.out_dir = out.string();
        opt.quiet = true;
        if (run_scenario(opt) != 0) return {false, "run failed for " + out.string()};
    }

    for (const char* name : {"observables.csv", "q_grid_0.csv", "w_grid_1.csv"}) {
        const std::string a = slurp(out1 / name);
        if (a.empty() || a != slurp(out2 / name))
            return {false, std::string(name) + " differs between identical runs"};
    }

    const auto rep = nlohmann::json::parse(slurp(out1 / "verification.json"));
    if (rep.at("all_pass") != true) return {false, "verification.json all_pass is false"};
    const double d_eg = rep.at("blocks").at("eg").at("max_frobenius_distance").get<double>();
    return {true, "reproducible, all_pass true, eg distance " + fmt(d_eg)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string scenarios_dir = argc > 1 ? argv[1] : "scenarios";

    struct Entry {
        const char* name;
        Crit result;
    };
    std::vector<Entry> entries;
    auto run = [&](const char* name, auto&& fn) {
        Crit c;
        try {
            c = fn();
        } catch (const std::exception& e) {
            c = {false, std::string("exception: ") + e.what()};
        }
        entries.push_back({name, std::move(c)});
    };

    run("superoperator algebra", criterion_algebra);
    run("decay propagator factorization", criterion_factorization);
    run("photon number decay law", criterion_decay_law);
    run("diagonal blocks vs integrator", criterion_diagonal_blocks);
    run("coherence blocks vs integrator", criterion_coherence_blocks);
    run("dispersive cat coherence", criterion_cat_coherence);
    run("state physicality", criterion_physicality);
    run("phase-space distributions", criterion_phase_space);
    run("integrator convergence order", criterion_integrator_order);
    run("scenario run determinism", [&] { return criterion_scenario(scenarios_dir); });

    int failures = 0;
    for (size_t i = 0; i < entries.size(); ++i) {
        const bool ok = entries[i].result.pass;
        failures += ok ? 0 : 1;
        std::printf("[%s] %2zu %s: %s\n", ok ? "PASS" : "FAIL", i + 1, entries[i].name,
                    entries[i].result.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(entries.size()) - failures,
                entries.size());
    return failures;
}
