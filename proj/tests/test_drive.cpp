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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "dqed/drive.hpp"

using namespace dqed;
using Catch::Approx;

TEST_CASE("drive amplitude evaluation", "[drive]") {
    CHECK(eval_f(DriveSpec::constant({0.3, -0.1}), 7.0) == Complex(0.3, -0.1));

    const DriveSpec ex = DriveSpec::exponential({1, 0}, {-0.5, 0});
    CHECK(eval_f(ex, 2.0).real() == Approx(std::exp(-1.0)).epsilon(1e-14));

    const DriveSpec sn = DriveSpec::sinusoid({1, 0}, M_PI, 0.0);
    CHECK(eval_f(sn, 1.0).real() == Approx(-1.0).epsilon(1e-14));

    SECTION("piecewise interpolation and domain checks") {
        const DriveSpec pw = DriveSpec::piecewise(
            {{0.0, {0.0, 0.0}}, {1.0, {1.0, 0.0}}, {2.0, {1.0, 1.0}}});
        CHECK(eval_f(pw, 0.5) == Complex(0.5, 0.0));
        CHECK(eval_f(pw, 1.5) == Complex(1.0, 0.5));
        CHECK(eval_f(pw, 2.0) == Complex(1.0, 1.0));
        CHECK_THROWS_AS(eval_f(pw, 2.5), DomainError);
        CHECK_THROWS_AS(eval_f(pw, -0.1), DomainError);
    }

    SECTION("piecewise sample validation") {
        CHECK_THROWS_AS(DriveSpec::piecewise({{0.0, {1, 0}}}), DomainError);
        CHECK_THROWS_AS(
            DriveSpec::piecewise({{0.0, {1, 0}}, {0.0, {2, 0}}}), DomainError);
        CHECK_THROWS_AS(
            DriveSpec::piecewise({{1.0, {1, 0}}, {0.5, {2, 0}}}), DomainError);
    }
}

TEST_CASE("modulated integral closed forms", "[drive]") {
    SECTION("zero drive integrates to zero") {
        const DriveSpec off = DriveSpec::constant({0, 0});
        CHECK(modulated_integral({off, {0.4, 1.3}, false, 2.0}) == Complex(0, 0));
    }

    SECTION("constant drive, mu = 0") {
        const DriveSpec d = DriveSpec::constant({0.25, -0.5});
        const Complex got = modulated_integral({d, {0, 0}, false, 3.0});
        CHECK(std::abs(got - Complex(0.75, -1.5)) < 1e-14);
    }

    SECTION("pinned reference value") {
        const DriveSpec d = DriveSpec::constant({1, 0});
        const Complex got = modulated_integral({d, {0.5, 1.0}, false, 1.0});
        const Complex want{1.0662040507810621, 0.6422941210974024};
        CHECK(std::abs(got - want) < 1e-12);
    }

    SECTION("closed forms match adaptive quadrature") {
        const Complex mu{0.3, -1.1};
        const double t = 1.7;
        const std::vector<DriveSpec> drives = {
            DriveSpec::constant({0.4, 0.2}),
            DriveSpec::exponential({0.4, 0.2}, {-0.3, 0.8}),
            DriveSpec::piecewise({{0.0, {0.1, 0.0}},
                                  {0.6, {0.3, -0.2}},
                                  {1.2, {-0.1, 0.1}},
                                  {2.0, {0.2, 0.0}}}),
        };
        for (const auto& d : drives) {
            for (bool cj : {false, true}) {
                const Complex closed = modulated_integral({d, mu, cj, t});
                auto integrand = [&](double s) {
                    const Complex f = eval_f(d, s);
                    return (cj ? std::conj(f) : f) * std::exp(mu * s);
                };
                const Complex quad = detail::adaptive_simpson(integrand, 0.0, t, 1e-12);
                CHECK(std::abs(closed - quad) < 1e-10);
            }
        }
    }
}

TEST_CASE("modulated integral structure", "[drive]") {
    const Complex mu{0.2, 0.9};
    const double t1 = 0.6;
    const double t2 = 1.8;

    // Split property: the integral over [0, t2] equals the integral over
    // [0, t1] plus e^{mu t1} times the integral of the time-shifted drive
    // over [0, t2 - t1].
    struct Case {
        DriveSpec whole;
        DriveSpec shifted;
    };
    std::vector<Case> cases;
    cases.push_back({DriveSpec::constant({0.3, -0.4}), DriveSpec::constant({0.3, -0.4})});
    {
        const Complex f0{0.3, -0.4}, kp{-0.2, 0.5};
        cases.push_back({DriveSpec::exponential(f0, kp),
                         DriveSpec::exponential(f0 * std::exp(kp * t1), kp)});
    }
    cases.push_back({DriveSpec::sinusoid({0.7, 0.1}, 2.3, 0.4),
                     DriveSpec::sinusoid({0.7, 0.1}, 2.3, 0.4 + 2.3 * t1)});
    {
        std::vector<DriveSample> smp = {{0.0, {0.1, 0.05}},
                                        {0.7, {0.3, -0.1}},
                                        {1.4, {-0.2, 0.2}},
                                        {2.0, {0.15, 0.0}}};
        std::vector<DriveSample> moved = smp;
        for (auto& s : moved) s.t -= t1;
        cases.push_back({DriveSpec::piecewise(smp), DriveSpec::piecewise(moved)});
    }

    for (const auto& c : cases) {
        const Complex whole = modulated_integral({c.whole, mu, false, t2});
        const Complex head = modulated_integral({c.whole, mu, false, t1});
        const Complex tail = modulated_integral({c.shifted, mu, false, t2 - t1});
        CHECK(std::abs(whole - (head + std::exp(mu * t1) * tail)) < 1e-9);
    }

    SECTION("conjugated drive relates to the adjoint modulation") {
        const DriveSpec d = DriveSpec::exponential({0.4, 0.3}, {-0.1, 0.7});
        const Complex plain = modulated_integral({d, std::conj(mu), false, t2});
        const Complex conj = modulated_integral({d, mu, true, t2});
        CHECK(std::abs(conj - std::conj(plain)) < 1e-12);
    }
}

TEST_CASE("prefactor integral", "[drive]") {
    SECTION("vanishes without a drive") {
        const ModelParams params{1.0, 5.0, 0.2, 0.05};
        const auto d = prefactor_diagnostics(DriveSpec::constant({0, 0}), params,
                                             params.beta(), 2.0);
        CHECK(std::abs(d.phi) == 0.0);
        CHECK(std::abs(d.magnus_theta) == 0.0);
    }

    SECTION("chi = 0 with damping gives a vanishing prefactor") {
        const ModelParams params{1.0, 5.0, 0.0, 0.3};
        const DriveSpec d = DriveSpec::constant({0.2, 0.0});
        CHECK(std::abs(prefactor_integral(d, params, 1.5)) < 1e-15);
    }

    SECTION("beta = 0 is rejected") {
        const ModelParams params{1.0, 5.0, 0.0, 0.0};
        const DriveSpec d = DriveSpec::constant({0.2, 0.0});
        CHECK_THROWS_AS(prefactor_integral(d, params, 1.0), DomainError);
    }

    SECTION("pinned reference value") {
        const ModelParams params{1.0, 5.0, 0.2, 0.0};
        const DriveSpec d = DriveSpec::constant({0.1, 0.0});
        const Complex got = prefactor_integral(d, params, 1.0);
        const Complex want{9.1670288159180849e-03, -5.6952860108819350e-04};
        CHECK(std::abs(got - want) < 1e-11);
    }

    SECTION("agrees with a direct midpoint double integral") {
        const ModelParams params{0.8, 5.0, 0.25, 0.1};
        const Complex beta = params.beta();
        const DriveSpec d = DriveSpec::sinusoid({0.2, 0.1}, 1.7, 0.3);
        const double t = 1.3;

        const Complex inu = kImag * params.nu;
        const Complex w = 1.0 - params.gamma / beta;
        auto F1 = [&](double s) { return eval_f(d, s) * std::exp((inu + beta) * s); };
        auto F2 = [&](double s) {
            return w * std::conj(eval_f(d, s)) * std::exp((-inu - beta) * s);
        };
        auto F3 = [&](double s) { return w * eval_f(d, s) * std::exp((inu - beta) * s); };
        auto F4 = [&](double s) {
            return std::conj(eval_f(d, s)) * std::exp((-inu + beta) * s);
        };

        const int N = 100000;
        const double h = t / N;
        Complex g1 = 0, g4 = 0, phi = 0;
        for (int k = 0; k < N; ++k) {
            const double s = (k + 0.5) * h;
            const Complex f1 = F1(s), f4 = F4(s);
            const Complex g1_mid = g1 + f1 * (0.5 * h);
            const Complex g4_mid = g4 + f4 * (0.5 * h);
            phi += (F2(s) * g1_mid + F3(s) * g4_mid) * h;
            g1 += f1 * h;
            g4 += f4 * h;
        }

        const Complex got = prefactor_integral(d, params, beta, t);
        CHECK(std::abs(got - phi) < 1e-8);
    }

    SECTION("Magnus exponent cancels the prefactor") {
        const ModelParams params{1.0, 5.0, 0.2, 0.05};
        for (const auto& d : {DriveSpec::constant({0.1, 0.0}),
                              DriveSpec::sinusoid({0.15, 0.05}, 2.0, 0.7)}) {
            const auto diag = prefactor_diagnostics(d, params, params.beta(), 2.0);
            CHECK(std::abs(diag.magnus_theta + diag.phi) < 1e-10);
        }
    }
}
