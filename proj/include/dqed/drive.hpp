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
#include <cmath>
#include <string>
#include <vector>

#include "dqed/common.hpp"
#include "dqed/model.hpp"

namespace dqed {

enum class DriveKind { Constant, Exponential, Sinusoid, PiecewiseLinear };

struct DriveSample {
    double t = 0.0;
    Complex f{0.0, 0.0};
};

/// Parametric drive amplitude f(t).
///   constant:    f(t) = f0
///   exponential: f(t) = f0 e^{kappa t}
///   sinusoid:    f(t) = f0 cos(Omega t + phi)
///   piecewise:   linear interpolation of (t_i, f_i) samples
struct DriveSpec {
    DriveKind kind = DriveKind::Constant;
    Complex f0{0.0, 0.0};
    Complex kappa{0.0, 0.0};
    double Omega = 0.0;
    double phi = 0.0;
    std::vector<DriveSample> samples;

    static DriveSpec constant(Complex f0_) {
        DriveSpec s;
        s.kind = DriveKind::Constant;
        s.f0 = f0_;
        return s;
    }

    static DriveSpec exponential(Complex f0_, Complex kappa_) {
        DriveSpec s;
        s.kind = DriveKind::Exponential;
        s.f0 = f0_;
        s.kappa = kappa_;
        return s;
    }

    static DriveSpec sinusoid(Complex f0_, double Omega_, double phi_) {
        DriveSpec s;
        s.kind = DriveKind::Sinusoid;
        s.f0 = f0_;
        s.Omega = Omega_;
        s.phi = phi_;
        return s;
    }

    static DriveSpec piecewise(std::vector<DriveSample> samples_) {
        if (samples_.size() < 2)
            throw DomainError("DriveSpec: piecewise drive needs at least two samples");
        for (size_t i = 1; i < samples_.size(); ++i)
            if (!(samples_[i].t > samples_[i - 1].t))
                throw DomainError("DriveSpec: sample times must be strictly increasing");
        DriveSpec s;
        s.kind = DriveKind::PiecewiseLinear;
        s.samples = std::move(samples_);
        return s;
    }
};

/// Drive amplitude at time t. Sampled drives are only defined on their table.
inline Complex eval_f(const DriveSpec& spec, double t) {
    switch (spec.kind) {
        case DriveKind::Constant:
            return spec.f0;
        case DriveKind::Exponential:
            return spec.f0 * std::exp(spec.kappa * t);
        case DriveKind::Sinusoid:
            return spec.f0 * std::cos(spec.Omega * t + spec.phi);
        case DriveKind::PiecewiseLinear: {
            const auto& s = spec.samples;
            if (t < s.front().t || t > s.back().t)
                throw DomainError("eval_f: t = " + std::to_string(t) +
                                  " outside sampled drive domain [" + std::to_string(s.front().t) +
                                  ", " + std::to_string(s.back().t) + "]");
            auto it = std::upper_bound(s.begin(), s.end(), t,
                                       [](double x, const DriveSample& d) { return x < d.t; });
            if (it == s.begin()) return s.front().f;
            if (it == s.end()) return s.back().f;
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double w = (t - lo.t) / (hi.t - lo.t);
            return lo.f + w * (hi.f - lo.f);
        }
    }
    throw Error("eval_f: unreachable");
}

struct ModulatedIntegralRequest {
    DriveSpec spec;
    Complex mu{0.0, 0.0};
    bool conjugate_f = false;
    double t = 0.0;
};

namespace detail {

/// E(mu, t) = ∫_0^t e^{mu s} ds, with a series branch near mu t = 0.
inline Complex exp_integral_0(Complex mu, double t) {
    const Complex z = mu * t;
    if (std::abs(z) < 0.5) {
        Complex sum = 0.0;
        Complex term = t;  // k = 0: t / 1!
        for (int k = 0; k < 24; ++k) {
            sum += term;
            term *= z / static_cast<double>(k + 2);
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / mu;
}

/// ∫_0^t s e^{mu s} ds.
inline Complex exp_integral_1(Complex mu, double t) {
    const Complex z = mu * t;
    if (std::abs(z) < 0.5) {
        Complex sum = 0.0;
        Complex term = t * t / 2.0;  // k = 0: t^2 / (0! * 2)
        for (int k = 0; k < 24; ++k) {
            sum += term;
            // term_k = t^2 (mu t)^k / (k! (k+2)); advance k -> k+1
            term *= z * static_cast<double>(k + 2) /
                    (static_cast<double>(k + 1) * static_cast<double>(k + 3));
        }
        return sum;
    }
    return (t * std::exp(z) - exp_integral_0(mu, t)) / mu;
}

template <typename F>
Complex adaptive_simpson_rec(const F& f, double a, double b, Complex fa, Complex fm, Complex fb,
                             Complex S, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Complex flm = f(lm);
    const Complex frm = f(rm);
    const Complex Sl = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Complex Sr = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const Complex S2 = Sl + Sr;
    if (std::abs(S2 - S) <= 15.0 * tol) return S2 + (S2 - S) / 15.0;
    if (depth <= 0)
        throw QuadratureError("adaptive Simpson: max depth reached on [" + std::to_string(a) +
                              ", " + std::to_string(b) + "]");
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, Sl, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, Sr, 0.5 * tol, depth - 1);
}

template <typename F>
Complex adaptive_simpson(const F& f, double a, double b, double tol = 1e-10, int max_depth = 40) {
    if (a == b) return Complex{0.0, 0.0};
    const Complex fa = f(a);
    const Complex fm = f(0.5 * (a + b));
    const Complex fb = f(b);
    const Complex S = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, S, tol, max_depth);
}

}  // namespace detail

/// ∫_0^t f~(s) e^{mu s} ds with f~ = f or f* per the request. Closed form for
/// constant and exponential drives, segment-exact for piecewise-linear,
/// adaptive quadrature for sinusoids.
inline Complex modulated_integral(const ModulatedIntegralRequest& req) {
    if (req.t < 0.0) throw DomainError("modulated_integral: t must be >= 0");
    if (req.t == 0.0) return Complex{0.0, 0.0};
    const auto& spec = req.spec;
    const bool cj = req.conjugate_f;
    const Complex mu = req.mu;

    switch (spec.kind) {
        case DriveKind::Constant: {
            const Complex f0 = cj ? std::conj(spec.f0) : spec.f0;
            return f0 * detail::exp_integral_0(mu, req.t);
        }
        case DriveKind::Exponential: {
            const Complex f0 = cj ? std::conj(spec.f0) : spec.f0;
            const Complex kp = cj ? std::conj(spec.kappa) : spec.kappa;
            return f0 * detail::exp_integral_0(mu + kp, req.t);
        }
        case DriveKind::Sinusoid: {
            auto integrand = [&](double s) {
                const Complex f = eval_f(spec, s);
                return (cj ? std::conj(f) : f) * std::exp(mu * s);
            };
            return detail::adaptive_simpson(integrand, 0.0, req.t);
        }
        case DriveKind::PiecewiseLinear: {
            const auto& smp = spec.samples;
            if (smp.front().t > 0.0 || smp.back().t < req.t)
                throw DomainError("modulated_integral: sampled drive does not cover [0, t]");
            Complex acc{0.0, 0.0};
            for (size_t i = 0; i + 1 < smp.size(); ++i) {
                const double a = smp[i].t;
                if (a >= req.t) break;
                // Sample tables may start before 0; only [0, t] contributes.
                const double lo = std::max(a, 0.0);
                const double b = std::min(smp[i + 1].t, req.t);
                if (b <= lo) continue;
                Complex fa = smp[i].f;
                Complex slope = (smp[i + 1].f - smp[i].f) / (smp[i + 1].t - smp[i].t);
                if (cj) {
                    fa = std::conj(fa);
                    slope = std::conj(slope);
                }
                const Complex f_lo = fa + slope * (lo - a);
                const double h = b - lo;
                acc += std::exp(mu * lo) *
                       (f_lo * detail::exp_integral_0(mu, h) + slope * detail::exp_integral_1(mu, h));
            }
            return acc;
        }
    }
    throw Error("modulated_integral: unreachable");
}

/// The four coherence-chain integrals G_j(beta, t) = ∫_0^t F_j(s) ds with
///   F1 = f_nu e^{beta s},           F2 = (1-gamma/beta) f_nu* e^{-beta s},
///   F3 = (1-gamma/beta) f_nu e^{-beta s},   F4 = f_nu* e^{beta s},
/// and f_nu(s) = f(s) e^{i nu s}. All vanish at t = 0 by construction.
struct CoherenceIntegrals {
    Complex G1{0.0, 0.0}, G2{0.0, 0.0}, G3{0.0, 0.0}, G4{0.0, 0.0};
};

inline CoherenceIntegrals coherence_integrals(const DriveSpec& spec, const ModelParams& params,
                                              Complex beta, double t) {
    if (std::abs(beta) == 0.0) throw DomainError("coherence_integrals: beta must be nonzero");
    const Complex inu = kImag * params.nu;
    const Complex w = 1.0 - params.gamma / beta;
    CoherenceIntegrals g;
    g.G1 = modulated_integral({spec, inu + beta, false, t});
    g.G2 = w * modulated_integral({spec, -inu - beta, true, t});
    g.G3 = w * modulated_integral({spec, inu - beta, false, t});
    g.G4 = modulated_integral({spec, -inu + beta, true, t});
    return g;
}

/// Scalar prefactor Phi(t) = ∫_0^t [F2 G1 + F3 G4] ds together with the
/// independently assembled Magnus exponent Theta(t); the coherence solution
/// carries e^{-Phi}, and Theta = -Phi when the closed form is exact.
struct PrefactorDiagnostics {
    Complex phi{0.0, 0.0};
    Complex magnus_theta{0.0, 0.0};
};

namespace detail {

struct PrefactorGridResult {
    Complex phi, omega2, omega2bar;
    CoherenceIntegrals g;
};

/// Cumulative composite Simpson over one smooth span [a, b] with N (even)
/// intervals. Inner running integrals G_j are reused by the outer sums.
inline void prefactor_span(const DriveSpec& spec, const ModelParams& params, Complex beta,
                           double a, double b, int N, PrefactorGridResult& st) {
    const Complex inu = kImag * params.nu;
    const Complex w = 1.0 - params.gamma / beta;
    const double h = (b - a) / N;

    std::vector<Complex> F1(N + 1), F2(N + 1), F3(N + 1), F4(N + 1);
    for (int i = 0; i <= N; ++i) {
        const double s = a + h * i;
        const Complex f = eval_f(spec, s);
        const Complex fc = std::conj(f);
        const Complex ep = std::exp((inu + beta) * s);
        const Complex em = std::exp((-inu - beta) * s);
        F1[i] = f * ep;
        F2[i] = w * fc * em;
        F3[i] = w * f * std::exp((inu - beta) * s);
        F4[i] = fc * std::exp((-inu + beta) * s);
    }

    // Running G_j at all nodes: Simpson pairs at even nodes, half-panel
    // quadratic rule at odd nodes.
    std::vector<Complex> G1(N + 1), G2(N + 1), G3(N + 1), G4(N + 1);
    G1[0] = st.g.G1;
    G2[0] = st.g.G2;
    G3[0] = st.g.G3;
    G4[0] = st.g.G4;
    auto cumulate = [&](std::vector<Complex>& G, const std::vector<Complex>& F) {
        for (int k = 0; k + 2 <= N; k += 2) {
            G[k + 1] = G[k] + h / 12.0 * (5.0 * F[k] + 8.0 * F[k + 1] - F[k + 2]);
            G[k + 2] = G[k] + h / 3.0 * (F[k] + 4.0 * F[k + 1] + F[k + 2]);
        }
    };
    cumulate(G1, F1);
    cumulate(G2, F2);
    cumulate(G3, F3);
    cumulate(G4, F4);

    auto simpson_sum = [&](auto&& node) {
        Complex acc{0.0, 0.0};
        for (int k = 0; k + 2 <= N; k += 2)
            acc += h / 3.0 * (node(k) + 4.0 * node(k + 1) + node(k + 2));
        return acc;
    };
    st.phi += simpson_sum([&](int i) { return F2[i] * G1[i] + F3[i] * G4[i]; });
    st.omega2 += simpson_sum([&](int i) { return 0.5 * (F1[i] * G2[i] - F2[i] * G1[i]); });
    st.omega2bar += simpson_sum([&](int i) { return -0.5 * (F3[i] * G4[i] - F4[i] * G3[i]); });
    st.g = CoherenceIntegrals{G1[N], G2[N], G3[N], G4[N]};
}

inline PrefactorGridResult prefactor_grid(const DriveSpec& spec, const ModelParams& params,
                                          Complex beta, double t, int N_per_span) {
    // Spans are the smooth pieces: one span per sample segment for piecewise
    // drives, the whole interval otherwise.
    std::vector<double> edges{0.0};
    if (spec.kind == DriveKind::PiecewiseLinear) {
        for (const auto& s : spec.samples)
            if (s.t > 0.0 && s.t < t) edges.push_back(s.t);
    }
    edges.push_back(t);

    PrefactorGridResult st{};
    for (size_t i = 0; i + 1 < edges.size(); ++i)
        prefactor_span(spec, params, beta, edges[i], edges[i + 1], N_per_span, st);
    return st;
}

}  // namespace detail

inline PrefactorDiagnostics prefactor_diagnostics(const DriveSpec& spec, const ModelParams& params,
                                                  Complex beta, double t) {
    if (std::abs(beta) == 0.0)
        throw DomainError("prefactor_integral: beta = 0 (gamma = chi = 0); the coherence block "
                          "needs no prefactor in that case");
    if (t < 0.0) throw DomainError("prefactor_integral: t must be >= 0");
    PrefactorDiagnostics out;
    if (t == 0.0) return out;

    const double tol = 1e-12;
    detail::PrefactorGridResult prev = detail::prefactor_grid(spec, params, beta, t, 64);
    for (int N = 128; N <= (1 << 22); N *= 2) {
        const detail::PrefactorGridResult cur = detail::prefactor_grid(spec, params, beta, t, N);
        const double scale = std::max(1.0, std::abs(cur.phi));
        if (std::abs(cur.phi - prev.phi) < tol * scale &&
            std::abs(cur.omega2 - prev.omega2) < tol * scale &&
            std::abs(cur.omega2bar - prev.omega2bar) < tol * scale) {
            const CoherenceIntegrals g = coherence_integrals(spec, params, beta, t);
            out.phi = cur.phi;
            out.magnus_theta =
                cur.omega2 + cur.omega2bar - 0.5 * (g.G1 * g.G2 + g.G3 * g.G4);
            return out;
        }
        prev = cur;
    }
    throw QuadratureError("prefactor_integral: cumulative quadrature did not converge");
}

inline Complex prefactor_integral(const DriveSpec& spec, const ModelParams& params, Complex beta,
                                  double t) {
    return prefactor_diagnostics(spec, params, beta, t).phi;
}

inline Complex prefactor_integral(const DriveSpec& spec, const ModelParams& params, double t) {
    return prefactor_integral(spec, params, params.beta(), t);
}

}  // namespace dqed
