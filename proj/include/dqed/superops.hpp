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

#include "dqed/common.hpp"

namespace dqed {

/// Parameters entering the dissipative superoperators: dispersive constant
/// chi and decay rate gamma >= 0.
struct SuperopParams {
    double chi = 0.0;
    double gamma = 0.0;

    SuperopParams() = default;
    SuperopParams(double chi_, double gamma_) : chi(chi_), gamma(gamma_) {
        if (gamma < 0.0) throw DomainError("SuperopParams: gamma must be >= 0");
    }
};

/// L rho = a†a rho + rho a†a, entrywise (m+n) rho_{mn}.
inline FieldMatrix apply_L(const FieldMatrix& rho) {
    const int d = static_cast<int>(rho.rows());
    FieldMatrix out(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) out(m, n) = static_cast<double>(m + n) * rho(m, n);
    return out;
}

/// J rho = 2 a rho a†, entrywise 2 sqrt((m+1)(n+1)) rho_{m+1,n+1}.
inline FieldMatrix apply_J(const FieldMatrix& rho) {
    const int d = static_cast<int>(rho.rows());
    FieldMatrix out = FieldMatrix::Zero(d, d);
    for (int m = 0; m + 1 < d; ++m)
        for (int n = 0; n + 1 < d; ++n)
            out(m, n) = 2.0 * std::sqrt(static_cast<double>((m + 1) * (n + 1))) * rho(m + 1, n + 1);
    return out;
}

/// Lindblad dissipator gamma (J - L) rho.
inline FieldMatrix apply_lindblad(const SuperopParams& p, const FieldMatrix& rho) {
    return p.gamma * (apply_J(rho) - apply_L(rho));
}

/// R rho = -i chi [a†a, rho], entrywise -i chi (m-n) rho_{mn}.
inline FieldMatrix apply_R(const SuperopParams& p, const FieldMatrix& rho) {
    const int d = static_cast<int>(rho.rows());
    FieldMatrix out(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            out(m, n) = -kImag * p.chi * static_cast<double>(m - n) * rho(m, n);
    return out;
}

/// S(eps) rho = -i [eps a† + eps* a, rho].
inline FieldMatrix apply_S(Complex eps, const FieldMatrix& rho) {
    const int d = static_cast<int>(rho.rows());
    const Complex ec = std::conj(eps);
    FieldMatrix out = FieldMatrix::Zero(d, d);
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            Complex v = 0.0;
            // (a† rho)_{mn} = sqrt(m) rho_{m-1,n}; (a rho)_{mn} = sqrt(m+1) rho_{m+1,n}
            if (m >= 1) v += eps * std::sqrt(static_cast<double>(m)) * rho(m - 1, n);
            if (m + 1 < d) v += ec * std::sqrt(static_cast<double>(m + 1)) * rho(m + 1, n);
            // (rho a†)_{mn} = sqrt(n+1) rho_{m,n+1}; (rho a)_{mn} = sqrt(n) rho_{m,n-1}
            if (n + 1 < d) v -= eps * std::sqrt(static_cast<double>(n + 1)) * rho(m, n + 1);
            if (n >= 1) v -= ec * std::sqrt(static_cast<double>(n)) * rho(m, n - 1);
            out(m, n) = -kImag * v;
        }
    }
    return out;
}

/// S1(f) rho = -2i (f rho a† - f* a rho).
inline FieldMatrix apply_S1(Complex f, const FieldMatrix& rho) {
    const int d = static_cast<int>(rho.rows());
    const Complex fc = std::conj(f);
    FieldMatrix out = FieldMatrix::Zero(d, d);
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            Complex v = 0.0;
            if (n + 1 < d) v += f * std::sqrt(static_cast<double>(n + 1)) * rho(m, n + 1);
            if (m + 1 < d) v -= fc * std::sqrt(static_cast<double>(m + 1)) * rho(m + 1, n);
            out(m, n) = -2.0 * kImag * v;
        }
    }
    return out;
}

/// e^{Rt}: entrywise phase e^{-i chi t (m-n)}.
inline FieldMatrix exp_R(const SuperopParams& p, double t, const FieldMatrix& rho) {
    const int d = static_cast<int>(rho.rows());
    FieldMatrix out(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            out(m, n) = std::exp(-kImag * p.chi * t * static_cast<double>(m - n)) * rho(m, n);
    return out;
}

/// e^{-gamma t L}: entrywise damping e^{-gamma t (m+n)}.
inline FieldMatrix exp_L_decay(const SuperopParams& p, double t, const FieldMatrix& rho) {
    const int d = static_cast<int>(rho.rows());
    FieldMatrix out(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            out(m, n) = std::exp(-p.gamma * t * static_cast<double>(m + n)) * rho(m, n);
    return out;
}

/// e^{cJ}: finite sum rho_{mn} <- sum_k (2c)^k/k! sqrt[(m+k)!/m!] sqrt[(n+k)!/n!]
/// rho_{m+k,n+k}. J is nilpotent on the truncated space, so the sum is exact.
inline FieldMatrix exp_J(Complex c, const FieldMatrix& rho) {
    const int d = static_cast<int>(rho.rows());
    if (!std::isfinite(std::abs(c))) throw DomainError("exp_J: coefficient must be finite");
    FieldMatrix out(d, d);
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            Complex acc = rho(m, n);
            Complex w = 1.0;
            const int kmax = d - 1 - std::max(m, n);
            for (int k = 0; k < kmax; ++k) {
                w *= 2.0 * c * std::sqrt(static_cast<double>((m + k + 1) * (n + k + 1))) /
                     static_cast<double>(k + 1);
                acc += w * rho(m + k + 1, n + k + 1);
            }
            out(m, n) = acc;
        }
    }
    return out;
}

/// e^{(sign*R + gamma(J-L))t} as exact Fock-basis factors.
/// The coefficient c = (1-e^{-2 gamma t})/2 is tied to applying exp_J before
/// exp_L_decay; with exp_L_decay first, c would be (e^{2 gamma t}-1)/2.
inline FieldMatrix decay_propagator(const SuperopParams& p, double t, int sign,
                                    const FieldMatrix& rho) {
    if (sign != 1 && sign != -1) throw DomainError("decay_propagator: sign must be +1 or -1");
    if (!std::isfinite(p.gamma * t)) throw DomainError("decay_propagator: gamma*t must be finite");
    const double c = 0.5 * (1.0 - std::exp(-2.0 * p.gamma * t));
    const SuperopParams ps{sign * p.chi, p.gamma};
    return exp_R(ps, t, exp_L_decay(p, t, exp_J(c, rho)));
}

}  // namespace dqed
