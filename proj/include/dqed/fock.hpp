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
#include <unsupported/Eigen/MatrixFunctions>

#include "dqed/common.hpp"

namespace dqed {

/// Annihilation operator a on the truncated space: entry (n-1, n) = sqrt(n).
inline FieldMatrix annihilation_matrix(const Truncation& trunc) {
    const int d = trunc.dim();
    FieldMatrix a = FieldMatrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

inline FieldMatrix creation_matrix(const Truncation& trunc) {
    return annihilation_matrix(trunc).adjoint();
}

/// Number operator a†a = diag(0, 1, ..., n_max).
inline FieldMatrix number_matrix(const Truncation& trunc) {
    const int d = trunc.dim();
    FieldMatrix n = FieldMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

inline FieldVector fock_state(int n, const Truncation& trunc) {
    if (n < 0 || n > trunc.n_max)
        throw DomainError("fock_state: n = " + std::to_string(n) + " outside [0, " +
                          std::to_string(trunc.n_max) + "]");
    FieldVector v = FieldVector::Zero(trunc.dim());
    v(n) = 1.0;
    return v;
}

/// Coherent-state amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!) up to n_max.
/// Warns when the truncated norm falls measurably short of 1.
inline FieldVector coherent_state(Complex alpha, const Truncation& trunc) {
    const int d = trunc.dim();
    FieldVector v(d);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < d; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    const double loss = 1.0 - v.squaredNorm();
    if (loss > 1e-10)
        warn("coherent_state: truncation loss " + std::to_string(loss) + " at |alpha|^2 = " +
             std::to_string(std::norm(alpha)) + ", n_max = " + std::to_string(trunc.n_max));
    return v;
}

/// Glauber displacement D(alpha) = exp(alpha a† - alpha* a), computed as the
/// matrix exponential of the anti-Hermitian generator.
inline FieldMatrix displacement(Complex alpha, const Truncation& trunc) {
    const FieldMatrix a = annihilation_matrix(trunc);
    const FieldMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return gen.exp();
}

inline Complex trace(const FieldMatrix& m) { return m.trace(); }

inline double frobenius_distance(const FieldMatrix& m1, const FieldMatrix& m2) {
    require_same_dim(m1, m2);
    return (m1 - m2).norm();
}

inline FieldMatrix adjoint(const FieldMatrix& m) { return m.adjoint(); }

}  // namespace dqed
