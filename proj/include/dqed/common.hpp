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

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace dqed {

using Complex = std::complex<double>;
using FieldMatrix = Eigen::MatrixXcd;
using FieldVector = Eigen::VectorXcd;

inline constexpr Complex kImag{0.0, 1.0};

/// Highest retained Fock level; every matrix in one computation shares one
/// Truncation. dim() = n_max + 1.
struct Truncation {
    int n_max = 32;

    Truncation() = default;
    explicit Truncation(int n) : n_max(n) {
        if (n_max < 1) throw std::invalid_argument("Truncation: n_max must be >= 1");
    }

    int dim() const { return n_max + 1; }
};

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionError : public Error {
  public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

class DomainError : public Error {
  public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

class QuadratureError : public Error {
  public:
    explicit QuadratureError(const std::string& msg) : Error(msg) {}
};

/// Thrown when the analytic coherence path would exceed double range
/// (gamma * t * n_max too large); the caller should fall back to the oracle.
class OverflowGuardError : public Error {
  public:
    explicit OverflowGuardError(const std::string& msg) : Error(msg) {}
};

/// Scenario validation failure; carries the offending field name.
class ScenarioError : public Error {
  public:
    ScenarioError(std::string field_name, const std::string& msg)
        : Error(msg), field(std::move(field_name)) {}
    std::string field;
};

using WarningHandler = std::function<void(const std::string&)>;

namespace detail {
inline WarningHandler& warning_handler() {
    static WarningHandler handler = [](const std::string& msg) {
        std::cerr << "warning: " << msg << "\n";
    };
    return handler;
}
}  // namespace detail

/// Replace the global warning sink (pass nullptr to silence warnings).
inline void set_warning_handler(WarningHandler handler) {
    detail::warning_handler() = std::move(handler);
}

inline void warn(const std::string& msg) {
    if (auto& h = detail::warning_handler()) h(msg);
}

inline void require_same_dim(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("matrix dimension mismatch: " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
}

}  // namespace dqed
