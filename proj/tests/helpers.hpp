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

#include <random>
#include <string>
#include <vector>

#include "dqed/common.hpp"

namespace test_helpers {

using dqed::Complex;
using dqed::FieldMatrix;

/// Random complex matrix with entries zeroed above the given support level.
inline FieldMatrix random_supported(std::mt19937& rng, int dim, int support) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    FieldMatrix m = FieldMatrix::Zero(dim, dim);
    for (int r = 0; r <= support; ++r)
        for (int c = 0; c <= support; ++c) m(r, c) = Complex{uni(rng), uni(rng)};
    return m;
}

/// Random density matrix (Hermitian, positive, unit trace) on the support.
inline FieldMatrix random_density(std::mt19937& rng, int dim, int support) {
    const FieldMatrix m = random_supported(rng, dim, support);
    FieldMatrix rho = m * m.adjoint();
    rho /= rho.trace();
    return rho;
}

/// Collects warnings emitted through the global handler while alive.
class WarningCapture {
  public:
    WarningCapture() : prev_(dqed::detail::warning_handler()) {
        dqed::set_warning_handler([this](const std::string& msg) { messages.push_back(msg); });
    }
    ~WarningCapture() { dqed::set_warning_handler(prev_); }

    std::vector<std::string> messages;

  private:
    dqed::WarningHandler prev_;
};

}  // namespace test_helpers
