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

#include "dqed/common.hpp"
#include "dqed/superops.hpp"

namespace dqed {

/// Model frequencies: field frequency nu, atomic frequency omega, dispersive
/// constant chi, decay rate gamma. omega enters only the lab-frame map.
struct ModelParams {
    double nu = 0.0;
    double omega = 0.0;
    double chi = 0.0;
    double gamma = 0.0;

    ModelParams() = default;
    ModelParams(double nu_, double omega_, double chi_, double gamma_)
        : nu(nu_), omega(omega_), chi(chi_), gamma(gamma_) {
        if (gamma < 0.0) throw DomainError("ModelParams: gamma must be >= 0");
    }

    Complex beta() const { return Complex{gamma, chi}; }
    SuperopParams superop() const { return SuperopParams{chi, gamma}; }
};

}  // namespace dqed
