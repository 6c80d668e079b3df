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
#include <string>

#include "dqed/common.hpp"
#include "dqed/drive.hpp"
#include "dqed/fock.hpp"
#include "dqed/model.hpp"
#include "dqed/superops.hpp"

namespace dqed {

/// The four field-operator-valued blocks of the atom-field density matrix in
/// the atomic basis {|e>, |g>}.
struct AtomFieldState {
    FieldMatrix rho_ee, rho_eg, rho_ge, rho_gg;
};

/// sigma_ee = (1 - sigma_z)/2 with sigma_z|e> = +|e> is the *ground*
/// projector; under that reading the lab-frame eg block carries the atomic
/// phase e^{-i(omega - chi)t}. Flip to false for the excited-projector
/// reading, which changes the phase to e^{-i(omega + chi)t}. Transformed-frame
/// dynamics and all shipped observables are unaffected either way.
inline constexpr bool kSigmaEeIsGroundProjector = true;

/// Pure product state (c_e|e> + c_g|g>) ⊗ |field>.
inline AtomFieldState product_state(Complex c_e, Complex c_g, const FieldVector& field) {
    const FieldMatrix rho_f = field * field.adjoint();
    AtomFieldState st;
    st.rho_ee = std::norm(c_e) * rho_f;
    st.rho_eg = c_e * std::conj(c_g) * rho_f;
    st.rho_ge = st.rho_eg.adjoint();
    st.rho_gg = std::norm(c_g) * rho_f;
    return st;
}

/// Full 2(n_max+1)-dimensional matrix in basis order (|e>, |g>) ⊗ Fock.
inline FieldMatrix assemble(const AtomFieldState& st) {
    const int d = static_cast<int>(st.rho_ee.rows());
    FieldMatrix m(2 * d, 2 * d);
    m.topLeftCorner(d, d) = st.rho_ee;
    m.topRightCorner(d, d) = st.rho_eg;
    m.bottomLeftCorner(d, d) = st.rho_ge;
    m.bottomRightCorner(d, d) = st.rho_gg;
    return m;
}

struct StateHealth {
    double herm_ee = 0.0;          // ||rho_ee - rho_ee†||_F
    double herm_gg = 0.0;          // ||rho_gg - rho_gg†||_F
    double adjoint_mismatch = 0.0; // ||rho_ge - rho_eg†||_F
    double trace_deviation = 0.0;  // |tr(rho_ee) + tr(rho_gg) - 1|
    double min_eigenvalue = 0.0;   // of the Hermitized assembled matrix
};

inline StateHealth check_state(const AtomFieldState& st) {
    StateHealth h;
    h.herm_ee = (st.rho_ee - st.rho_ee.adjoint().eval()).norm();
    h.herm_gg = (st.rho_gg - st.rho_gg.adjoint().eval()).norm();
    h.adjoint_mismatch = (st.rho_ge - st.rho_eg.adjoint().eval()).norm();
    h.trace_deviation = std::abs((st.rho_ee.trace() + st.rho_gg.trace()) - Complex{1.0, 0.0});
    const FieldMatrix full = assemble(st);
    const FieldMatrix herm = 0.5 * (full + full.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<FieldMatrix> es(herm, Eigen::EigenvaluesOnly);
    h.min_eigenvalue = es.eigenvalues().minCoeff();
    return h;
}

/// Warn (never renormalize) when a state drifts past the block invariants.
inline void validate_state(const AtomFieldState& st, const std::string& where) {
    const StateHealth h = check_state(st);
    if (h.herm_ee > 1e-10 || h.herm_gg > 1e-10)
        warn(where + ": Hermiticity residual ee=" + std::to_string(h.herm_ee) +
             " gg=" + std::to_string(h.herm_gg));
    if (h.adjoint_mismatch > 1e-10)
        warn(where + ": rho_ge vs adjoint(rho_eg) mismatch " +
             std::to_string(h.adjoint_mismatch));
    if (h.trace_deviation > 1e-8)
        warn(where + ": total trace deviates from 1 by " + std::to_string(h.trace_deviation));
    if (h.min_eigenvalue < -1e-8)
        warn(where + ": assembled state has eigenvalue " + std::to_string(h.min_eigenvalue));
}

namespace detail {

/// e^{z N} e^{c a†} as one lower-triangular matrix:
/// entry (m, n) = e^{z m} c^{m-n} sqrt(m!/n!) / (m-n)! for m >= n.
inline FieldMatrix raising_exp_scaled(Complex c, Complex z, int dim) {
    FieldMatrix out = FieldMatrix::Zero(dim, dim);
    const Complex ez = std::exp(z);
    for (int n = 0; n < dim; ++n) {
        Complex val = std::exp(z * static_cast<double>(n));
        out(n, n) = val;
        for (int m = n + 1; m < dim; ++m) {
            val *= ez * c * std::sqrt(static_cast<double>(m)) / static_cast<double>(m - n);
            out(m, n) = val;
        }
    }
    return out;
}

/// e^{c a} e^{z N} as one upper-triangular matrix:
/// entry (m, n) = c^{n-m} sqrt(n!/m!) / (n-m)! e^{z n} for n >= m.
inline FieldMatrix lowering_exp_scaled(Complex c, Complex z, int dim) {
    FieldMatrix out = FieldMatrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        Complex val = std::exp(z * static_cast<double>(n));
        out(n, n) = val;
        for (int m = n - 1; m >= 0; --m) {
            val *= c * std::sqrt(static_cast<double>(m + 1)) / static_cast<double>(n - m);
            out(m, n) = val;
        }
    }
    return out;
}

/// Common closed form for the eg (beta = gamma + i chi) and ge (beta*)
/// blocks. Steps, right to left:
///   sigma      = exp_J(+gamma/(2 beta)) rho0
///   sigma2     = [e^{-beta t N} e^{-i G1 a†} e^{-i G2 a}] sigma
///                [e^{i G3 a†} e^{i G4 a} e^{-beta t N}]
///   rho(t)     = e^{-Phi(t)} exp_J(-gamma/(2 beta)) sigma2
/// The e^{-beta t N} damping is folded into the ladder exponentials entry by
/// entry, so no e^{+gamma t n} intermediate is ever materialized.
inline FieldMatrix solve_coherence(const ModelParams& params, const DriveSpec& drive,
                                   const FieldMatrix& rho0, double t, Complex beta) {
    const int d = static_cast<int>(rho0.rows());
    if (t == 0.0 || rho0.isZero(0.0)) return rho0;

    if (std::abs(beta) == 0.0) {
        // gamma = chi = 0: pure drive displacement.
        const Complex G = modulated_integral({drive, kImag * params.nu, false, t});
        const FieldMatrix D = displacement(kImag * G, Truncation{d - 1});
        return D.adjoint() * rho0 * D;
    }

    if (params.gamma * t * (d - 1) > 60.0)
        throw OverflowGuardError(
            "coherence block: gamma*t*n_max = " + std::to_string(params.gamma * t * (d - 1)) +
            " > 60 exceeds the double-precision safety margin; use the oracle path");

    const CoherenceIntegrals g = coherence_integrals(drive, params, beta, t);
    const Complex phi = prefactor_integral(drive, params, beta, t);
    const Complex half_ratio = 0.5 * params.gamma / beta;

    const FieldMatrix sigma = exp_J(half_ratio, rho0);
    const FieldMatrix left = raising_exp_scaled(-kImag * g.G1, -beta * t, d) *
                             lowering_exp_scaled(-kImag * g.G2, Complex{0, 0}, d);
    const FieldMatrix right = raising_exp_scaled(kImag * g.G3, Complex{0, 0}, d) *
                              lowering_exp_scaled(kImag * g.G4, -beta * t, d);
    return std::exp(-phi) * exp_J(-half_ratio, left * sigma * right);
}

inline void warn_drive_overflow(Complex G, int n_max, const std::string& where) {
    if (std::norm(G) > 0.25 * n_max)
        warn(where + ": displacement |G|^2 = " + std::to_string(std::norm(G)) +
             " exceeds n_max/4; truncation may be unreliable");
}

}  // namespace detail

/// ee block: rho(t) = e^{(R+L)t} D†(iG+) rho0 D(iG+),
/// with G+(t) = ∫_0^t f(s) e^{i(nu+chi)s + gamma s} ds.
inline FieldMatrix solve_rho_ee(const ModelParams& params, const DriveSpec& drive,
                                const FieldMatrix& rho0, double t) {
    const int d = static_cast<int>(rho0.rows());
    const Complex mu = kImag * (params.nu + params.chi) + params.gamma;
    const Complex G = modulated_integral({drive, mu, false, t});
    detail::warn_drive_overflow(G, d - 1, "solve_rho_ee");
    const FieldMatrix D = displacement(kImag * G, Truncation{d - 1});
    return decay_propagator(params.superop(), t, +1, D.adjoint() * rho0 * D);
}

/// gg block: same construction with G-(t) (chi -> -chi) and sign -1.
inline FieldMatrix solve_rho_gg(const ModelParams& params, const DriveSpec& drive,
                                const FieldMatrix& rho0, double t) {
    const int d = static_cast<int>(rho0.rows());
    const Complex mu = kImag * (params.nu - params.chi) + params.gamma;
    const Complex G = modulated_integral({drive, mu, false, t});
    detail::warn_drive_overflow(G, d - 1, "solve_rho_gg");
    const FieldMatrix D = displacement(kImag * G, Truncation{d - 1});
    return decay_propagator(params.superop(), t, -1, D.adjoint() * rho0 * D);
}

/// eg block, generator S(f_nu) + L_damp - i chi L.
inline FieldMatrix solve_rho_eg(const ModelParams& params, const DriveSpec& drive,
                                const FieldMatrix& rho0, double t) {
    return detail::solve_coherence(params, drive, rho0, t, params.beta());
}

/// ge block, generator S(f_nu) + L_damp + i chi L (beta -> beta*).
inline FieldMatrix solve_rho_ge(const ModelParams& params, const DriveSpec& drive,
                                const FieldMatrix& rho0, double t) {
    return detail::solve_coherence(params, drive, rho0, t, std::conj(params.beta()));
}

/// Propagate all four blocks from t = 0 to t and re-validate the invariants.
inline AtomFieldState evolve_state(const ModelParams& params, const DriveSpec& drive,
                                   const AtomFieldState& state0, double t) {
    AtomFieldState out;
    out.rho_ee = solve_rho_ee(params, drive, state0.rho_ee, t);
    out.rho_gg = solve_rho_gg(params, drive, state0.rho_gg, t);
    out.rho_eg = solve_rho_eg(params, drive, state0.rho_eg, t);
    out.rho_ge = solve_rho_ge(params, drive, state0.rho_ge, t);
    validate_state(out, "evolve_state(t=" + std::to_string(t) + ")");
    return out;
}

/// Undo the frame transformation rho = U rho~ U†,
/// U = exp[-it(omega/2 sigma_z + chi sigma_ee + nu a†a)]. Diagonal blocks get
/// entrywise e^{-i nu t (m-n)}; the eg block additionally the atomic phase
/// (see kSigmaEeIsGroundProjector). The inverse map is to_lab_frame with -t.
inline AtomFieldState to_lab_frame(const ModelParams& params, const AtomFieldState& st, double t) {
    const int d = static_cast<int>(st.rho_ee.rows());
    const double omega_eff =
        kSigmaEeIsGroundProjector ? params.omega - params.chi : params.omega + params.chi;
    const Complex atom_phase = std::exp(-kImag * omega_eff * t);

    AtomFieldState out;
    out.rho_ee.resize(d, d);
    out.rho_eg.resize(d, d);
    out.rho_ge.resize(d, d);
    out.rho_gg.resize(d, d);
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            const Complex field_phase = std::exp(-kImag * params.nu * t * double(m - n));
            out.rho_ee(m, n) = field_phase * st.rho_ee(m, n);
            out.rho_gg(m, n) = field_phase * st.rho_gg(m, n);
            out.rho_eg(m, n) = field_phase * atom_phase * st.rho_eg(m, n);
            out.rho_ge(m, n) = field_phase * std::conj(atom_phase) * st.rho_ge(m, n);
        }
    }
    return out;
}

}  // namespace dqed
