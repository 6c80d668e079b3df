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
#include <vector>

#include "dqed/blocks.hpp"
#include "dqed/common.hpp"
#include "dqed/fock.hpp"

namespace dqed {

/// Rectangular grid in the complex plane; values stored row-major by
/// (im, re): values[i_im * n_re + i_re].
struct PhaseSpaceGrid {
    double re_min = -3.0, re_max = 3.0;
    double im_min = -3.0, im_max = 3.0;
    int n_re = 41, n_im = 41;
    std::vector<double> values;

    static PhaseSpaceGrid make(double re_min, double re_max, double im_min, double im_max,
                               int n_re, int n_im) {
        if (!(re_min < re_max) || !(im_min < im_max))
            throw DomainError("PhaseSpaceGrid: bounds must be ordered");
        if (n_re < 2 || n_im < 2) throw DomainError("PhaseSpaceGrid: counts must be >= 2");
        PhaseSpaceGrid g;
        g.re_min = re_min;
        g.re_max = re_max;
        g.im_min = im_min;
        g.im_max = im_max;
        g.n_re = n_re;
        g.n_im = n_im;
        return g;
    }

    Complex point(int i_im, int i_re) const {
        const double re = re_min + (re_max - re_min) * i_re / (n_re - 1);
        const double im = im_min + (im_max - im_min) * i_im / (n_im - 1);
        return Complex{re, im};
    }

    double at(int i_im, int i_re) const { return values[i_im * n_re + i_re]; }
};

inline double mean_photon(const FieldMatrix& rho) {
    double acc = 0.0;
    for (int n = 0; n < rho.rows(); ++n) acc += n * rho(n, n).real();
    return acc;
}

inline double purity(const FieldMatrix& rho) { return (rho * rho).trace().real(); }

/// Purity of the assembled two-level ⊗ field state.
inline double purity(const AtomFieldState& st) {
    return ((st.rho_ee * st.rho_ee).trace() + (st.rho_eg * st.rho_ge).trace() +
            (st.rho_ge * st.rho_eg).trace() + (st.rho_gg * st.rho_gg).trace())
        .real();
}

inline double atomic_inversion(const AtomFieldState& st) {
    return (st.rho_ee.trace() - st.rho_gg.trace()).real();
}

inline double coherence_magnitude(const AtomFieldState& st) {
    return std::abs(st.rho_eg.trace());
}

namespace detail {

/// Truncated coherent amplitudes without the truncation-loss warning; the
/// unnormalized projection is exactly what Q needs at far-out grid points.
inline FieldVector coherent_amplitudes(Complex alpha, int dim) {
    FieldVector v(dim);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    return v;
}

}  // namespace detail

/// Husimi Q(beta) = <beta|rho|beta>/pi on each grid point.
inline PhaseSpaceGrid husimi_q(const FieldMatrix& rho, PhaseSpaceGrid grid) {
    const int d = static_cast<int>(rho.rows());
    grid.values.assign(static_cast<size_t>(grid.n_re) * grid.n_im, 0.0);
    std::vector<double> row_imag(grid.n_im, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < grid.n_im; ++i) {
        double imag_max = 0.0;
        for (int j = 0; j < grid.n_re; ++j) {
            const FieldVector b = detail::coherent_amplitudes(grid.point(i, j), d);
            const Complex q = (b.adjoint() * rho * b)(0, 0) / M_PI;
            imag_max = std::max(imag_max, std::abs(q.imag()));
            grid.values[static_cast<size_t>(i) * grid.n_re + j] = q.real();
        }
        row_imag[i] = imag_max;
    }
    double imag_max = 0.0;
    for (double v : row_imag) imag_max = std::max(imag_max, v);
    if (imag_max > 1e-10)
        warn("husimi_q: imaginary residue " + std::to_string(imag_max) + " before discarding");
    return grid;
}

/// Wigner via displaced parity: W(alpha) = (2/pi) tr[rho D(alpha) P D†(alpha)]
/// with P = (-1)^{a†a}. One displacement exponential per grid point.
inline PhaseSpaceGrid wigner(const FieldMatrix& rho, PhaseSpaceGrid grid) {
    const int d = static_cast<int>(rho.rows());
    const Truncation trunc{d - 1};
    grid.values.assign(static_cast<size_t>(grid.n_re) * grid.n_im, 0.0);
    std::vector<double> row_imag(grid.n_im, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < grid.n_im; ++i) {
        double imag_max = 0.0;
        for (int j = 0; j < grid.n_re; ++j) {
            const FieldMatrix D = displacement(grid.point(i, j), trunc);
            const FieldMatrix M = D.adjoint() * rho * D;
            Complex tr{0.0, 0.0};
            double sign = 1.0;
            for (int n = 0; n < d; ++n, sign = -sign) tr += sign * M(n, n);
            const Complex w = 2.0 / M_PI * tr;
            imag_max = std::max(imag_max, std::abs(w.imag()));
            grid.values[static_cast<size_t>(i) * grid.n_re + j] = w.real();
        }
        row_imag[i] = imag_max;
    }
    double imag_max = 0.0;
    for (double v : row_imag) imag_max = std::max(imag_max, v);
    if (imag_max > 1e-10)
        warn("wigner: imaginary residue " + std::to_string(imag_max) + " before discarding");
    return grid;
}

}  // namespace dqed
