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

#include "dqed/common.hpp"
#include "dqed/drive.hpp"
#include "dqed/model.hpp"
#include "dqed/superops.hpp"

namespace dqed {

enum class BlockKind { ee, gg, eg, ge };

inline const char* block_name(BlockKind k) {
    switch (k) {
        case BlockKind::ee: return "ee";
        case BlockKind::gg: return "gg";
        case BlockKind::eg: return "eg";
        case BlockKind::ge: return "ge";
    }
    return "?";
}

struct IntegratorConfig {
    double dt = 0.0;  // 0 selects the automatic step below
};

/// Default step: min(1e-3, 1/(50 max(gamma n_max, |chi| n_max, drive scale))),
/// with the drive scale taken as max_s |f(s)| sqrt(n_max) over [0, t_end].
inline double default_rk4_dt(const ModelParams& params, const DriveSpec& drive, int n_max,
                             double t_end) {
    double fmax = 0.0;
    const int samples = 64;
    for (int i = 0; i <= samples; ++i)
        fmax = std::max(fmax, std::abs(eval_f(drive, t_end * i / samples)));
    const double scale = std::max({params.gamma * n_max, std::abs(params.chi) * n_max,
                                   fmax * std::sqrt(static_cast<double>(n_max))});
    if (scale <= 0.0) return 1e-3;
    return std::min(1e-3, 1.0 / (50.0 * scale));
}

/// Instantaneous right-hand side of the selected block equation at time t:
///   ee: (R + S(f_nu) + L_damp) rho      gg: (-R + S(f_nu) + L_damp) rho
///   eg: (S(f_nu) + L_damp - i chi L) rho ge: (S(f_nu) + L_damp + i chi L) rho
/// with f_nu(t) = f(t) e^{i nu t}.
inline FieldMatrix apply_generator(BlockKind kind, const ModelParams& params,
                                   const DriveSpec& drive, double t, const FieldMatrix& rho) {
    const Complex f_nu = eval_f(drive, t) * std::exp(kImag * params.nu * t);
    const SuperopParams sp = params.superop();
    FieldMatrix out = apply_S(f_nu, rho) + apply_lindblad(sp, rho);
    switch (kind) {
        case BlockKind::ee: out += apply_R(sp, rho); break;
        case BlockKind::gg: out -= apply_R(sp, rho); break;
        case BlockKind::eg: out -= kImag * params.chi * apply_L(rho); break;
        case BlockKind::ge: out += kImag * params.chi * apply_L(rho); break;
    }
    return out;
}

namespace detail {

inline void rk4_steps(BlockKind kind, const ModelParams& params, const DriveSpec& drive,
                      FieldMatrix& rho, double t0, double t1, double dt_hint) {
    const double span = t1 - t0;
    if (span <= 0.0) return;
    const long n = std::max(1L, static_cast<long>(std::ceil(span / dt_hint)));
    const double h = span / n;
    for (long i = 0; i < n; ++i) {
        const double t = t0 + h * i;
        const FieldMatrix k1 = apply_generator(kind, params, drive, t, rho);
        const FieldMatrix k2 =
            apply_generator(kind, params, drive, t + 0.5 * h, rho + 0.5 * h * k1);
        const FieldMatrix k3 =
            apply_generator(kind, params, drive, t + 0.5 * h, rho + 0.5 * h * k2);
        const FieldMatrix k4 = apply_generator(kind, params, drive, t + h, rho + h * k3);
        rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((i & 0xf) == 0 && !rho.allFinite())
            throw Error("rk4_integrate: non-finite values near t = " + std::to_string(t + h) +
                        " (block " + block_name(kind) + ")");
    }
    if (!rho.allFinite())
        throw Error("rk4_integrate: non-finite values at t = " + std::to_string(t1) + " (block " +
                    std::string(block_name(kind)) + ")");
}

}  // namespace detail

/// Fixed-step classical RK4 from 0 to t_end; the drive is sampled at the
/// substage times t, t+h/2, t+h.
inline FieldMatrix rk4_integrate(BlockKind kind, const ModelParams& params, const DriveSpec& drive,
                                 const FieldMatrix& rho0, double t_end,
                                 const IntegratorConfig& cfg = {}) {
    if (t_end < 0.0) throw DomainError("rk4_integrate: t_end must be >= 0");
    FieldMatrix rho = rho0;
    const double dt =
        cfg.dt > 0.0 ? cfg.dt
                     : default_rk4_dt(params, drive, static_cast<int>(rho0.rows()) - 1, t_end);
    detail::rk4_steps(kind, params, drive, rho, 0.0, t_end, dt);
    return rho;
}

/// Same integration, capturing the state at each requested time (ascending).
inline std::vector<FieldMatrix> rk4_integrate_path(BlockKind kind, const ModelParams& params,
                                                   const DriveSpec& drive, const FieldMatrix& rho0,
                                                   const std::vector<double>& times,
                                                   const IntegratorConfig& cfg = {}) {
    std::vector<FieldMatrix> out;
    out.reserve(times.size());
    if (times.empty()) return out;
    const double t_end = times.back();
    const double dt =
        cfg.dt > 0.0 ? cfg.dt
                     : default_rk4_dt(params, drive, static_cast<int>(rho0.rows()) - 1, t_end);
    FieldMatrix rho = rho0;
    double t = 0.0;
    for (double target : times) {
        if (target < t) throw DomainError("rk4_integrate_path: times must be ascending");
        detail::rk4_steps(kind, params, drive, rho, t, target, dt);
        t = target;
        out.push_back(rho);
    }
    return out;
}

inline int vec_index(int m, int n, int dim) { return n * dim + m; }

/// Dense matrix of the block generator acting on column-stacked rho, with the
/// drive term frozen at time t. Dimension (n_max+1)^2; dense cost guard at
/// n_max = 48.
inline Eigen::MatrixXcd liouvillian_matrix(BlockKind kind, const ModelParams& params,
                                           const DriveSpec& drive, double t, const Truncation& trunc) {
    if (trunc.n_max > 48)
        throw DimensionError("liouvillian_matrix: n_max = " + std::to_string(trunc.n_max) +
                             " exceeds the dense-cost guard (48)");
    const int d = trunc.dim();
    const Complex f_nu = eval_f(drive, t) * std::exp(kImag * params.nu * t);
    const Complex fc = std::conj(f_nu);
    const double chi = params.chi;
    const double gamma = params.gamma;

    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            const int row = vec_index(m, n, d);
            // gamma (J - L)
            if (m + 1 < d && n + 1 < d)
                M(row, vec_index(m + 1, n + 1, d)) +=
                    gamma * 2.0 * std::sqrt(static_cast<double>((m + 1) * (n + 1)));
            M(row, row) -= gamma * static_cast<double>(m + n);
            // block-specific diagonal parts
            switch (kind) {
                case BlockKind::ee: M(row, row) += -kImag * chi * double(m - n); break;
                case BlockKind::gg: M(row, row) += kImag * chi * double(m - n); break;
                case BlockKind::eg: M(row, row) += -kImag * chi * double(m + n); break;
                case BlockKind::ge: M(row, row) += kImag * chi * double(m + n); break;
            }
            // S(f_nu) = -i (f a† rho + f* a rho - f rho a† - f* rho a)
            if (m >= 1)
                M(row, vec_index(m - 1, n, d)) += -kImag * f_nu * std::sqrt(double(m));
            if (m + 1 < d)
                M(row, vec_index(m + 1, n, d)) += -kImag * fc * std::sqrt(double(m + 1));
            if (n + 1 < d)
                M(row, vec_index(m, n + 1, d)) += kImag * f_nu * std::sqrt(double(n + 1));
            if (n >= 1)
                M(row, vec_index(m, n - 1, d)) += kImag * fc * std::sqrt(double(n));
        }
    }
    return M;
}

inline Eigen::VectorXcd vectorize(const FieldMatrix& rho) {
    const int d = static_cast<int>(rho.rows());
    Eigen::VectorXcd v(d * d);
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m) v(vec_index(m, n, d)) = rho(m, n);
    return v;
}

inline FieldMatrix unvectorize(const Eigen::VectorXcd& v, int dim) {
    FieldMatrix rho(dim, dim);
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m) rho(m, n) = v(vec_index(m, n, dim));
    return rho;
}

}  // namespace dqed
