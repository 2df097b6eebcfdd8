// SPDX-License-Identifier: Apache-2.0
//
// squintlab: wideband beam-squint simulation for ISAC arrays
// Copyright (C) 2026 The squintlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "squintlab/kernels.hpp"

#include <cmath>
#include <exception>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace squintlab::kernels
{
    namespace
    {
        // Powers z^n by recurrence, re-anchored periodically with an exact
        // evaluation so rounding does not accumulate over long arrays.
        constexpr int kReanchor = 32;

        void fill_powers(double phase_step, int n, cd *out)
        {
            const cd z = std::polar(1.0, phase_step);
            for (int i = 0; i < n; ++i)
                out[i] = (i % kReanchor == 0) ? std::polar(1.0, phase_step * i) : out[i - 1] * z;
        }

        double wave_number_step(const ArrayConfig &cfg, double f_hz, double sine)
        {
            return -2.0 * kPi * f_hz / kSpeedOfLight * cfg.spacing_m * sine;
        }

        // Largest |i - j| with a nonzero entry.
        int half_bandwidth(const CMat &m)
        {
            int band = 0;
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                for (Eigen::Index i = 0; i < m.rows(); ++i)
                    if (m(i, j) != cd(0.0, 0.0))
                        band = std::max(band, static_cast<int>(std::abs(i - j)));
            return band;
        }
    }

    RVec gain_scan(const ArrayConfig &cfg, double f_hz, const CVec &w, std::span<const double> sines)
    {
        require(w.size() == cfg.n_antennas, ErrorCode::dimension_mismatch, "gain_scan: weight length != N");
        const int G = static_cast<int>(sines.size());
        const int N = cfg.n_antennas;
        RVec out(G);
#pragma omp parallel for schedule(static)
        for (int g = 0; g < G; ++g)
        {
            // a^H w = sum_n conj(z)^n w_n, evaluated by Horner's rule
            const cd zc = std::polar(1.0, -wave_number_step(cfg, f_hz, sines[static_cast<std::size_t>(g)]));
            cd acc = w(N - 1);
            for (int n = N - 2; n >= 0; --n)
                acc = acc * zc + w(n);
            out(g) = std::norm(acc);
        }
        return out;
    }

    RVec null_spectrum(const ArrayConfig &cfg, double f_hz, const CMat &signal_subspace,
                       std::span<const double> sines, const CMat *coupling)
    {
        const int N = cfg.n_antennas;
        require(signal_subspace.rows() == N, ErrorCode::dimension_mismatch, "null_spectrum: subspace rows != N");
        if (coupling)
            require(coupling->rows() == N && coupling->cols() == N, ErrorCode::dimension_mismatch,
                    "null_spectrum: coupling must be N x N");
        const int band = coupling ? half_bandwidth(*coupling) : 0;
        const int G = static_cast<int>(sines.size());
        const CMat Uh = signal_subspace.adjoint();
        RVec out(G);
#pragma omp parallel
        {
            CVec a(N), b(N);
#pragma omp for schedule(static)
            for (int g = 0; g < G; ++g)
            {
                fill_powers(wave_number_step(cfg, f_hz, sines[static_cast<std::size_t>(g)]), N, a.data());
                if (coupling)
                {
                    for (int i = 0; i < N; ++i)
                    {
                        cd s = 0.0;
                        for (int j = std::max(0, i - band); j <= std::min(N - 1, i + band); ++j)
                            s += (*coupling)(i, j) * a(j);
                        b(i) = s;
                    }
                }
                else
                {
                    b = a;
                }
                out(g) = b.squaredNorm() - (Uh * b).squaredNorm();
            }
        }
        return out;
    }

    RMat near_field_gain_map(const ArrayConfig &cfg, double f_hz, const CVec &w,
                             std::span<const double> angles_rad, std::span<const double> ranges_m)
    {
        const int N = cfg.n_antennas;
        require(w.size() == N, ErrorCode::dimension_mismatch, "near_field_gain_map: weight length != N");
        for (double r : ranges_m)
            require(std::isfinite(r) && r > cfg.aperture_m(), ErrorCode::invalid_argument,
                    "near_field_gain_map: range must exceed the array aperture");
        for (double t : angles_rad)
            require(std::isfinite(t) && std::abs(t) < kPi / 2.0, ErrorCode::invalid_argument,
                    "near_field_gain_map: |theta| must be < pi/2");
        const int A = static_cast<int>(angles_rad.size());
        const int R = static_cast<int>(ranges_m.size());
        const double k = 2.0 * kPi * f_hz / kSpeedOfLight;
        RMat out(A, R);
#pragma omp parallel for collapse(2) schedule(static)
        for (int i = 0; i < A; ++i)
            for (int j = 0; j < R; ++j)
            {
                const double s = std::sin(angles_rad[static_cast<std::size_t>(i)]);
                const double r = ranges_m[static_cast<std::size_t>(j)];
                cd acc = 0.0;
                for (int n = 0; n < N; ++n)
                {
                    const double x = n * cfg.spacing_m;
                    const double rn = std::sqrt(r * r + x * x + 2.0 * r * x * s);
                    const double delta = (x * x + 2.0 * r * x * s) / (rn + r);
                    // conj(b_n) w_n with b_n = exp(-i k delta)
                    acc += std::polar(1.0, k * delta) * w(n);
                }
                out(i, j) = std::norm(acc);
            }
        return out;
    }

    void parallel_for(int n, const std::function<void(int)> &body)
    {
        // Exceptions cannot cross the OpenMP region; keep the lowest-index one
        // so error reports do not depend on scheduling.
        std::exception_ptr first;
        int first_index = std::numeric_limits<int>::max();
#pragma omp parallel for schedule(dynamic, 1)
        for (int i = 0; i < n; ++i)
        {
            try
            {
                body(i);
            }
            catch (...)
            {
#pragma omp critical(squintlab_parallel_for_error)
                if (i < first_index)
                {
                    first_index = i;
                    first = std::current_exception();
                }
            }
        }
        if (first)
            std::rethrow_exception(first);
    }

    int max_threads()
    {
#ifdef _OPENMP
        return omp_get_max_threads();
#else
        return 1;
#endif
    }

    void set_threads(int n)
    {
        require(n >= 1, ErrorCode::invalid_argument, "thread count must be >= 1");
#ifdef _OPENMP
        omp_set_num_threads(n);
#endif
    }
}
