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

#pragma once

#include "squintlab/array_model.hpp"

#include <functional>
#include <span>

// Hot loops shared by the experiments. Each kernel has a straightforward
// serial reference (direct evaluation, used as the test oracle) and an
// OpenMP version that must agree with it to rounding.
namespace squintlab::kernels
{
    /// |a_f(u_g)^H w|^2 for every direction sine u_g.
    RVec gain_scan(const ArrayConfig &cfg, double f_hz, const CVec &w, std::span<const double> sines);

    /// MUSIC null spectrum q(u) = ||b||^2 - ||U_s^H b||^2 with b = C a_f(u), or b = a_f(u)
    /// when `coupling` is null. `signal_subspace` has orthonormal columns.
    RVec null_spectrum(const ArrayConfig &cfg, double f_hz, const CMat &signal_subspace,
                       std::span<const double> sines, const CMat *coupling = nullptr);

    /// Row-major (angle, range) map of |b_f(theta, r)^H w|^2 for near-field responses.
    RMat near_field_gain_map(const ArrayConfig &cfg, double f_hz, const CVec &w,
                             std::span<const double> angles_rad, std::span<const double> ranges_m);

    /// Runs body(i) for i in [0, n). Bodies must only write to slot i of
    /// pre-sized output; ordering of side effects is unspecified.
    void parallel_for(int n, const std::function<void(int)> &body);

    /// Worker threads used by the OpenMP kernels (1 when built without OpenMP).
    int max_threads();
    void set_threads(int n);

    namespace reference
    {
        RVec gain_scan(const ArrayConfig &cfg, double f_hz, const CVec &w, std::span<const double> sines);
        RVec null_spectrum(const ArrayConfig &cfg, double f_hz, const CMat &signal_subspace,
                           std::span<const double> sines, const CMat *coupling = nullptr);
        RMat near_field_gain_map(const ArrayConfig &cfg, double f_hz, const CVec &w,
                                 std::span<const double> angles_rad, std::span<const double> ranges_m);
        void serial_for(int n, const std::function<void(int)> &body);
    }
}
