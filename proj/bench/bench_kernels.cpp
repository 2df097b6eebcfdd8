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

// Serial reference vs OpenMP kernels: wall time and max abs difference.

#include "squintlab/kernels.hpp"
#include "squintlab/linalg.hpp"
#include "squintlab/squint.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

using namespace squintlab;

namespace
{
    double seconds(const std::function<void()> &fn, int reps)
    {
        const auto t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r)
            fn();
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
    }

    void row(const char *name, double serial, double parallel, double diff)
    {
        std::printf("%-22s serial %9.3f ms   openmp %9.3f ms   speedup %5.2f   max|diff| %.2e\n", name, 1e3 * serial,
                    1e3 * parallel, serial / parallel, diff);
    }
}

int main(int argc, char **argv)
{
    const int reps = argc > 1 ? std::atoi(argv[1]) : 5;
    std::printf("threads: %d\n", kernels::max_threads());

    const ArrayConfig cfg = ArrayConfig::half_wavelength(128, 300e9);
    Rng rng(7);
    const CVec w = complex_normal_matrix(rng, 128, 1).col(0).normalized();
    std::vector<double> sines;
    for (double a : uniform_grid(deg2rad(-89.95), deg2rad(89.95), deg2rad(0.05)))
        sines.push_back(std::sin(a));

    {
        RVec a, b;
        const double ts = seconds([&] { a = kernels::reference::gain_scan(cfg, 310e9, w, sines); }, reps);
        const double tp = seconds([&] { b = kernels::gain_scan(cfg, 310e9, w, sines); }, reps);
        row("gain_scan", ts, tp, (a - b).cwiseAbs().maxCoeff());
    }
    {
        const CMat x = complex_normal_matrix(rng, 128, 64);
        const CMat us = linalg::dominant_subspace(x * x.adjoint(), 2);
        ImperfectionModel imp;
        imp.mc_band = 1;
        imp.mc_coeff = cd(0.2, 0.1);
        const CMat mc = mutual_coupling_matrix(cfg, imp);
        RVec a, b;
        const double ts = seconds([&] { a = kernels::reference::null_spectrum(cfg, 290e9, us, sines, &mc); }, reps);
        const double tp = seconds([&] { b = kernels::null_spectrum(cfg, 290e9, us, sines, &mc); }, reps);
        row("null_spectrum (MC)", ts, tp, (a - b).cwiseAbs().maxCoeff());
    }
    {
        const auto angles = uniform_grid(deg2rad(50.0), deg2rad(70.0), deg2rad(0.1));
        const auto ranges = uniform_grid(0.5, 8.0, 0.05);
        RMat a, b;
        const double ts =
            seconds([&] { a = kernels::reference::near_field_gain_map(cfg, 315e9, w, angles, ranges); }, reps);
        const double tp = seconds([&] { b = kernels::near_field_gain_map(cfg, 315e9, w, angles, ranges); }, reps);
        row("near_field_gain_map", ts, tp, (a - b).cwiseAbs().maxCoeff());
    }
    return 0;
}
