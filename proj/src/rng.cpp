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

#include "squintlab/rng.hpp"

#include <cmath>

namespace squintlab
{
    std::string_view to_string(ErrorCode code)
    {
        switch (code)
        {
        case ErrorCode::invalid_argument:
            return "invalid_argument";
        case ErrorCode::dimension_mismatch:
            return "dimension_mismatch";
        case ErrorCode::rank_deficient:
            return "rank_deficient";
        case ErrorCode::constraint_violation:
            return "constraint_violation";
        case ErrorCode::degenerate_input:
            return "degenerate_input";
        case ErrorCode::invalid_config:
            return "invalid_config";
        case ErrorCode::io_failure:
            return "io_failure";
        }
        return "unknown";
    }

    std::uint64_t mix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    std::uint64_t child_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t sweep_index)
    {
        std::uint64_t h = mix64(seed);
        h = mix64(h ^ trial);
        h = mix64(h ^ sweep_index);
        return h;
    }

    // Box-Muller on the raw engine output so that draws do not depend on the
    // standard library's distribution implementation.
    static double unit_open(Rng &rng)
    {
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    }

    cd complex_normal(Rng &rng, double variance)
    {
        const double u1 = unit_open(rng);
        const double u2 = unit_open(rng);
        const double radius = std::sqrt(-std::log(u1) * variance);
        const double angle = 2.0 * kPi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    CMat complex_normal_matrix(Rng &rng, Eigen::Index rows, Eigen::Index cols, double variance)
    {
        CMat out(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                out(i, j) = complex_normal(rng, variance);
        return out;
    }

    double standard_normal(Rng &rng)
    {
        return complex_normal(rng, 2.0).real();
    }

    double uniform(Rng &rng, double lo, double hi)
    {
        return lo + (hi - lo) * unit_open(rng);
    }
}
