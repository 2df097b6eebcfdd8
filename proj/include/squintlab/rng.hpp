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

#include "squintlab/common.hpp"

#include <cstdint>
#include <random>

namespace squintlab
{
    using Rng = std::mt19937_64;

    // Stable 64-bit mixer (splitmix64 finalizer).
    std::uint64_t mix64(std::uint64_t x);

    // Child seed for one Monte-Carlo trial. Stable across platforms and worker counts.
    std::uint64_t child_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t sweep_index);

    // Stream index reserved for draws shared by every point of a sweep (paths, targets).
    inline constexpr std::uint64_t kSharedStream = 0xFFFFFFFFFFFFFFFFull;

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    cd complex_normal(Rng &rng, double variance = 1.0);

    CMat complex_normal_matrix(Rng &rng, Eigen::Index rows, Eigen::Index cols, double variance = 1.0);

    double uniform(Rng &rng, double lo, double hi);

    double standard_normal(Rng &rng);
}
