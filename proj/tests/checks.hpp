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

// Check suites shared by the unit-test runner and the acceptance binary.

#include <functional>
#include <string>
#include <vector>

namespace checks
{
    struct Outcome
    {
        std::string name;
        bool passed = false;
        std::string detail;
    };

    using Suite = std::vector<Outcome>;

    /// Closed-form squint magnitudes and 100 random closed-form vs grid-search cases.
    Suite squint_magnitude_suite();

    /// Library operations against the brute-force references in oracles.hpp.
    Suite oracle_suite();

    /// Invariants: unit modulus, zero-bandwidth collapses, OMP monotonicity,
    /// worker-count determinism, config round-trip and friends.
    Suite property_suite();

    bool all_passed(const Suite &suite);
    std::string failures(const Suite &suite);
}
