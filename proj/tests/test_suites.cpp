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

#include "checks.hpp"

#include <doctest.h>

namespace
{
    void report(const checks::Suite &suite)
    {
        for (const auto &o : suite)
        {
            INFO(o.name << ": " << o.detail);
            CHECK(o.passed);
        }
    }
}

TEST_CASE("squint magnitudes" * doctest::test_suite("suites"))
{
    report(checks::squint_magnitude_suite());
}

TEST_CASE("brute-force references" * doctest::test_suite("suites"))
{
    report(checks::oracle_suite());
}

TEST_CASE("invariants" * doctest::test_suite("suites"))
{
    report(checks::property_suite());
}
