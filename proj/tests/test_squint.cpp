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

#include "oracles.hpp"
#include "squintlab/squint.hpp"

#include <doctest.h>

#include <sstream>

using namespace squintlab;

TEST_CASE("squinted direction special cases")
{
    for (double f : {250e9, 300e9, 330e9})
        CHECK(squinted_direction(0.0, f, 300e9) == 0.0);
    CHECK(squinted_direction(0.7, 300e9, 300e9) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("closed form matches the 0.01 degree grid argmax at 315 GHz")
{
    const ArrayConfig cfg = ArrayConfig::half_wavelength(128, 300e9);
    const double th0 = deg2rad(60.0);
    const CVec w = oracle::steering(128, cfg.spacing_m, 300e9, th0) / std::sqrt(128.0);
    const double step = deg2rad(0.01);
    const double peak = oracle::peak_angle(w, cfg.spacing_m, 315e9, deg2rad(40.0), deg2rad(80.0), step);
    CHECK(std::abs(peak - squinted_direction(th0, 315e9, 300e9)) <= step);
}

TEST_CASE("squint profile")
{
    const ArrayConfig cfg = ArrayConfig::half_wavelength(128, 300e9);

    SUBCASE("zero bandwidth")
    {
        const SquintReport r = squint_deviation_profile(cfg, SubcarrierGrid{8, 300e9, 0.0}, deg2rad(60.0));
        for (std::size_t m = 0; m < r.size(); ++m)
        {
            CHECK(r.deviation_rad[m] == 0.0);
            CHECK(r.gain_loss_db[m] == 0.0);
        }
    }
    SUBCASE("band edges at 300 GHz")
    {
        const auto e = band_edge_deviation(deg2rad(60.0), 300e9, 30e9);
        CHECK(rad2deg(e.low_edge_rad) == doctest::Approx(5.7).epsilon(0.01));
        CHECK(rad2deg(e.high_edge_rad) == doctest::Approx(-4.4).epsilon(0.01));
    }
    SUBCASE("band edges at 60 GHz")
    {
        const auto e = band_edge_deviation(deg2rad(45.0), 60e9, 1e9);
        CHECK(rad2deg(e.low_edge_rad) > 0.4);
        CHECK(rad2deg(e.low_edge_rad) < 0.5);
        CHECK(-rad2deg(e.high_edge_rad) > 0.4);
        CHECK(-rad2deg(e.high_edge_rad) < 0.5);
    }
    SUBCASE("profile approaches the band-edge values and loses gain")
    {
        const SquintReport r = squint_deviation_profile(cfg, SubcarrierGrid{32, 300e9, 30e9}, deg2rad(60.0));
        CHECK(r.deviation_rad.front() > 0.0);
        CHECK(r.deviation_rad.back() < 0.0);
        CHECK(r.gain_loss_db.front() < -10.0);
        std::ostringstream out;
        write_squint_csv(r, out);
        CHECK(out.str().rfind("subcarrier_hz", 0) == 0);
    }
}

TEST_CASE("near-field squint")
{
    const ArrayConfig cfg = ArrayConfig::half_wavelength(64, 300e9);
    NearFieldSearch search = NearFieldSearch::around(1.0);

    SUBCASE("zero bandwidth gives zero deviation up to the grid")
    {
        const SquintReport r = near_field_squint_deviation(cfg, SubcarrierGrid{4, 300e9, 0.0}, deg2rad(30.0), 1.0,
                                                           search);
        for (std::size_t m = 0; m < r.size(); ++m)
        {
            CHECK(std::abs(r.deviation_rad[m]) <= search.angle_step_rad * 1.0001);
            CHECK(std::abs((*r.range_deviation_m)[m]) <= search.range_step_m * 1.0001);
        }
    }
    SUBCASE("wideband deviations are nonzero in angle")
    {
        const SquintReport r = near_field_squint_deviation(cfg, SubcarrierGrid{4, 300e9, 30e9}, deg2rad(30.0), 1.0,
                                                           search);
        CHECK(std::abs(r.deviation_rad.front()) > deg2rad(1.0));
        CHECK(std::abs(r.deviation_rad.back()) > deg2rad(1.0));
    }
}

TEST_CASE("beampattern")
{
    SUBCASE("matched beam peaks at N")
    {
        const ArrayConfig cfg = ArrayConfig::half_wavelength(64, 300e9);
        const CVec w = far_field_steering(cfg, 300e9, 0.5) / 8.0;
        const std::vector<double> a{0.5, 0.2};
        const RVec g = beampattern(w, cfg, 300e9, a);
        CHECK(g(0) == doctest::Approx(64.0));
        CHECK(g(1) < 64.0);
    }
    SUBCASE("single element is flat")
    {
        const ArrayConfig cfg = ArrayConfig::half_wavelength(1, 300e9);
        CVec w(1);
        w << cd(0.6, 0.8);
        const RVec g = beampattern(w, cfg, 320e9, uniform_grid(-1.5, 1.5, 0.1));
        CHECK((g.array() - 1.0).abs().maxCoeff() < 1e-12);
    }
    SUBCASE("zero weights rejected")
    {
        const ArrayConfig cfg = ArrayConfig::half_wavelength(4, 300e9);
        const std::vector<double> a{0.0};
        CHECK_THROWS_AS(beampattern(CVec::Zero(4), cfg, 300e9, a), Error);
    }
}
