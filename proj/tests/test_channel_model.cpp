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
#include "squintlab/channel_model.hpp"

#include <doctest.h>

using namespace squintlab;

namespace
{
    const ArrayConfig kArray = ArrayConfig::half_wavelength(32, 300e9);
    const SubcarrierGrid kGrid{8, 300e9, 30e9};
}

TEST_CASE("single path collapses to the steering vector")
{
    PathSet ps;
    ps.paths.push_back(Path{1.0, 0.4, 0.0, std::nullopt});
    const WidebandChannel ch = generate_channel(kArray, kGrid, std::vector<PathSet>{ps});
    for (int m = 0; m < kGrid.n_subcarriers; ++m)
        CHECK((ch.per_subcarrier[static_cast<std::size_t>(m)].col(0) -
               far_field_steering(kArray, kGrid.frequency(m), 0.4))
                  .norm() < 1e-12);
}

TEST_CASE("opposite gains cancel")
{
    PathSet ps;
    ps.paths.push_back(Path{cd(0.5, 0.2), -0.3, 4e-9, std::nullopt});
    ps.paths.push_back(Path{cd(-0.5, -0.2), -0.3, 4e-9, std::nullopt});
    const WidebandChannel ch = generate_channel(kArray, kGrid, std::vector<PathSet>{ps});
    for (const auto &h : ch.per_subcarrier)
        CHECK(h.norm() < 1e-14);
}

TEST_CASE("frequency selectivity follows the path delay")
{
    PathSet ps;
    const double tau = 7.3e-9;
    ps.paths.push_back(Path{1.0, 0.5, tau, std::nullopt});
    const WidebandChannel ch = generate_channel(kArray, kGrid, std::vector<PathSet>{ps});
    for (int m = 0; m < kGrid.n_subcarriers; ++m)
    {
        const double f = kGrid.frequency(m);
        const CVec expect = far_field_steering(kArray, f, 0.5) * std::polar(1.0, -2.0 * kPi * f * tau);
        CHECK((ch.per_subcarrier[static_cast<std::size_t>(m)].col(0) - expect).norm() < 1e-9);
    }
}

TEST_CASE("subcarrier grid")
{
    const SubcarrierGrid one{1, 300e9, 30e9};
    CHECK(one.frequency(0) == 300e9);
    const SubcarrierGrid g{32, 300e9, 30e9};
    CHECK(g.frequency(0) == doctest::Approx(300e9 - 30e9 * 15.5 / 32.0));
    CHECK(g.frequency(31) == doctest::Approx(300e9 + 30e9 * 15.5 / 32.0));
    SubcarrierGrid bad{0, 300e9, 1e9};
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = SubcarrierGrid{4, 300e9, 1000e9};
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("awgn")
{
    Rng rng(1);
    const CMat s = complex_normal_matrix(rng, 1000, 100);

    SUBCASE("infinite SNR leaves the signal unchanged")
    {
        CHECK(add_awgn(s, kNoiselessSnrDb, rng) == s);
    }
    SUBCASE("0 dB noise power matches signal power")
    {
        const CMat y = add_awgn(s, 0.0, rng);
        const double noise = (y - s).squaredNorm() / static_cast<double>(s.size());
        const double sig = s.squaredNorm() / static_cast<double>(s.size());
        CHECK(std::abs(noise / sig - 1.0) < 0.05);
    }
    SUBCASE("deterministic for a fixed seed")
    {
        Rng a(42), b(42);
        CHECK(add_awgn(s, 3.0, a) == add_awgn(s, 3.0, b));
    }
}

TEST_CASE("received pilots")
{
    Rng rng(2);
    PathDrawSpec spec;
    const WidebandChannel ch = generate_channel(kArray, kGrid, std::vector<PathSet>{draw_paths(spec, rng)});

    SUBCASE("identity combiner, one frame, no noise")
    {
        const std::vector<CMat> w(8, CMat::Identity(32, 32));
        const PilotObservation obs = received_pilots(ch, w, 32, kNoiselessSnrDb, rng);
        for (int m = 0; m < 8; ++m)
            CHECK((obs.observations[static_cast<std::size_t>(m)] - ch.per_subcarrier[static_cast<std::size_t>(m)].col(0))
                      .norm() < 1e-14);
    }
    SUBCASE("random combiner matches explicit loops")
    {
        const CMat w = random_analog_combiner(32, 4, 3, rng);
        const PilotObservation obs = received_pilots(ch, std::vector<CMat>(8, w), 4, kNoiselessSnrDb, rng);
        for (int m = 0; m < 8; ++m)
        {
            const CVec &h = ch.per_subcarrier[static_cast<std::size_t>(m)].col(0);
            const CVec &y = obs.observations[static_cast<std::size_t>(m)];
            REQUIRE(y.size() == 12);
            for (Eigen::Index k = 0; k < 12; ++k)
            {
                cd acc = 0.0;
                for (int n = 0; n < 32; ++n)
                    acc += std::conj(w(n, k)) * h(n);
                CHECK(std::abs(y(k) - acc) < 1e-12);
            }
        }
    }
    SUBCASE("zero channel gives noise only")
    {
        WidebandChannel zero = ch;
        for (auto &h : zero.per_subcarrier)
            h.setZero();
        const CMat w = random_analog_combiner(32, 4, 2, rng);
        const PilotObservation obs = received_pilots(zero, std::vector<CMat>(8, w), 4, 0.0, rng);
        double power = 0.0;
        for (const auto &y : obs.observations)
            power += y.squaredNorm();
        CHECK(power > 0.0);
    }
}

TEST_CASE("channels are reproducible")
{
    Rng a(77), b(77);
    PathDrawSpec spec;
    spec.n_paths = 6;
    const WidebandChannel x = generate_channel(kArray, kGrid, std::vector<PathSet>{draw_paths(spec, a)});
    const WidebandChannel y = generate_channel(kArray, kGrid, std::vector<PathSet>{draw_paths(spec, b)});
    for (std::size_t m = 0; m < x.per_subcarrier.size(); ++m)
        CHECK(x.per_subcarrier[m] == y.per_subcarrier[m]);
}

TEST_CASE("path validation")
{
    PathSet ps;
    ps.paths.push_back(Path{1.0, 2.0, 0.0, std::nullopt});
    CHECK_THROWS_AS(ps.validate(), Error);
    ps.paths[0] = Path{1.0, 0.1, -1e-9, std::nullopt};
    CHECK_THROWS_AS(ps.validate(), Error);
}
