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
#include "squintlab/isac.hpp"

#include <doctest.h>

using namespace squintlab;

TEST_CASE("ISAC trade-off")
{
    CMat c = CMat::Zero(4, 1), r = CMat::Zero(4, 1);
    c(0, 0) = 1.0;
    r(1, 0) = 1.0;
    const std::vector<CMat> cs{c}, rs{r};
    CHECK(isac_beamformer(1.0, cs, rs)[0] == c);
    CHECK(isac_beamformer(0.0, cs, rs)[0] == r);
    const CMat h = isac_beamformer(0.5, cs, rs)[0];
    CHECK(std::norm(c.col(0).dot(h.col(0))) == doctest::Approx(std::norm(r.col(0).dot(h.col(0)))));
    CHECK(h.squaredNorm() == doctest::Approx(1.0));
}

TEST_CASE("radar beampattern gain")
{
    const ArrayConfig cfg = ArrayConfig::half_wavelength(64, 300e9);
    const std::vector<double> tgt{deg2rad(40.0)};

    SUBCASE("matched beam at zero bandwidth is 0 dB")
    {
        const SubcarrierGrid grid{4, 300e9, 0.0};
        CHECK(std::abs(radar_beampattern_gain_db(radar_target(cfg, grid, tgt), cfg, grid, tgt)) < 1e-9);
    }
    SUBCASE("random weights are below 0 dB")
    {
        const SubcarrierGrid grid{4, 300e9, 0.0};
        Rng rng(1);
        std::vector<CMat> w;
        for (int m = 0; m < 4; ++m)
            w.push_back(complex_normal_matrix(rng, 64, 1).normalized());
        CHECK(radar_beampattern_gain_db(w, cfg, grid, tgt) < 0.0);
    }
    SUBCASE("8-of-128 subarray loses gain at the band edge")
    {
        const ArrayConfig big = ArrayConfig::half_wavelength(128, 300e9);
        const SubcarrierGrid grid{3, 300e9, 30e9};
        CVec w = CVec::Zero(128);
        const CVec a = far_field_steering(big, 300e9, tgt[0]);
        for (int n = 0; n < 8; ++n)
            w(n) = a(n) / std::sqrt(8.0);
        const std::vector<CMat> ws(3, CMat(w));
        const double gdb = radar_beampattern_gain_db(ws, big, grid, tgt);
        double worst = 1e9;
        for (int m = 0; m < 3; ++m)
            worst = std::min(worst, oracle::gain(w, big.spacing_m, grid.frequency(m), tgt[0]));
        CHECK(gdb == doctest::Approx(10.0 * std::log10(worst / 128.0)).epsilon(1e-9));
        CHECK(worst < oracle::gain(w, big.spacing_m, 300e9, tgt[0]));
    }
}

TEST_CASE("codebooks")
{
    const auto book = default_codebook(128, 8);
    CHECK(book.size() > 0);
    CHECK(book.subarray_size() == 8);
    for (std::size_t i = 0; i < book.size(); ++i)
        CHECK(std::is_sorted(book[i].begin(), book[i].end()));
    CHECK(exhaustive_codebook(16, 3).size() == 560);
    Rng rng(2);
    const auto r = random_codebook(32, 4, 20, rng);
    CHECK(r.size() <= 20);
    CHECK_THROWS_AS(default_codebook(4, 8), Error);
}

TEST_CASE("selection at zero bandwidth ignores the compensation mode")
{
    Rng rng(3);
    SelectionContext ctx;
    ctx.array = ArrayConfig::half_wavelength(32, 300e9);
    ctx.grid = SubcarrierGrid{4, 300e9, 0.0};
    ctx.n_rf = 2;
    ctx.eta = 0.3;
    ctx.target_angles_rad = {0.5};
    PathDrawSpec spec;
    const WidebandChannel ch = generate_channel(ctx.array, ctx.grid, std::vector<PathSet>{draw_paths(spec, rng)});
    const auto book = default_codebook(32, 4);
    const auto a = select_subarray(book, ctx, ch, SelectionMode::bsc, rng);
    const auto b = select_subarray(book, ctx, ch, SelectionMode::no_bsc, rng);
    CHECK(a.entry == b.entry);
    CHECK(a.score.objective == b.score.objective);
    const auto c = select_subarray(book, ctx, ch, SelectionMode::random, rng);
    CHECK(c.entry < book.size());
}

TEST_CASE("index modulation bit counts")
{
    CHECK(index_bits(8, 3) == 5);
    CHECK(index_bits(8, 8) == 0);
    CHECK(binomial(8, 3) == 56);
    CHECK(combinations(5, 2).size() == 10);
    ImConfig bad;
    bad.n_active = 9;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("index modulation with every path active reduces to conventional")
{
    Rng rng(4);
    ImContext ctx;
    ctx.array = ArrayConfig::half_wavelength(32, 300e9);
    ctx.grid = SubcarrierGrid{4, 300e9, 10e9};
    ctx.n_rf = 4;
    ctx.target_angles_rad = {0.4};
    ctx.dictionary_size = 64;
    PathDrawSpec spec;
    spec.n_paths = 4;
    const WidebandChannel ch = generate_channel(ctx.array, ctx.grid, std::vector<PathSet>{draw_paths(spec, rng)});
    ImConfig im;
    im.n_paths = 4;
    im.n_active = 4;
    const auto se = im_spectral_efficiency(ctx, ch, im, BeamformerKind::digital_sd);
    CHECK(se.index_bits == 0);
    CHECK(se.index_modulated == doctest::Approx(se.conventional));
}

TEST_CASE("selection mode names round-trip")
{
    for (auto m : {SelectionMode::bsc, SelectionMode::no_bsc, SelectionMode::random})
        CHECK(parse_selection_mode(to_string(m)) == m);
}
