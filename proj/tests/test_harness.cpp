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

#include "squintlab/config.hpp"
#include "squintlab/experiments.hpp"
#include "squintlab/results.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace squintlab;

TEST_CASE("minimal config fills defaults")
{
    const ExperimentSpec s = parse_config("experiment = squint-profile\n");
    CHECK(s == default_spec(ExperimentKind::squint_profile));
    const ExperimentResult r = run_experiment(s);
    const std::string json = to_json(r);
    CHECK(json.find("\"n_antennas\": 128") != std::string::npos);
    CHECK(json.find("\"seed\"") != std::string::npos);
}

TEST_CASE("config errors name the field")
{
    try
    {
        parse_config("experiment = beamforming-se\nn_antennas = 4\nn_rf = 8\n");
        FAIL("expected rejection");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::invalid_config);
        CHECK(std::string(e.what()).find("n_rf") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("experiment = doa-rmse\nbogus = 1\n"), Error);
    CHECK_THROWS_AS(parse_config("experiment = doa-rmse\nsnr_db = 1\nsnr_db = 2\n"), Error);
    CHECK_THROWS_AS(parse_config("n_antennas = 8\n"), Error);
    CHECK_THROWS_AS(parse_config("experiment = doa-rmse\n", ExperimentKind::chanest_nmse), Error);
    CHECK_THROWS_AS(parse_config("experiment = doa-rmse\nsweep = eta: 0.5\n"), Error);
    CHECK_THROWS_AS(parse_config("experiment = doa-rmse\nmodes = nope\n"), Error);
}

TEST_CASE("sections and comments are ignored")
{
    const ExperimentSpec s = parse_config("# comment\n[array]\nexperiment = doa-rmse ; trailing\nn_antennas = 64\n");
    CHECK(s.experiment == ExperimentKind::doa_rmse);
    CHECK(s.n_antennas == 64);
}

TEST_CASE("wideband configuration round-trips")
{
    ExperimentSpec s = default_spec(ExperimentKind::beamforming_se);
    s.n_antennas = 128;
    s.n_rf = 8;
    s.n_subcarriers = 32;
    s.carrier_hz = 300e9;
    s.bandwidth_hz = 30e9;
    CHECK(parse_config(serialize_config(s)) == s);
}

TEST_CASE("zero-bandwidth squint run gives zero deviation")
{
    ExperimentSpec s = default_spec(ExperimentKind::squint_profile);
    s.bandwidth_hz = 0.0;
    s.sweep.reset();
    const ExperimentResult r = run_experiment(s);
    for (const auto &row : r.rows)
        if (row.metric.rfind("deviation", 0) == 0)
            CHECK(row.mean == 0.0);
}

TEST_CASE("runs are reproducible")
{
    ExperimentSpec s = default_spec(ExperimentKind::beamforming_se);
    s.n_antennas = 32;
    s.n_rf = 4;
    s.n_subcarriers = 8;
    s.trials = 1;
    s.sweep.reset();
    std::ostringstream a, b;
    write_csv(run_experiment(s), a);
    write_csv(run_experiment(s), b);
    CHECK(a.str() == b.str());
}

TEST_CASE("CSV and JSON emission")
{
    ExperimentResult empty;
    empty.spec = default_spec(ExperimentKind::doa_rmse);
    std::ostringstream out;
    write_csv(empty, out);
    CHECK(out.str() == "sweep,metric,mode,mean,std,trials\n");

    ExperimentResult one = empty;
    one.rows.push_back(ResultRow{10.0, "rmse_deg", "uncorrected", 0.1 + 0.2, 1.0 / 3.0, 50});
    std::ostringstream out1;
    write_csv(one, out1);
    CHECK(out1.str() == "sweep,metric,mode,mean,std,trials\n10,rmse_deg,uncorrected,0.30000000000000004,"
                        "0.3333333333333333,50\n");

    one.rows.push_back(ResultRow{-std::numeric_limits<double>::infinity(), "nmse_db", "omp-bsc", -150.0, 0.0, 2});
    CHECK(rows_from_json(to_json(one)) == one.rows);

    const auto dir = std::filesystem::temp_directory_path() / "squintlab_emit_test";
    std::filesystem::create_directories(dir);
    const std::string csv = (dir / "r.csv").string();
    emit_csv(one, csv);
    emit_json(one, (dir / "r.json").string());
    std::ifstream in(csv);
    std::stringstream buf;
    buf << in.rdbuf();
    std::ostringstream direct;
    write_csv(one, direct);
    CHECK(buf.str() == direct.str());
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(emit_csv(one, "/nonexistent-dir/x/y.csv"), Error);
}

TEST_CASE("sweep helpers")
{
    ExperimentSpec s = default_spec(ExperimentKind::squint_profile);
    CHECK(sweep_value(s, "theta0") == 60.0);
    CHECK(with_sweep_value(s, "bandwidth_hz", 1e9).bandwidth_hz == 1e9);
    CHECK_THROWS_AS(sweep_value(s, "nope"), Error);
}
