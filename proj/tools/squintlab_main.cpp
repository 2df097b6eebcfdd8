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

// Command-line front end: `squintlab <experiment> --config <path> [--seed N] [--out <path>] [--trials N]`.
// Failures print one JSON object on stderr: {"error": <code>, "message": <text>}.

#include "squintlab/experiments.hpp"
#include "squintlab/kernels.hpp"
#include "squintlab/results.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace
{
    int report_error(std::string_view code, const std::string &message, int exit_code)
    {
        std::cerr << nlohmann::json{{"error", code}, {"message", message}}.dump() << std::endl;
        return exit_code;
    }

    std::string profile_path(const std::filesystem::path &out, const std::string &mode, std::size_t index,
                             bool indexed)
    {
        std::filesystem::path p = out;
        std::string name = p.stem().string() + "_" + mode + "_profile";
        if (indexed)
            name += "_" + std::to_string(index);
        p.replace_filename(name + ".csv");
        return p.string();
    }
}

int main(int argc, char **argv)
{
    using namespace squintlab;

    CLI::App app{"Wideband beam-squint experiments for ISAC arrays"};
    std::string experiment;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::string out_path;
    int threads = 0;

    std::string experiments_help = "Experiment to run:";
    for (auto kind : {ExperimentKind::squint_profile, ExperimentKind::beamforming_se, ExperimentKind::chanest_nmse,
                      ExperimentKind::doa_rmse, ExperimentKind::antenna_selection, ExperimentKind::index_modulation})
        experiments_help += " " + std::string(to_string(kind));

    app.add_option("experiment", experiment, experiments_help)->required();
    app.add_option("--config", config_path, "Config file (key = value lines)")->required();
    app.add_option("--seed", seed, "Override the config seed");
    app.add_option("--trials", trials, "Override the number of trials");
    app.add_option("--out", out_path, "CSV output path; JSON goes next to it. Defaults to the config's output key, "
                                      "or stdout when both are empty");
    app.add_option("--threads", threads, "Worker threads (0 keeps the OpenMP default)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        return report_error("usage", e.what(), 2);
    }

    try
    {
        const ExperimentKind kind = parse_experiment_kind(experiment);
        ExperimentSpec spec = load_config(config_path, kind);
        if (seed)
            spec.seed = *seed;
        if (trials)
            spec.trials = *trials;
        if (!out_path.empty())
            spec.output = out_path;
        spec.validate();
        if (threads < 0)
            fail(ErrorCode::invalid_argument, "--threads must be >= 0");
        if (threads > 0)
            kernels::set_threads(threads);

        const ExperimentResult result = run_experiment(spec);

        if (spec.output.empty())
        {
            write_csv(result, std::cout);
            return 0;
        }
        const std::filesystem::path out(spec.output);
        if (out.has_parent_path())
            std::filesystem::create_directories(out.parent_path());
        emit_csv(result, out.string());
        std::filesystem::path json_path = out;
        json_path.replace_extension(".json");
        emit_json(result, json_path.string());

        std::size_t per_mode = 0;
        for (const auto &p : result.profiles)
            if (p.mode == result.profiles.front().mode)
                ++per_mode;
        std::map<std::string, std::size_t> seen;
        for (const auto &p : result.profiles)
        {
            const std::string path = profile_path(out, p.mode, seen[p.mode]++, per_mode > 1);
            std::ofstream f(path);
            if (!f)
                fail(ErrorCode::io_failure, "cannot open '" + path + "' for writing");
            write_squint_csv(p.report, f);
        }
        std::cerr << "wrote " << out.string() << " and " << json_path.string() << "\n";
        for (const auto &flag : result.flags)
            std::cerr << "note: " << flag << "\n";
        return 0;
    }
    catch (const Error &e)
    {
        return report_error(to_string(e.code()), e.what(), 1);
    }
    catch (const std::filesystem::filesystem_error &e)
    {
        return report_error(to_string(ErrorCode::io_failure), e.what(), 1);
    }
    catch (const std::exception &e)
    {
        return report_error("internal", e.what(), 1);
    }
}
