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

#include "squintlab/config.hpp"
#include "squintlab/squint.hpp"

#include <string>
#include <vector>

namespace squintlab
{
    /// One aggregated curve point.
    struct ResultRow
    {
        double sweep = 0.0;
        std::string metric;
        std::string mode;
        double mean = 0.0;
        /// Sample standard deviation over trials (0 for a single trial).
        double std = 0.0;
        int trials = 0;

        bool operator==(const ResultRow &) const = default;
    };

    /// Per-subcarrier squint profile kept alongside the rows of a squint experiment.
    struct ProfileRecord
    {
        std::string mode;
        double sweep = 0.0;
        SquintReport report;
    };

    struct ExperimentResult
    {
        ExperimentSpec spec;
        /// Name of the swept variable; the experiment's first sweep variable when
        /// the spec has no sweep, with the spec value as the single point.
        std::string sweep_variable;
        std::vector<ResultRow> rows;
        std::vector<ProfileRecord> profiles;
        /// Non-fatal design adjustments, deduplicated in first-seen order.
        std::vector<std::string> flags;
    };

    /// Value of a sweep variable in `spec` (theta0 in degrees).
    double sweep_value(const ExperimentSpec &spec, const std::string &variable);

    /// Copy of `spec` with one sweep variable set.
    ExperimentSpec with_sweep_value(const ExperimentSpec &spec, const std::string &variable, double value);

    /// Runs every sweep point and mode. Trial t of sweep point i draws its noise
    /// from child_seed(seed, t, i) and its scenario (paths, coupling mismatch)
    /// from child_seed(seed, t, kSharedStream), so sweep points share scenarios.
    /// Rows are reduced in trial order, hence independent of the worker count.
    ExperimentResult run_experiment(const ExperimentSpec &spec);
}
