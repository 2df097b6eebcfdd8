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

#include "squintlab/experiments.hpp"

#include <iosfwd>
#include <string>

namespace squintlab
{
    inline constexpr const char *kArtifactVersion = "1.0.0";

    /// Header `sweep,metric,mode,mean,std,trials`, one line per row. Numbers
    /// use the shortest text that round-trips.
    void write_csv(const ExperimentResult &result, std::ostream &out);
    void emit_csv(const ExperimentResult &result, const std::string &path);

    /// Rows plus a metadata object (typed spec echo, artifact version, seed,
    /// sweep variable, design flags, conventions).
    std::string to_json(const ExperimentResult &result);
    void emit_json(const ExperimentResult &result, const std::string &path);

    /// Rows of a document produced by to_json.
    std::vector<ResultRow> rows_from_json(const std::string &text);

    /// Shortest round-trip decimal text of a double.
    std::string format_number(double v);
}
