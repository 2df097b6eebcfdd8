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

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace squintlab
{
    using cd = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    using RVec = Eigen::VectorXd;
    using RMat = Eigen::MatrixXd;

    /// Per-subcarrier stack of N x S precoders (or combiners).
    using PrecoderSet = std::vector<CMat>;

    inline constexpr double kSpeedOfLight = 299792458.0;
    inline constexpr double kPi = std::numbers::pi;

    inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
    inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

    enum class ErrorCode
    {
        invalid_argument,
        dimension_mismatch,
        rank_deficient,
        constraint_violation,
        degenerate_input,
        invalid_config,
        io_failure,
    };

    std::string_view to_string(ErrorCode code);

    // All library failures surface as this type; `code()` is what the CLI prints.
    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string &message)
            : std::runtime_error(message), code_(code) {}

        ErrorCode code() const noexcept { return code_; }

    private:
        ErrorCode code_;
    };

    [[noreturn]] inline void fail(ErrorCode code, const std::string &message)
    {
        throw Error(code, message);
    }

    inline void require(bool condition, ErrorCode code, const std::string &message)
    {
        if (!condition)
            fail(code, message);
    }
}
