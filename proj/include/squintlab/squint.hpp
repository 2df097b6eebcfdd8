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

#include "squintlab/channel_model.hpp"

#include <iosfwd>
#include <optional>
#include <span>

namespace squintlab
{
    /// Peak direction at f_m of a phase-shifter beam built for theta0 at f_c:
    /// arcsin(clamp((f_c / f_m) sin(theta0), -1, 1)).
    double squinted_direction(double theta0_rad, double f_m, double f_c);

    /// Deviation (pointed - theta0) at the two band edges f_c -/+ B/2.
    struct BandEdgeDeviation
    {
        double low_edge_rad = 0.0;
        double high_edge_rad = 0.0;
    };

    BandEdgeDeviation band_edge_deviation(double theta0_rad, double carrier_hz, double bandwidth_hz);

    struct SquintReport
    {
        std::vector<double> frequency_hz;
        std::vector<double> pointed_angle_rad;
        /// pointed - theta0: positive below the carrier, negative above it for theta0 > 0.
        std::vector<double> deviation_rad;
        /// Gain at theta0 of the carrier-matched beam relative to its gain at f_c.
        std::vector<double> gain_loss_db;
        std::optional<std::vector<double>> pointed_range_m;
        std::optional<std::vector<double>> range_deviation_m;
        /// Near-field search hit the edge of its window on some subcarrier.
        bool boundary_hit = false;

        std::size_t size() const { return frequency_hz.size(); }
    };

    SquintReport squint_deviation_profile(const ArrayConfig &cfg, const SubcarrierGrid &grid, double theta0_rad);

    /// 2-D search window of the near-field deviation. The window is first
    /// scanned at `coarse_factor` times the fine steps, then refined around the
    /// coarse maximum at the fine resolution.
    struct NearFieldSearch
    {
        double angle_step_rad = deg2rad(0.05);
        double range_step_m = 0.1;
        double angle_halfwidth_rad = deg2rad(10.0);
        double range_min_m = 0.0;
        double range_max_m = 0.0;
        int coarse_factor = 10;

        /// Default window: theta0 +/- 10 deg, [r0/4, 4 r0].
        static NearFieldSearch around(double range0_m);
        void validate() const;
    };

    SquintReport near_field_squint_deviation(const ArrayConfig &cfg, const SubcarrierGrid &grid, double theta0_rad,
                                             double range0_m, const NearFieldSearch &search);

    /// |a_f(theta)^H w|^2 on an angle grid. A matched unit-norm beam peaks at N.
    RVec beampattern(const CVec &weights, const ArrayConfig &cfg, double f_hz, std::span<const double> angles_rad);

    /// Uniform grid lo, lo + step, ..., up to and including hi (within rounding).
    std::vector<double> uniform_grid(double lo, double hi, double step);

    /// CSV rows: subcarrier_hz, deviation_deg, gain_loss_db[, range_dev_m].
    void write_squint_csv(const SquintReport &report, std::ostream &out);
}
