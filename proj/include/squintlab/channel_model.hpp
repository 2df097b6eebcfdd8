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

#include "squintlab/array_model.hpp"
#include "squintlab/rng.hpp"

#include <limits>
#include <optional>
#include <span>

namespace squintlab
{
    /// Centered OFDM grid without a DC subcarrier:
    /// f_m = f_c + (B/M)(m - (M+1)/2), m = 1..M.
    struct SubcarrierGrid
    {
        int n_subcarriers = 0;
        double carrier_hz = 0.0;
        double bandwidth_hz = 0.0;

        void validate() const;
        /// Zero-based index m in [0, M).
        double frequency(int m) const;
        std::vector<double> frequencies() const;

        bool operator==(const SubcarrierGrid &) const = default;
    };

    struct Path
    {
        cd gain{1.0, 0.0};
        double angle_rad = 0.0;
        double delay_s = 0.0;
        std::optional<double> range_m;
    };

    struct PathSet
    {
        std::vector<Path> paths;

        void validate(double max_delay_s = kDefaultMaxDelay) const;
        std::size_t size() const { return paths.size(); }

        static constexpr double kDefaultMaxDelay = 100e-9;
    };

    /// How random paths are drawn for a user.
    struct PathDrawSpec
    {
        int n_paths = 4;
        double min_angle_rad = -kPi / 3.0;
        double max_angle_rad = kPi / 3.0;
        double max_delay_s = 20e-9;
    };

    /// Angles uniform in [min, max], delays uniform in [0, max_delay],
    /// gains CN(0, 1/L) so that E||h_m||^2 = N.
    PathSet draw_paths(const PathDrawSpec &spec, Rng &rng);

    /// Per subcarrier an N x U matrix whose column u is h_{m,u}; the downlink
    /// channel seen by a precoder F is H_m^H F.
    struct WidebandChannel
    {
        std::vector<CMat> per_subcarrier;
        std::vector<PathSet> truth;

        int n_subcarriers() const { return static_cast<int>(per_subcarrier.size()); }
        int n_antennas() const { return per_subcarrier.empty() ? 0 : static_cast<int>(per_subcarrier[0].rows()); }
        int n_users() const { return static_cast<int>(truth.size()); }
    };

    struct TargetSpec
    {
        double angle_rad = 0.0;
        std::optional<double> range_m;
    };

    struct WidebandScenario
    {
        ArrayConfig array;
        SubcarrierGrid grid;
        int n_rf = 1;
        std::vector<PathSet> users;
        std::vector<TargetSpec> targets;
        double snr_db = 0.0;
        double eta = 1.0;
        int trials = 1;
        std::uint64_t seed = 0;

        void validate() const;
    };

    /// h_m = sum_l alpha_l exp(-i 2 pi f_m tau_l) a_m(theta_l), near-field response
    /// when a path carries a range.
    WidebandChannel generate_channel(const ArrayConfig &cfg, const SubcarrierGrid &grid,
                                     std::span<const PathSet> users);

    WidebandChannel generate_channel(const WidebandScenario &scenario);

    /// Same paths rebuilt with carrier-frequency steering vectors at every
    /// subcarrier: the channel a squint-unaware (narrowband) design believes in.
    WidebandChannel narrowband_model_channel(const ArrayConfig &cfg, const SubcarrierGrid &grid,
                                             const WidebandChannel &channel);

    inline constexpr double kNoiselessSnrDb = std::numeric_limits<double>::infinity();

    /// Adds CN(0, P/snr) noise where P is the signal's average per-sample power.
    /// snr_db = +inf leaves the signal unchanged.
    CMat add_awgn(const CMat &signal, double snr_db, Rng &rng);

    /// Noise variance relative to unit per-antenna channel power.
    double noise_variance(double snr_db);

    struct PilotObservation
    {
        /// Per subcarrier the stacked N x (frames * columns) combiner.
        std::vector<CMat> combiners;
        /// Per subcarrier y_m = W_m^H (h_m s + n).
        std::vector<CVec> observations;
    };

    /// Random unit-modulus combiners scaled by 1/sqrt(N): `frames` frames of
    /// `n_rf` columns, shared by every subcarrier (analog hardware is SI).
    CMat random_analog_combiner(int n_antennas, int n_rf, int frames, Rng &rng);

    /// Received training data of a single-antenna user with unit pilots.
    /// Frames are `columns_per_frame` wide; each frame gets an independent noise draw
    /// with variance noise_variance(snr_db) per antenna.
    PilotObservation received_pilots(const WidebandChannel &channel, std::span<const CMat> combiners,
                                     int columns_per_frame, double snr_db, Rng &rng);
}
