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

#include "squintlab/common.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace squintlab
{
    enum class ExperimentKind
    {
        squint_profile,
        beamforming_se,
        chanest_nmse,
        doa_rmse,
        antenna_selection,
        index_modulation,
    };

    std::string_view to_string(ExperimentKind kind);
    ExperimentKind parse_experiment_kind(std::string_view name);

    struct Sweep
    {
        /// One of snr_db, eta, bandwidth_hz, theta0 (degrees).
        std::string variable;
        std::vector<double> values;

        bool operator==(const Sweep &) const = default;
    };

    /// Flat configuration of one experiment. Every field maps to one config key
    /// of the same name.
    struct ExperimentSpec
    {
        ExperimentKind experiment = ExperimentKind::squint_profile;

        // array and band
        int n_antennas = 128;
        int n_rf = 8;
        int n_subcarriers = 32;
        double carrier_hz = 300e9;
        double bandwidth_hz = 30e9;
        /// 0 selects half a carrier wavelength.
        double spacing_m = 0.0;

        double snr_db = 0.0;
        double eta = 1.0;
        int trials = 50;
        std::uint64_t seed = 1;
        std::optional<Sweep> sweep;
        std::string output;

        // channel
        int n_paths = 4;
        int n_streams = 1;
        double max_delay_ns = 20.0;

        // squint profile
        double theta0_deg = 60.0;
        /// > 0 adds the near-field profile focused at this range.
        double range_m = 0.0;

        // beamformers
        int n_ttd = 16;
        bool ttd_quantize = false;
        double ttd_max_delay_ps = 500.0;
        double ttd_resolution_ps = 5.0;
        int dict_size = 256;

        // channel estimation
        int pilot_frames = 8;
        int est_dict_size = 1024;

        // DoA
        int n_snapshots = 128;
        std::vector<double> source_deg{70.0};
        int mc_band = 1;
        double mc_coeff_re = 0.2;
        double mc_coeff_im = 0.1;
        double gpm_gain_std = 0.0;
        double gpm_phase_std_deg = 0.0;

        // ISAC
        std::vector<double> target_deg{40.0};
        int subarray_size = 8;
        std::string codebook = "default";
        int codebook_size = 256;
        int n_active = 3;
        int bits_per_symbol = 0;

        /// Restricts the reported modes; empty means all modes of the experiment.
        std::vector<std::string> modes;

        void validate() const;
        bool operator==(const ExperimentSpec &) const = default;
    };

    /// Defaults that differ by experiment (default sweep, path count, eta).
    ExperimentSpec default_spec(ExperimentKind kind);

    /// Parses `key = value` lines; `[section]` headers and `#`/`;` comments are
    /// ignored. `experiment` must be present unless `experiment_override` is set,
    /// and both must agree when both are given. Unknown keys are errors.
    ExperimentSpec parse_config(std::string_view text, std::optional<ExperimentKind> experiment_override = {});

    ExperimentSpec load_config(const std::string &path, std::optional<ExperimentKind> experiment_override = {});

    /// Text that parse_config maps back to an equal spec.
    std::string serialize_config(const ExperimentSpec &spec);

    /// Key/value pairs in declaration order with typed JSON-ready text values.
    struct ConfigEntry
    {
        std::string key;
        std::string value;
        enum class Type
        {
            integer,
            real,
            boolean,
            text,
            real_list,
            text_list
        } type;
    };

    std::vector<ConfigEntry> config_entries(const ExperimentSpec &spec);

    /// Sweep variables accepted by an experiment.
    std::vector<std::string> sweep_variables(ExperimentKind kind);

    /// Mode strings an experiment reports, in output order.
    std::vector<std::string> experiment_modes(ExperimentKind kind);
}
