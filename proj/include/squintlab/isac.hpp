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

#include "squintlab/beamformers.hpp"

#include <cstdint>
#include <span>
#include <string_view>

namespace squintlab
{
    /// F_m = normalize(eta C_m + (1 - eta) R_m) to ||F_m||_F^2 = power: the minimizer
    /// of eta ||F - C||^2 + (1 - eta) ||F - R||^2, rescaled to the budget.
    PrecoderSet isac_beamformer(double eta, std::span<const CMat> comms_target, std::span<const CMat> radar_target,
                                double power = 1.0);

    /// Unit-norm per-subcarrier radar target: sum of steering vectors toward the
    /// target angles at f_m (or at f_c when `carrier_only`).
    PrecoderSet radar_target(const ArrayConfig &cfg, const SubcarrierGrid &grid, std::span<const double> angles_rad,
                             bool carrier_only = false);

    /// min over targets and subcarriers of ||F_m^H a_m(theta)||^2 / (N ||F_m||_F^2), in dB.
    /// 0 dB is the gain of a matched full-array beam.
    double radar_beampattern_gain_db(std::span<const CMat> weights, const ArrayConfig &cfg,
                                     const SubcarrierGrid &grid, std::span<const double> target_angles_rad);

    enum class CodebookKind
    {
        contiguous_and_decimated,
        random,
        exhaustive,
    };

    /// Sorted antenna index sets of equal size, canonical (lexicographic) order, no duplicates.
    class SubarrayCodebook
    {
    public:
        SubarrayCodebook(int n_antennas, std::vector<std::vector<int>> entries);

        int n_antennas() const { return n_antennas_; }
        int subarray_size() const { return entries_.empty() ? 0 : static_cast<int>(entries_[0].size()); }
        std::size_t size() const { return entries_.size(); }
        const std::vector<int> &operator[](std::size_t i) const { return entries_[i]; }
        const std::vector<std::vector<int>> &entries() const { return entries_; }

    private:
        int n_antennas_;
        std::vector<std::vector<int>> entries_;
    };

    /// All contiguous windows plus all uniform decimations (stride >= 2) of size Q.
    SubarrayCodebook default_codebook(int n_antennas, int q);
    /// Every Q-subset; only for n_antennas <= 20.
    SubarrayCodebook exhaustive_codebook(int n_antennas, int q);
    /// `count` distinct uniformly drawn Q-subsets.
    SubarrayCodebook random_codebook(int n_antennas, int q, int count, Rng &rng);
    SubarrayCodebook make_codebook(CodebookKind kind, int n_antennas, int q, int random_count, Rng &rng);

    enum class SelectionMode
    {
        bsc,
        no_bsc,
        random,
    };

    std::string_view to_string(SelectionMode mode);
    SelectionMode parse_selection_mode(std::string_view name);

    struct SelectionContext
    {
        ArrayConfig array;
        SubcarrierGrid grid;
        int n_rf = 8;
        double eta = 1.0;
        double snr_db = 0.0;
        std::vector<double> target_angles_rad;
    };

    struct SubarrayScore
    {
        double se = 0.0;
        double radar_gain_db = 0.0;
        double objective = 0.0;
    };

    struct SelectionResult
    {
        std::vector<int> indices;
        std::size_t entry = 0;
        SubarrayScore score;
    };

    /// Per-subcarrier N-vector weights of one subarray (zero off the mask). The
    /// analog stage is a Q-point DFT with min(K, Q) columns, the digital stage the
    /// least-squares fit of the eta-mixed target: built from the true channel
    /// and steering at f_m with BSC, from the carrier-frequency model without.
    PrecoderSet subarray_weights(const SelectionContext &ctx, const WidebandChannel &channel,
                                 std::span<const int> indices, bool bsc);

    /// eta SE + (1 - eta) radar gain (linear, full-array normalized).
    SubarrayScore evaluate_subarray(const SelectionContext &ctx, const WidebandChannel &channel,
                                    std::span<const int> indices, bool bsc);

    /// Argmax of the objective over the codebook (first entry on ties); random
    /// mode draws one entry uniformly and evaluates it without BSC.
    SelectionResult select_subarray(const SubarrayCodebook &codebook, const SelectionContext &ctx,
                                    const WidebandChannel &channel, SelectionMode mode, Rng &rng);

    struct ImConfig
    {
        int n_paths = 8;
        int n_active = 3;
        /// Caps the per-subcarrier payload rate when > 0; 0 means Gaussian signalling.
        int bits_per_symbol = 0;

        void validate() const;
    };

    std::uint64_t binomial(int n, int k);

    /// floor(log2 C(L, L_s)).
    int index_bits(int n_paths, int n_active);

    struct ImContext
    {
        ArrayConfig array;
        SubcarrierGrid grid;
        int n_rf = 8;
        double eta = 0.5;
        double snr_db = 0.0;
        std::vector<double> target_angles_rad;
        int dictionary_size = 256;
    };

    struct ImSpectralEfficiency
    {
        /// Index bits plus the payload rate averaged over all activation patterns.
        double index_modulated = 0.0;
        /// Payload rate of the conventional ISAC beam over the whole channel.
        double conventional = 0.0;
        int index_bits = 0;
    };

    /// IM supports digital-sd, hybrid-plain and hybrid-phase-corrected. Each of
    /// the C(L, L_s) activation patterns beams the eta-mix of the activated
    /// paths' sub-channel and the radar target; the first L channel paths are used.
    ImSpectralEfficiency im_spectral_efficiency(const ImContext &ctx, const WidebandChannel &channel,
                                                const ImConfig &im, BeamformerKind kind);

    /// All k-subsets of {0..n-1} in lexicographic order.
    std::vector<std::vector<int>> combinations(int n, int k);

    /// Block OMP on Gram-domain data (same rule as select_analog_columns):
    /// `gram` = D^H D, `projection` = D^H T with T the stacked targets.
    std::vector<int> select_analog_columns_gram(const CMat &gram, const CMat &projection, double target_energy,
                                                int n_columns);
}
