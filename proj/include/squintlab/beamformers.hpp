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

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace squintlab
{
    enum class BeamformerKind
    {
        digital_sd,
        hybrid_plain,
        hybrid_phase_corrected,
        hybrid_ttd_dpp,
        analog_sd_ps,
        beam_broadened,
    };

    inline constexpr BeamformerKind kAllBeamformerKinds[] = {
        BeamformerKind::digital_sd,     BeamformerKind::hybrid_plain,  BeamformerKind::hybrid_phase_corrected,
        BeamformerKind::hybrid_ttd_dpp, BeamformerKind::analog_sd_ps, BeamformerKind::beam_broadened,
    };

    std::string_view to_string(BeamformerKind kind);
    BeamformerKind parse_beamformer_kind(std::string_view name);

    /// Delays of a TTD network placed ahead of the phase shifters. Row k holds
    /// the K_T delays feeding RF chain k; TTD t drives antennas [tP, (t+1)P).
    struct TtdNetwork
    {
        int n_ttd_per_rf = 16;
        RMat delays_s;
        double max_delay_s = 500e-12;
        double resolution_s = 5e-12;
        bool quantized = false;

        void validate(int n_antennas) const;
    };

    struct HybridBeamformer
    {
        /// N x K, unit modulus, shared by all subcarriers.
        CMat analog;
        /// K x S per subcarrier.
        std::vector<CMat> digital;
        std::optional<TtdNetwork> ttd;
        double power = 1.0;
        /// Non-fatal adjustments made during design (e.g. K_T changed to divide N).
        std::vector<std::string> flags;

        /// End-to-end N x S precoder at subcarrier m.
        CMat precoder(int m, double f_hz) const;
        PrecoderSet precoders(const SubcarrierGrid &grid) const;
    };

    /// Unit-norm columns of the per-subcarrier digital-SD target: the top-S
    /// left singular vectors of h_m (N x U).
    PrecoderSet sd_target(const WidebandChannel &channel, int n_streams);

    /// Per-subcarrier top-S singular directions, equal power: ||F_m||_F^2 = S.
    PrecoderSet design_digital_sd(const WidebandChannel &channel, int n_streams);

    /// N x G carrier-frequency steering vectors on a G-point uniform sine grid
    /// over [-1, 1) (grid point g at -1 + (2g + 1)/G). Entries have unit modulus.
    CMat carrier_dictionary(const ArrayConfig &cfg, int grid_size = 256);

    /// Block OMP over stacked targets: picks `n_columns` dictionary columns
    /// maximizing sum over m of ||d^H R_m||^2, refitting on the stacked target
    /// after each pick. Once the target is exactly represented, the remaining
    /// columns are the most correlated unused ones. Returns column indices.
    std::vector<int> select_analog_columns(const CMat &dictionary, std::span<const CMat> targets, int n_columns);

    /// Analog stage: OMP picks against the squint-unaware model of the channel
    /// (carrier-frequency steering); digital stage: least-squares fit to that
    /// model's SD target, renormalized. Squint stays uncompensated.
    HybridBeamformer design_hybrid_plain(const ArrayConfig &cfg, const SubcarrierGrid &grid,
                                         const WidebandChannel &channel, int n_rf, int n_streams,
                                         const CMat &dictionary);

    /// D_m = argmin ||T_m - A D||_F, then scaled so that ||A D_m||_F^2 = power.
    /// Throws rank_deficient when A lacks full column rank.
    std::vector<CMat> phase_correction(const CMat &analog, std::span<const CMat> targets, double power);

    /// Same analog stage as the plain design, digital stage fit to the true SD target.
    HybridBeamformer design_hybrid_phase_corrected(const ArrayConfig &cfg, const SubcarrierGrid &grid,
                                                   const WidebandChannel &channel, int n_rf, int n_streams,
                                                   const CMat &dictionary);

    /// TTD network and phase shifters steering RF chain k to direction sine
    /// sines[k]. Delays grow linearly over the TTD blocks and are shifted to be
    /// nonnegative; the phase shifters undo the offset at f_c. When `quantize`
    /// is set delays snap to the resolution grid and clip at max_delay.
    HybridBeamformer design_ttd_dpp(const ArrayConfig &cfg, std::span<const double> sines, int n_ttd_per_rf,
                                    bool quantize, double max_delay_s = 500e-12, double resolution_s = 5e-12);

    /// analog .* exp(-i 2 pi f tau_block). Returns analog unchanged without a network or at f = 0.
    CMat effective_analog(const CMat &analog, const TtdNetwork *ttd, double f_hz);

    /// Per-subcarrier N x K analog matrices whose column k is a_{f_m}(sines[k]).
    std::vector<CMat> design_sd_phase_shifters(const ArrayConfig &cfg, const SubcarrierGrid &grid,
                                               std::span<const double> sines);

    /// Subarray-chirp weights: the n_sub subarrays steer to directions spread
    /// around theta0 with a continuous phase front. Unit norm; n_sub = 1 gives
    /// a_c(theta0)/sqrt(N).
    CVec beam_broadening(double theta0_rad, const ArrayConfig &cfg, int n_sub);

    /// Same, parameterised by the direction sine.
    CVec beam_broadening_sine(double sine, const ArrayConfig &cfg, int n_sub);

    /// Smallest power-of-two subarray count whose broadened beam covers the
    /// squint spread of direction `sine` over the band (1 at zero bandwidth).
    int broadening_subarrays(const ArrayConfig &cfg, const SubcarrierGrid &grid, double sine);

    /// Direction sines for K RF chains: the users' path directions (strongest
    /// first when there are more than K), padded with neighbouring directions
    /// offset by multiples of 1/N.
    std::vector<double> beam_directions(const WidebandChannel &channel, int n_rf, int n_antennas);

    struct DesignContext
    {
        ArrayConfig array;
        SubcarrierGrid grid;
        int n_rf = 8;
        int n_streams = 1;
        int n_ttd_per_rf = 16;
        bool quantize_ttd = false;
        double ttd_max_delay_s = 500e-12;
        double ttd_resolution_s = 5e-12;
        int dictionary_size = 256;
    };

    struct DesignOutput
    {
        PrecoderSet precoders;
        std::vector<std::string> flags;
    };

    /// One beamformer of the given kind for this channel, power-normalized to S.
    DesignOutput design_beamformer(BeamformerKind kind, const DesignContext &ctx, const WidebandChannel &channel);

    /// (1/M) sum_m log2 det(I + (SNR/S) H_m^H F_m F_m^H H_m). Precoders must
    /// satisfy ||F_m||_F^2 = S (S = columns); otherwise constraint_violation.
    double spectral_efficiency(const WidebandChannel &channel, std::span<const CMat> precoders, double snr_db);

    /// Per-subcarrier rates of the same expression.
    std::vector<double> subcarrier_rates(const WidebandChannel &channel, std::span<const CMat> precoders,
                                         double snr_db);

    /// Tolerance of the power normalization check.
    inline constexpr double kPowerTolerance = 1e-9;
}
