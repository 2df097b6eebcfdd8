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

#include <span>
#include <string_view>

namespace squintlab
{
    /// Steering-vector dictionary on a uniform sine grid. In BSC mode the atoms
    /// of subcarrier m are steering vectors at f_m; in plain mode every
    /// subcarrier shares the carrier-frequency atoms.
    class SdDictionary
    {
    public:
        SdDictionary(const ArrayConfig &cfg, const SubcarrierGrid &grid, int grid_size, bool bsc);

        const std::vector<double> &sine_grid() const { return sines_; }
        int size() const { return static_cast<int>(sines_.size()); }
        int n_subcarriers() const { return n_subcarriers_; }
        bool bsc() const { return bsc_; }
        /// N x G matrix of unit-norm atoms for subcarrier m.
        const CMat &atoms(int m) const;

    private:
        std::vector<double> sines_;
        std::vector<CMat> atoms_;
        int n_subcarriers_;
        bool bsc_;
    };

    struct EstimationResult
    {
        std::vector<int> support;
        /// Per subcarrier the gains of the support atoms.
        std::vector<CVec> gains;
        /// Per subcarrier the reconstructed N-vector channel.
        std::vector<CVec> estimate;
        /// Stacked squared residual after each iteration.
        std::vector<double> residual_history;
    };

    /// Block OMP with a support shared by all subcarriers. Each iteration picks
    /// the atom maximizing sum_m |phi_{m,g}^H r_m| / ||phi_{m,g}|| (phi = W_m^H d),
    /// lowest index on ties, then refits the gains per subcarrier by least squares.
    /// Runs `sparsity` iterations unless the residual vanishes first.
    EstimationResult omp_block_estimate(const PilotObservation &pilots, const SdDictionary &dict, int sparsity);

    /// Per-subcarrier sample covariance X_m X_m^H / T.
    std::vector<CMat> covariance(std::span<const CMat> snapshots);

    /// Snapshots of far-field sources with unit-power CN symbols plus CN(0, sigma^2)
    /// noise, sigma^2 = noise_variance(snr_db). Array responses pass through the
    /// coupling matrix and the per-antenna gains when given.
    std::vector<CMat> doa_snapshots(const ArrayConfig &cfg, const SubcarrierGrid &grid,
                                    std::span<const double> angles_rad, double snr_db, int n_snapshots, Rng &rng,
                                    const CMat *coupling = nullptr, const CVec *gain_phase = nullptr);

    enum class MusicMode
    {
        uncorrected,
        squint_corrected,
    };

    std::string_view to_string(MusicMode mode);

    struct MusicResult
    {
        /// Estimated angles, ascending.
        std::vector<double> angles_rad;
        /// Fewer spectrum peaks than sources were found.
        int missing_peaks = 0;
        /// Combined null spectrum on the scan grid (the pseudo-spectrum is its inverse).
        RVec null_spectrum;
    };

    /// Default scan grid: -89.95 deg to 89.95 deg in 0.05 deg steps.
    std::vector<double> default_doa_scan();

    /// MUSIC over per-subcarrier covariances. Uncorrected mode scans the averaged
    /// covariance with carrier steering; squint-corrected mode sums per-subcarrier
    /// null spectra at f_m (subcarriers at equal frequency pooled). Peaks are local minima of the null
    /// spectrum refined by three-point quadratic interpolation; the scan grid
    /// must be uniform in angle.
    MusicResult music_doa(std::span<const CMat> covariances, const ArrayConfig &cfg, const SubcarrierGrid &grid,
                          int n_sources, MusicMode mode, const CMat *calibrate_mc = nullptr,
                          std::span<const double> scan_angles_rad = {});

    inline constexpr double kNmseFloorDb = -150.0;

    /// 10 log10(sum_m ||h_m - h^_m||^2 / sum_m ||h_m||^2), floored at -150 dB.
    double nmse_db(std::span<const CVec> truth, std::span<const CVec> estimate);

    struct AngleError
    {
        double rmse_deg = 0.0;
        int matched = 0;
        /// Truth angles left without an estimate.
        int missing = 0;
    };

    /// RMSE over the minimum-cost matching of truth and estimated angles.
    AngleError rmse_deg(std::span<const double> truth_rad, std::span<const double> estimate_rad);

    /// Row assignment minimizing the total cost of a rows <= cols matrix (Hungarian method).
    std::vector<int> min_cost_assignment(const RMat &cost);
}
