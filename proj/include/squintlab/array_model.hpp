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
#include "squintlab/rng.hpp"

#include <span>

namespace squintlab
{
    enum class Geometry
    {
        uniform_linear,
    };

    /// Uniform linear array. The element spacing is fixed in metres, so it is a
    /// half wavelength only at the carrier; every other subcarrier sees a
    /// different electrical spacing, which is where beam-squint comes from.
    struct ArrayConfig
    {
        int n_antennas = 0;
        double carrier_hz = 0.0;
        double spacing_m = 0.0;
        Geometry geometry = Geometry::uniform_linear;

        /// Array with half-wavelength spacing at `carrier_hz`.
        static ArrayConfig half_wavelength(int n_antennas, double carrier_hz);

        void validate() const;
        double wavelength_m() const { return kSpeedOfLight / carrier_hz; }
        double aperture_m() const { return spacing_m * (n_antennas - 1); }

        bool operator==(const ArrayConfig &) const = default;
    };

    using SteeringVector = CVec;

    /// Entry n: exp(-i 2 pi (f/c) n d sin(theta)), element 0 is the phase reference.
    SteeringVector far_field_steering(const ArrayConfig &cfg, double f_hz, double theta_rad);

    /// Same response parameterised by the direction sine u = sin(theta), |u| <= 1.
    SteeringVector far_field_steering_sine(const ArrayConfig &cfg, double f_hz, double sine);

    /// Spherical-wavefront response with exact element distances, element 0 as reference.
    SteeringVector near_field_steering(const ArrayConfig &cfg, double f_hz, double theta_rad, double range_m);

    /// Distance from element `n` to a point at (theta, range) measured from element 0.
    double element_distance(const ArrayConfig &cfg, int n, double theta_rad, double range_m);

    /// N x G matrix whose columns are far-field steering vectors on a sine grid.
    CMat steering_matrix_sine(const ArrayConfig &cfg, double f_hz, std::span<const double> sines);

    struct ImperfectionModel
    {
        int mc_band = 0;
        cd mc_coeff{0.0, 0.0};
        double gpm_gain_std = 0.0;
        double gpm_phase_std_rad = 0.0;

        void validate() const;
    };

    /// Symmetric banded Toeplitz coupling: 1 on the diagonal, mc_coeff^|i-j| inside the band.
    CMat mutual_coupling_matrix(const ArrayConfig &cfg, const ImperfectionModel &imp);

    /// Per-antenna complex gains exp(g_n + i phi_n) with zero-mean Gaussian g_n, phi_n.
    /// Drawn once per trial.
    CVec draw_gain_phase_mismatch(const ArrayConfig &cfg, const ImperfectionModel &imp, Rng &rng);

    /// diag(gpm) * mc * v
    CVec apply_imperfections(const CVec &v, const CMat &mc, const CVec &gpm);

    /// Q x N zero/one selection operator keeping a sorted set of antenna indices.
    class SubarrayMask
    {
    public:
        SubarrayMask(int n_antennas, std::vector<int> indices);

        const std::vector<int> &indices() const { return indices_; }
        int size() const { return static_cast<int>(indices_.size()); }
        int n_antennas() const { return n_antennas_; }

        CVec apply(const CVec &v) const;
        CMat apply_rows(const CMat &m) const;
        CMat matrix() const;

    private:
        int n_antennas_;
        std::vector<int> indices_;
    };

    SubarrayMask subarray_mask(const ArrayConfig &cfg, std::vector<int> indices);
}
