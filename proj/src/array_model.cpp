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

#include "squintlab/array_model.hpp"

#include <algorithm>
#include <cmath>

namespace squintlab
{
    ArrayConfig ArrayConfig::half_wavelength(int n_antennas, double carrier_hz)
    {
        ArrayConfig cfg;
        cfg.n_antennas = n_antennas;
        cfg.carrier_hz = carrier_hz;
        cfg.spacing_m = kSpeedOfLight / (2.0 * carrier_hz);
        cfg.validate();
        return cfg;
    }

    void ArrayConfig::validate() const
    {
        require(n_antennas >= 1, ErrorCode::invalid_argument, "n_antennas must be >= 1");
        require(std::isfinite(carrier_hz) && carrier_hz > 0.0, ErrorCode::invalid_argument,
                "carrier_hz must be finite and > 0");
        require(std::isfinite(spacing_m) && spacing_m > 0.0, ErrorCode::invalid_argument,
                "spacing_m must be finite and > 0");
    }

    static void check_direction(double f_hz, double theta_rad)
    {
        require(std::isfinite(f_hz) && std::isfinite(theta_rad), ErrorCode::invalid_argument,
                "steering: non-finite input");
        require(f_hz > 0.0, ErrorCode::invalid_argument, "steering: frequency must be > 0");
        require(std::abs(theta_rad) < kPi / 2.0 + 1e-12, ErrorCode::invalid_argument,
                "steering: |theta| must be < pi/2");
    }

    SteeringVector far_field_steering(const ArrayConfig &cfg, double f_hz, double theta_rad)
    {
        check_direction(f_hz, theta_rad);
        return far_field_steering_sine(cfg, f_hz, std::sin(theta_rad));
    }

    SteeringVector far_field_steering_sine(const ArrayConfig &cfg, double f_hz, double sine)
    {
        require(std::isfinite(f_hz) && std::isfinite(sine), ErrorCode::invalid_argument,
                "steering: non-finite input");
        require(f_hz > 0.0, ErrorCode::invalid_argument, "steering: frequency must be > 0");
        const double k = 2.0 * kPi * f_hz / kSpeedOfLight * cfg.spacing_m * sine;
        SteeringVector v(cfg.n_antennas);
        for (int n = 0; n < cfg.n_antennas; ++n)
            v(n) = std::polar(1.0, -k * n);
        return v;
    }

    double element_distance(const ArrayConfig &cfg, int n, double theta_rad, double range_m)
    {
        // Sign of the cross term chosen so the large-range limit reproduces the
        // far-field phase convention (extra path -n d sin(theta)).
        const double x = n * cfg.spacing_m;
        return std::sqrt(range_m * range_m + x * x + 2.0 * range_m * x * std::sin(theta_rad));
    }

    SteeringVector near_field_steering(const ArrayConfig &cfg, double f_hz, double theta_rad, double range_m)
    {
        check_direction(f_hz, theta_rad);
        require(std::isfinite(range_m) && range_m > 0.0, ErrorCode::invalid_argument,
                "near_field_steering: range must be > 0");
        require(range_m > cfg.aperture_m(), ErrorCode::invalid_argument,
                "near_field_steering: range must exceed the array aperture");
        const double k = 2.0 * kPi * f_hz / kSpeedOfLight;
        const double s = std::sin(theta_rad);
        SteeringVector v(cfg.n_antennas);
        for (int n = 0; n < cfg.n_antennas; ++n)
        {
            const double x = n * cfg.spacing_m;
            const double rn = element_distance(cfg, n, theta_rad, range_m);
            // rn - r without cancellation
            const double delta = (x * x + 2.0 * range_m * x * s) / (rn + range_m);
            v(n) = std::polar(1.0, -k * delta);
        }
        return v;
    }

    CMat steering_matrix_sine(const ArrayConfig &cfg, double f_hz, std::span<const double> sines)
    {
        CMat out(cfg.n_antennas, static_cast<Eigen::Index>(sines.size()));
        for (std::size_t g = 0; g < sines.size(); ++g)
            out.col(static_cast<Eigen::Index>(g)) = far_field_steering_sine(cfg, f_hz, sines[g]);
        return out;
    }

    void ImperfectionModel::validate() const
    {
        require(mc_band >= 0, ErrorCode::invalid_argument, "mc_band must be >= 0");
        require(std::abs(mc_coeff) < 1.0, ErrorCode::invalid_argument,
                "|mc_coeff| must be < 1 (diverging coupling)");
        require(gpm_gain_std >= 0.0 && gpm_phase_std_rad >= 0.0, ErrorCode::invalid_argument,
                "gain/phase mismatch deviations must be >= 0");
    }

    CMat mutual_coupling_matrix(const ArrayConfig &cfg, const ImperfectionModel &imp)
    {
        imp.validate();
        const int n = cfg.n_antennas;
        require(imp.mc_band < n, ErrorCode::invalid_argument, "mc_band must be < n_antennas");
        CMat c = CMat::Zero(n, n);
        std::vector<cd> band(static_cast<std::size_t>(imp.mc_band) + 1);
        band[0] = 1.0;
        for (int k = 1; k <= imp.mc_band; ++k)
            band[k] = band[k - 1] * imp.mc_coeff;
        for (int i = 0; i < n; ++i)
            for (int j = std::max(0, i - imp.mc_band); j <= std::min(n - 1, i + imp.mc_band); ++j)
                c(i, j) = band[static_cast<std::size_t>(std::abs(i - j))];
        return c;
    }

    CVec draw_gain_phase_mismatch(const ArrayConfig &cfg, const ImperfectionModel &imp, Rng &rng)
    {
        imp.validate();
        CVec g(cfg.n_antennas);
        for (int n = 0; n < cfg.n_antennas; ++n)
        {
            const double log_gain = imp.gpm_gain_std * standard_normal(rng);
            const double phase = imp.gpm_phase_std_rad * standard_normal(rng);
            g(n) = std::polar(std::exp(log_gain), phase);
        }
        return g;
    }

    CVec apply_imperfections(const CVec &v, const CMat &mc, const CVec &gpm)
    {
        require(mc.rows() == mc.cols() && mc.cols() == v.size() && gpm.size() == v.size(),
                ErrorCode::dimension_mismatch, "apply_imperfections: dimension mismatch");
        return gpm.cwiseProduct(mc * v);
    }

    SubarrayMask::SubarrayMask(int n_antennas, std::vector<int> indices)
        : n_antennas_(n_antennas), indices_(std::move(indices))
    {
        require(!indices_.empty(), ErrorCode::invalid_argument, "subarray: empty index set");
        std::sort(indices_.begin(), indices_.end());
        require(std::adjacent_find(indices_.begin(), indices_.end()) == indices_.end(),
                ErrorCode::invalid_argument, "subarray: duplicate antenna index");
        require(indices_.front() >= 0 && indices_.back() < n_antennas_, ErrorCode::invalid_argument,
                "subarray: antenna index out of range");
    }

    CVec SubarrayMask::apply(const CVec &v) const
    {
        require(v.size() == n_antennas_, ErrorCode::dimension_mismatch, "subarray: vector length mismatch");
        CVec out(size());
        for (int q = 0; q < size(); ++q)
            out(q) = v(indices_[q]);
        return out;
    }

    CMat SubarrayMask::apply_rows(const CMat &m) const
    {
        require(m.rows() == n_antennas_, ErrorCode::dimension_mismatch, "subarray: row count mismatch");
        CMat out(size(), m.cols());
        for (int q = 0; q < size(); ++q)
            out.row(q) = m.row(indices_[q]);
        return out;
    }

    CMat SubarrayMask::matrix() const
    {
        CMat s = CMat::Zero(size(), n_antennas_);
        for (int q = 0; q < size(); ++q)
            s(q, indices_[q]) = 1.0;
        return s;
    }

    SubarrayMask subarray_mask(const ArrayConfig &cfg, std::vector<int> indices)
    {
        return SubarrayMask(cfg.n_antennas, std::move(indices));
    }
}
