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

#include "squintlab/kernels.hpp"

namespace squintlab::kernels::reference
{
    RVec gain_scan(const ArrayConfig &cfg, double f_hz, const CVec &w, std::span<const double> sines)
    {
        require(w.size() == cfg.n_antennas, ErrorCode::dimension_mismatch, "gain_scan: weight length != N");
        RVec out(static_cast<Eigen::Index>(sines.size()));
        for (std::size_t g = 0; g < sines.size(); ++g)
            out(static_cast<Eigen::Index>(g)) = std::norm(far_field_steering_sine(cfg, f_hz, sines[g]).dot(w));
        return out;
    }

    RVec null_spectrum(const ArrayConfig &cfg, double f_hz, const CMat &signal_subspace,
                       std::span<const double> sines, const CMat *coupling)
    {
        require(signal_subspace.rows() == cfg.n_antennas, ErrorCode::dimension_mismatch,
                "null_spectrum: subspace rows != N");
        RVec out(static_cast<Eigen::Index>(sines.size()));
        for (std::size_t g = 0; g < sines.size(); ++g)
        {
            CVec b = far_field_steering_sine(cfg, f_hz, sines[g]);
            if (coupling)
                b = (*coupling) * b;
            out(static_cast<Eigen::Index>(g)) = b.squaredNorm() - (signal_subspace.adjoint() * b).squaredNorm();
        }
        return out;
    }

    RMat near_field_gain_map(const ArrayConfig &cfg, double f_hz, const CVec &w,
                             std::span<const double> angles_rad, std::span<const double> ranges_m)
    {
        require(w.size() == cfg.n_antennas, ErrorCode::dimension_mismatch, "near_field_gain_map: weight length != N");
        RMat out(static_cast<Eigen::Index>(angles_rad.size()), static_cast<Eigen::Index>(ranges_m.size()));
        for (std::size_t i = 0; i < angles_rad.size(); ++i)
            for (std::size_t j = 0; j < ranges_m.size(); ++j)
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    std::norm(near_field_steering(cfg, f_hz, angles_rad[i], ranges_m[j]).dot(w));
        return out;
    }

    void serial_for(int n, const std::function<void(int)> &body)
    {
        for (int i = 0; i < n; ++i)
            body(i);
    }
}
