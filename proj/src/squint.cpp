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

#include "squintlab/squint.hpp"

#include "squintlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace squintlab
{
    double squinted_direction(double theta0_rad, double f_m, double f_c)
    {
        require(std::isfinite(theta0_rad) && std::abs(theta0_rad) < kPi / 2.0, ErrorCode::invalid_argument,
                "squinted_direction: |theta0| must be < pi/2");
        require(f_m > 0.0 && f_c > 0.0, ErrorCode::invalid_argument, "squinted_direction: frequencies must be > 0");
        return std::asin(std::clamp((f_c / f_m) * std::sin(theta0_rad), -1.0, 1.0));
    }

    BandEdgeDeviation band_edge_deviation(double theta0_rad, double carrier_hz, double bandwidth_hz)
    {
        require(bandwidth_hz >= 0.0 && bandwidth_hz < 2.0 * carrier_hz, ErrorCode::invalid_argument,
                "band_edge_deviation: bandwidth must be in [0, 2 f_c)");
        return {squinted_direction(theta0_rad, carrier_hz - bandwidth_hz / 2.0, carrier_hz) - theta0_rad,
                squinted_direction(theta0_rad, carrier_hz + bandwidth_hz / 2.0, carrier_hz) - theta0_rad};
    }

    static double to_db(double ratio) { return 10.0 * std::log10(ratio); }

    SquintReport squint_deviation_profile(const ArrayConfig &cfg, const SubcarrierGrid &grid, double theta0_rad)
    {
        cfg.validate();
        grid.validate();
        const double fc = cfg.carrier_hz;
        const CVec w = far_field_steering(cfg, fc, theta0_rad) / std::sqrt(static_cast<double>(cfg.n_antennas));
        const double ref = std::norm(far_field_steering(cfg, fc, theta0_rad).dot(w));

        SquintReport rep;
        for (int m = 0; m < grid.n_subcarriers; ++m)
        {
            const double f = grid.frequency(m);
            const double pointed = squinted_direction(theta0_rad, f, fc);
            rep.frequency_hz.push_back(f);
            rep.pointed_angle_rad.push_back(pointed);
            rep.deviation_rad.push_back(pointed - theta0_rad);
            const double g = std::norm(far_field_steering(cfg, f, theta0_rad).dot(w));
            // The carrier-matched beam is the maximum over frequency; clip rounding above 0 dB.
            rep.gain_loss_db.push_back(std::min(0.0, to_db(g / ref)));
        }
        return rep;
    }

    NearFieldSearch NearFieldSearch::around(double range0_m)
    {
        NearFieldSearch s;
        s.range_min_m = range0_m / 4.0;
        s.range_max_m = range0_m * 4.0;
        return s;
    }

    void NearFieldSearch::validate() const
    {
        require(angle_step_rad > 0.0 && range_step_m > 0.0, ErrorCode::invalid_argument,
                "near-field search: steps must be > 0");
        require(angle_halfwidth_rad >= angle_step_rad, ErrorCode::invalid_argument,
                "near-field search: angle window narrower than one step");
        require(range_min_m > 0.0 && range_max_m >= range_min_m + range_step_m, ErrorCode::invalid_argument,
                "near-field search: invalid range window");
        require(coarse_factor >= 1, ErrorCode::invalid_argument, "near-field search: coarse_factor must be >= 1");
    }

    std::vector<double> uniform_grid(double lo, double hi, double step)
    {
        require(step > 0.0 && hi >= lo, ErrorCode::invalid_argument, "uniform_grid: need step > 0 and hi >= lo");
        const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        std::vector<double> g(count);
        for (std::size_t i = 0; i < count; ++i)
            g[i] = lo + step * static_cast<double>(i);
        return g;
    }

    namespace
    {
        struct MapPeak
        {
            Eigen::Index i = 0;
            Eigen::Index j = 0;
        };

        // First maximum in row-major order, so ties resolve deterministically.
        MapPeak argmax(const RMat &map)
        {
            MapPeak p;
            double best = -1.0;
            for (Eigen::Index i = 0; i < map.rows(); ++i)
                for (Eigen::Index j = 0; j < map.cols(); ++j)
                    if (map(i, j) > best)
                    {
                        best = map(i, j);
                        p = {i, j};
                    }
            return p;
        }

        bool on_edge(const MapPeak &p, const RMat &map, bool check_angle, bool check_range)
        {
            return (check_angle && (p.i == 0 || p.i == map.rows() - 1)) ||
                   (check_range && (p.j == 0 || p.j == map.cols() - 1));
        }
    }

    SquintReport near_field_squint_deviation(const ArrayConfig &cfg, const SubcarrierGrid &grid, double theta0_rad,
                                             double range0_m, const NearFieldSearch &search)
    {
        cfg.validate();
        grid.validate();
        search.validate();
        require(range0_m >= search.range_min_m && range0_m <= search.range_max_m, ErrorCode::invalid_argument,
                "near_field_squint_deviation: range0 outside the search window");
        const double fc = cfg.carrier_hz;
        const CVec focus = near_field_steering(cfg, fc, theta0_rad, range0_m);
        const CVec w = focus / std::sqrt(static_cast<double>(cfg.n_antennas));
        const double ref = std::norm(focus.dot(w));

        const double a_lo = std::max(theta0_rad - search.angle_halfwidth_rad, -kPi / 2.0 + 1e-6);
        const double a_hi = std::min(theta0_rad + search.angle_halfwidth_rad, kPi / 2.0 - 1e-6);
        const double r_lo = std::max(search.range_min_m, cfg.aperture_m() * (1.0 + 1e-9));
        const double r_hi = search.range_max_m;
        const double coarse_a = search.angle_step_rad * search.coarse_factor;
        const double coarse_r = search.range_step_m * search.coarse_factor;
        const auto coarse_angles = uniform_grid(a_lo, a_hi, coarse_a);
        const auto coarse_ranges = uniform_grid(r_lo, r_hi, coarse_r);

        SquintReport rep;
        rep.pointed_range_m.emplace();
        rep.range_deviation_m.emplace();
        for (int m = 0; m < grid.n_subcarriers; ++m)
        {
            const double f = grid.frequency(m);
            const RMat coarse = kernels::near_field_gain_map(cfg, f, w, coarse_angles, coarse_ranges);
            const MapPeak cp = argmax(coarse);
            rep.boundary_hit |= on_edge(cp, coarse, true, true);

            const double ca = coarse_angles[static_cast<std::size_t>(cp.i)];
            const double cr = coarse_ranges[static_cast<std::size_t>(cp.j)];
            const auto fine_angles = uniform_grid(std::max(a_lo, ca - 2.0 * coarse_a),
                                                  std::min(a_hi, ca + 2.0 * coarse_a), search.angle_step_rad);
            const auto fine_ranges = uniform_grid(std::max(r_lo, cr - 2.0 * coarse_r),
                                                  std::min(r_hi, cr + 2.0 * coarse_r), search.range_step_m);
            const RMat fine = kernels::near_field_gain_map(cfg, f, w, fine_angles, fine_ranges);
            const MapPeak fp = argmax(fine);

            const double theta = fine_angles[static_cast<std::size_t>(fp.i)];
            const double range = fine_ranges[static_cast<std::size_t>(fp.j)];
            rep.frequency_hz.push_back(f);
            rep.pointed_angle_rad.push_back(theta);
            rep.deviation_rad.push_back(theta - theta0_rad);
            rep.pointed_range_m->push_back(range);
            rep.range_deviation_m->push_back(range - range0_m);
            const double g = std::norm(near_field_steering(cfg, f, theta0_rad, range0_m).dot(w));
            rep.gain_loss_db.push_back(std::min(0.0, to_db(g / ref)));
        }
        return rep;
    }

    RVec beampattern(const CVec &weights, const ArrayConfig &cfg, double f_hz, std::span<const double> angles_rad)
    {
        require(!angles_rad.empty(), ErrorCode::invalid_argument, "beampattern: empty angle grid");
        require(weights.size() == cfg.n_antennas, ErrorCode::dimension_mismatch, "beampattern: weight length != N");
        require(weights.squaredNorm() > 0.0, ErrorCode::degenerate_input, "beampattern: zero weights");
        std::vector<double> sines(angles_rad.size());
        for (std::size_t g = 0; g < angles_rad.size(); ++g)
        {
            require(std::abs(angles_rad[g]) <= kPi / 2.0 + 1e-12, ErrorCode::invalid_argument,
                    "beampattern: |theta| must be <= pi/2");
            sines[g] = std::sin(angles_rad[g]);
        }
        return kernels::gain_scan(cfg, f_hz, weights, sines);
    }

    void write_squint_csv(const SquintReport &report, std::ostream &out)
    {
        const bool nf = report.range_deviation_m.has_value();
        out << "subcarrier_hz,deviation_deg,gain_loss_db" << (nf ? ",range_dev_m" : "") << '\n';
        const auto old_precision = out.precision(17);
        for (std::size_t m = 0; m < report.size(); ++m)
        {
            out << report.frequency_hz[m] << ',' << rad2deg(report.deviation_rad[m]) << ','
                << report.gain_loss_db[m];
            if (nf)
                out << ',' << (*report.range_deviation_m)[m];
            out << '\n';
        }
        out.precision(old_precision);
    }
}
