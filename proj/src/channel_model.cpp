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

#include "squintlab/channel_model.hpp"

#include <cmath>

namespace squintlab
{
    void SubcarrierGrid::validate() const
    {
        require(n_subcarriers >= 1, ErrorCode::invalid_argument, "n_subcarriers must be >= 1");
        require(std::isfinite(carrier_hz) && carrier_hz > 0.0, ErrorCode::invalid_argument,
                "carrier_hz must be > 0");
        require(std::isfinite(bandwidth_hz) && bandwidth_hz >= 0.0, ErrorCode::invalid_argument,
                "bandwidth_hz must be >= 0");
        require(frequency(0) > 0.0, ErrorCode::invalid_argument,
                "bandwidth too large: lowest subcarrier frequency is not positive");
    }

    double SubcarrierGrid::frequency(int m) const
    {
        const double M = n_subcarriers;
        return carrier_hz + (bandwidth_hz / M) * ((m + 1) - (M + 1.0) / 2.0);
    }

    std::vector<double> SubcarrierGrid::frequencies() const
    {
        std::vector<double> f(static_cast<std::size_t>(n_subcarriers));
        for (int m = 0; m < n_subcarriers; ++m)
            f[static_cast<std::size_t>(m)] = frequency(m);
        return f;
    }

    void PathSet::validate(double max_delay_s) const
    {
        require(!paths.empty(), ErrorCode::invalid_argument, "path set is empty");
        for (const auto &p : paths)
        {
            require(std::isfinite(p.angle_rad) && std::abs(p.angle_rad) < kPi / 2.0,
                    ErrorCode::invalid_argument, "path angle must satisfy |theta| < pi/2");
            require(std::isfinite(p.delay_s) && p.delay_s >= 0.0 && p.delay_s <= max_delay_s,
                    ErrorCode::invalid_argument, "path delay outside [0, max_delay]");
            require(std::isfinite(p.gain.real()) && std::isfinite(p.gain.imag()),
                    ErrorCode::invalid_argument, "path gain is not finite");
            if (p.range_m)
                require(*p.range_m > 0.0, ErrorCode::invalid_argument, "path range must be > 0");
        }
    }

    PathSet draw_paths(const PathDrawSpec &spec, Rng &rng)
    {
        require(spec.n_paths >= 1, ErrorCode::invalid_argument, "draw_paths: n_paths must be >= 1");
        PathSet set;
        set.paths.reserve(static_cast<std::size_t>(spec.n_paths));
        const double gain_var = 1.0 / spec.n_paths;
        for (int l = 0; l < spec.n_paths; ++l)
        {
            Path p;
            p.angle_rad = uniform(rng, spec.min_angle_rad, spec.max_angle_rad);
            p.delay_s = uniform(rng, 0.0, spec.max_delay_s);
            p.gain = complex_normal(rng, gain_var);
            set.paths.push_back(p);
        }
        return set;
    }

    void WidebandScenario::validate() const
    {
        array.validate();
        grid.validate();
        require(std::abs(grid.carrier_hz - array.carrier_hz) <= 1e-9 * array.carrier_hz,
                ErrorCode::invalid_argument, "grid and array carriers differ");
        require(n_rf >= 1 && n_rf <= array.n_antennas, ErrorCode::invalid_argument,
                "n_rf must be in [1, n_antennas]");
        require(eta >= 0.0 && eta <= 1.0, ErrorCode::invalid_argument, "eta must be in [0, 1]");
        require(trials >= 1, ErrorCode::invalid_argument, "trials must be >= 1");
        for (const auto &u : users)
            u.validate();
    }

    // exp(-i 2 pi f tau) with f*tau reduced to a fraction of a cycle before
    // scaling; delays of tens of ns put the raw phase near 1e4 rad.
    static cd delay_phasor(double f, double tau)
    {
        const double cycles = f * tau;
        const double err = std::fma(f, tau, -cycles);
        const double frac = (cycles - std::round(cycles)) + err;
        return std::polar(1.0, -2.0 * kPi * frac);
    }

    static CVec path_response(const ArrayConfig &cfg, double f, const Path &p)
    {
        const CVec a = p.range_m ? near_field_steering(cfg, f, p.angle_rad, *p.range_m)
                                 : far_field_steering(cfg, f, p.angle_rad);
        return (p.gain * delay_phasor(f, p.delay_s)) * a;
    }

    static CVec carrier_path_response(const ArrayConfig &cfg, double f, const Path &p)
    {
        const double fc = cfg.carrier_hz;
        const CVec a = p.range_m ? near_field_steering(cfg, fc, p.angle_rad, *p.range_m)
                                 : far_field_steering(cfg, fc, p.angle_rad);
        return (p.gain * delay_phasor(f, p.delay_s)) * a;
    }

    template <typename Response>
    static WidebandChannel build(const ArrayConfig &cfg, const SubcarrierGrid &grid,
                                 std::span<const PathSet> users, Response response)
    {
        cfg.validate();
        grid.validate();
        require(!users.empty(), ErrorCode::invalid_argument, "generate_channel: no users");
        WidebandChannel ch;
        ch.truth.assign(users.begin(), users.end());
        for (const auto &u : ch.truth)
            u.validate();
        const auto U = static_cast<Eigen::Index>(users.size());
        ch.per_subcarrier.assign(static_cast<std::size_t>(grid.n_subcarriers), CMat::Zero(cfg.n_antennas, U));
        for (int m = 0; m < grid.n_subcarriers; ++m)
        {
            const double f = grid.frequency(m);
            for (Eigen::Index u = 0; u < U; ++u)
                for (const auto &p : ch.truth[static_cast<std::size_t>(u)].paths)
                    ch.per_subcarrier[static_cast<std::size_t>(m)].col(u) += response(cfg, f, p);
        }
        return ch;
    }

    WidebandChannel generate_channel(const ArrayConfig &cfg, const SubcarrierGrid &grid,
                                     std::span<const PathSet> users)
    {
        return build(cfg, grid, users, path_response);
    }

    WidebandChannel generate_channel(const WidebandScenario &scenario)
    {
        scenario.validate();
        return generate_channel(scenario.array, scenario.grid, scenario.users);
    }

    WidebandChannel narrowband_model_channel(const ArrayConfig &cfg, const SubcarrierGrid &grid,
                                             const WidebandChannel &channel)
    {
        return build(cfg, grid, channel.truth, carrier_path_response);
    }

    double noise_variance(double snr_db)
    {
        require(!std::isnan(snr_db), ErrorCode::invalid_argument, "snr_db is NaN");
        if (snr_db == kNoiselessSnrDb)
            return 0.0;
        return std::pow(10.0, -snr_db / 10.0);
    }

    CMat add_awgn(const CMat &signal, double snr_db, Rng &rng)
    {
        require(signal.allFinite(), ErrorCode::invalid_argument, "add_awgn: non-finite signal");
        if (snr_db == kNoiselessSnrDb)
            return signal;
        require(signal.size() > 0, ErrorCode::invalid_argument, "add_awgn: empty signal");
        const double power = signal.squaredNorm() / static_cast<double>(signal.size());
        require(power > 0.0, ErrorCode::degenerate_input,
                "add_awgn: zero-power signal cannot be given a finite SNR");
        return signal + complex_normal_matrix(rng, signal.rows(), signal.cols(), power * noise_variance(snr_db));
    }

    CMat random_analog_combiner(int n_antennas, int n_rf, int frames, Rng &rng)
    {
        require(n_antennas > 0 && n_rf > 0 && frames > 0, ErrorCode::invalid_argument,
                "random_analog_combiner: sizes must be positive");
        const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
        CMat w(n_antennas, static_cast<Eigen::Index>(n_rf) * frames);
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            for (Eigen::Index i = 0; i < w.rows(); ++i)
                w(i, j) = std::polar(scale, uniform(rng, -kPi, kPi));
        return w;
    }

    PilotObservation received_pilots(const WidebandChannel &channel, std::span<const CMat> combiners,
                                     int columns_per_frame, double snr_db, Rng &rng)
    {
        const int M = channel.n_subcarriers();
        const int N = channel.n_antennas();
        require(static_cast<int>(combiners.size()) == M, ErrorCode::dimension_mismatch,
                "received_pilots: one combiner per subcarrier required");
        require(channel.n_users() == 1, ErrorCode::invalid_argument,
                "received_pilots: single-antenna single-user channel expected");
        require(columns_per_frame >= 1, ErrorCode::invalid_argument, "received_pilots: columns_per_frame must be >= 1");
        const double sigma2 = noise_variance(snr_db);

        PilotObservation obs;
        obs.combiners.assign(combiners.begin(), combiners.end());
        obs.observations.resize(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m)
        {
            const CMat &W = combiners[static_cast<std::size_t>(m)];
            require(W.rows() == N, ErrorCode::dimension_mismatch, "received_pilots: combiner rows != N");
            require(W.cols() % columns_per_frame == 0, ErrorCode::dimension_mismatch,
                    "received_pilots: combiner width is not a multiple of the frame width");
            const CVec h = channel.per_subcarrier[static_cast<std::size_t>(m)].col(0);
            const Eigen::Index frames = W.cols() / columns_per_frame;
            CVec y(W.cols());
            for (Eigen::Index t = 0; t < frames; ++t)
            {
                CVec rx = h;
                if (sigma2 > 0.0)
                    rx += complex_normal_matrix(rng, N, 1, sigma2);
                y.segment(t * columns_per_frame, columns_per_frame) =
                    W.middleCols(t * columns_per_frame, columns_per_frame).adjoint() * rx;
            }
            obs.observations[static_cast<std::size_t>(m)] = std::move(y);
        }
        return obs;
    }
}
