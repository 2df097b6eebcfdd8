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

#include "squintlab/beamformers.hpp"

#include "squintlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace squintlab
{
    std::string_view to_string(BeamformerKind kind)
    {
        switch (kind)
        {
        case BeamformerKind::digital_sd:
            return "digital-sd";
        case BeamformerKind::hybrid_plain:
            return "hybrid-plain";
        case BeamformerKind::hybrid_phase_corrected:
            return "hybrid-phase-corrected";
        case BeamformerKind::hybrid_ttd_dpp:
            return "hybrid-ttd-dpp";
        case BeamformerKind::analog_sd_ps:
            return "analog-sd-ps";
        case BeamformerKind::beam_broadened:
            return "beam-broadened";
        }
        return "unknown";
    }

    BeamformerKind parse_beamformer_kind(std::string_view name)
    {
        for (auto k : kAllBeamformerKinds)
            if (to_string(k) == name)
                return k;
        fail(ErrorCode::invalid_argument, "unknown beamformer kind '" + std::string(name) + "'");
    }

    void TtdNetwork::validate(int n_antennas) const
    {
        require(n_ttd_per_rf >= 1 && n_antennas % n_ttd_per_rf == 0, ErrorCode::invalid_argument,
                "TTD: n_ttd_per_rf must divide n_antennas");
        require(delays_s.cols() == n_ttd_per_rf, ErrorCode::dimension_mismatch, "TTD: delay matrix must be K x K_T");
        require(max_delay_s > 0.0 && resolution_s > 0.0, ErrorCode::invalid_argument,
                "TTD: max delay and resolution must be > 0");
        for (Eigen::Index i = 0; i < delays_s.size(); ++i)
            require(delays_s.data()[i] >= 0.0 && delays_s.data()[i] <= max_delay_s * (1.0 + 1e-12),
                    ErrorCode::constraint_violation, "TTD: delay outside [0, max_delay]");
    }

    CMat HybridBeamformer::precoder(int m, double f_hz) const
    {
        require(m >= 0 && m < static_cast<int>(digital.size()), ErrorCode::invalid_argument,
                "precoder: subcarrier index out of range");
        return effective_analog(analog, ttd ? &*ttd : nullptr, f_hz) * digital[static_cast<std::size_t>(m)];
    }

    PrecoderSet HybridBeamformer::precoders(const SubcarrierGrid &grid) const
    {
        require(static_cast<int>(digital.size()) == grid.n_subcarriers, ErrorCode::dimension_mismatch,
                "precoders: one digital matrix per subcarrier required");
        PrecoderSet out;
        out.reserve(digital.size());
        for (int m = 0; m < grid.n_subcarriers; ++m)
            out.push_back(precoder(m, grid.frequency(m)));
        return out;
    }

    PrecoderSet sd_target(const WidebandChannel &channel, int n_streams)
    {
        const int N = channel.n_antennas();
        require(n_streams >= 1 && n_streams <= N, ErrorCode::invalid_argument, "n_streams must be in [1, N]");
        PrecoderSet out;
        out.reserve(channel.per_subcarrier.size());
        for (const CMat &h : channel.per_subcarrier)
        {
            require(h.squaredNorm() > 0.0, ErrorCode::degenerate_input, "digital SD design: zero channel");
            if (h.cols() == 1 && n_streams == 1)
            {
                out.push_back(h / h.norm());
                continue;
            }
            const bool full = n_streams > std::min(h.rows(), h.cols());
            Eigen::JacobiSVD<CMat> svd(h, full ? Eigen::ComputeFullU : Eigen::ComputeThinU);
            out.push_back(svd.matrixU().leftCols(n_streams));
        }
        return out;
    }

    PrecoderSet design_digital_sd(const WidebandChannel &channel, int n_streams)
    {
        // Orthonormal columns already give ||F||_F^2 = S.
        return sd_target(channel, n_streams);
    }

    CMat carrier_dictionary(const ArrayConfig &cfg, int grid_size)
    {
        require(grid_size >= 1, ErrorCode::invalid_argument, "dictionary size must be >= 1");
        std::vector<double> sines(static_cast<std::size_t>(grid_size));
        for (int g = 0; g < grid_size; ++g)
            sines[static_cast<std::size_t>(g)] = -1.0 + (2.0 * g + 1.0) / grid_size;
        return steering_matrix_sine(cfg, cfg.carrier_hz, sines);
    }

    static CMat stack_columns(std::span<const CMat> blocks)
    {
        require(!blocks.empty(), ErrorCode::invalid_argument, "empty target set");
        Eigen::Index cols = 0;
        for (const auto &b : blocks)
        {
            require(b.rows() == blocks[0].rows(), ErrorCode::dimension_mismatch, "targets differ in row count");
            cols += b.cols();
        }
        CMat out(blocks[0].rows(), cols);
        Eigen::Index c = 0;
        for (const auto &b : blocks)
        {
            out.middleCols(c, b.cols()) = b;
            c += b.cols();
        }
        return out;
    }

    static Eigen::Index argmax_excluding(const RVec &score, const std::vector<int> &used)
    {
        Eigen::Index best = -1;
        for (Eigen::Index g = 0; g < score.size(); ++g)
        {
            if (std::find(used.begin(), used.end(), static_cast<int>(g)) != used.end())
                continue;
            if (best < 0 || score(g) > score(best))
                best = g;
        }
        return best;
    }

    std::vector<int> select_analog_columns(const CMat &dictionary, std::span<const CMat> targets, int n_columns)
    {
        require(n_columns >= 1 && n_columns <= dictionary.cols(), ErrorCode::invalid_argument,
                "analog OMP: need 1 <= K <= dictionary size");
        const CMat T = stack_columns(targets);
        require(T.rows() == dictionary.rows(), ErrorCode::dimension_mismatch, "analog OMP: target rows != N");
        const double target_energy = T.squaredNorm();
        require(target_energy > 0.0, ErrorCode::degenerate_input, "analog OMP: zero target");

        const RVec column_energy = dictionary.colwise().squaredNorm().transpose();
        const RVec base_score = (dictionary.adjoint() * T).rowwise().squaredNorm().cwiseQuotient(column_energy);

        std::vector<int> picked;
        CMat R = T;
        double previous = target_energy;
        bool exhausted = false;
        while (static_cast<int>(picked.size()) < n_columns)
        {
            if (exhausted)
            {
                picked.push_back(static_cast<int>(argmax_excluding(base_score, picked)));
                continue;
            }
            const RVec score = (dictionary.adjoint() * R).rowwise().squaredNorm().cwiseQuotient(column_energy);
            picked.push_back(static_cast<int>(argmax_excluding(score, picked)));
            CMat A(dictionary.rows(), static_cast<Eigen::Index>(picked.size()));
            for (std::size_t i = 0; i < picked.size(); ++i)
                A.col(static_cast<Eigen::Index>(i)) = dictionary.col(picked[i]);
            R = T - A * linalg::least_squares(A, T);
            const double residual = R.squaredNorm();
            require(residual < previous * (1.0 + 1e-12), ErrorCode::degenerate_input,
                    "analog OMP failed to reduce the residual");
            previous = residual;
            exhausted = residual <= 1e-20 * target_energy;
        }
        return picked;
    }

    static CMat gather_columns(const CMat &dictionary, const std::vector<int> &idx)
    {
        CMat A(dictionary.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i)
            A.col(static_cast<Eigen::Index>(i)) = dictionary.col(idx[i]);
        return A;
    }

    std::vector<CMat> phase_correction(const CMat &analog, std::span<const CMat> targets, double power)
    {
        require(power > 0.0, ErrorCode::invalid_argument, "phase_correction: power must be > 0");
        std::vector<CMat> out;
        out.reserve(targets.size());
        for (const CMat &t : targets)
        {
            require(t.rows() == analog.rows(), ErrorCode::dimension_mismatch, "phase_correction: target rows != N");
            CMat d = linalg::least_squares(analog, t);
            const double p = (analog * d).squaredNorm();
            require(p > 0.0, ErrorCode::degenerate_input, "phase_correction: target orthogonal to the analog span");
            d *= std::sqrt(power / p);
            out.push_back(std::move(d));
        }
        return out;
    }

    static HybridBeamformer carrier_omp_analog(const ArrayConfig &cfg, const SubcarrierGrid &grid,
                                               const WidebandChannel &channel, int n_rf, int n_streams,
                                               const CMat &dictionary, PrecoderSet &model_target)
    {
        require(n_rf >= n_streams, ErrorCode::invalid_argument, "hybrid design: n_rf must be >= n_streams");
        require(dictionary.rows() == cfg.n_antennas, ErrorCode::dimension_mismatch, "hybrid design: dictionary rows != N");
        model_target = sd_target(narrowband_model_channel(cfg, grid, channel), n_streams);
        HybridBeamformer bf;
        bf.analog = gather_columns(dictionary, select_analog_columns(dictionary, model_target, n_rf));
        bf.power = n_streams;
        return bf;
    }

    HybridBeamformer design_hybrid_plain(const ArrayConfig &cfg, const SubcarrierGrid &grid,
                                         const WidebandChannel &channel, int n_rf, int n_streams,
                                         const CMat &dictionary)
    {
        PrecoderSet model_target;
        HybridBeamformer bf = carrier_omp_analog(cfg, grid, channel, n_rf, n_streams, dictionary, model_target);
        bf.digital = phase_correction(bf.analog, model_target, bf.power);
        return bf;
    }

    HybridBeamformer design_hybrid_phase_corrected(const ArrayConfig &cfg, const SubcarrierGrid &grid,
                                                   const WidebandChannel &channel, int n_rf, int n_streams,
                                                   const CMat &dictionary)
    {
        PrecoderSet model_target;
        HybridBeamformer bf = carrier_omp_analog(cfg, grid, channel, n_rf, n_streams, dictionary, model_target);
        bf.digital = phase_correction(bf.analog, sd_target(channel, n_streams), bf.power);
        return bf;
    }

    static int smallest_divisor_at_least(int n, int k)
    {
        for (int d = std::max(k, 1); d <= n; ++d)
            if (n % d == 0)
                return d;
        return n;
    }

    HybridBeamformer design_ttd_dpp(const ArrayConfig &cfg, std::span<const double> sines, int n_ttd_per_rf,
                                    bool quantize, double max_delay_s, double resolution_s)
    {
        cfg.validate();
        require(!sines.empty(), ErrorCode::invalid_argument, "TTD design: no beam directions");
        require(n_ttd_per_rf >= 1, ErrorCode::invalid_argument, "TTD design: n_ttd_per_rf must be >= 1");
        const int N = cfg.n_antennas;
        HybridBeamformer bf;
        int kt = n_ttd_per_rf;
        if (N % kt != 0)
        {
            kt = smallest_divisor_at_least(N, kt);
            bf.flags.push_back("n_ttd adjusted from " + std::to_string(n_ttd_per_rf) + " to " + std::to_string(kt) +
                               " to divide n_antennas");
        }
        const int P = N / kt;
        const auto K = static_cast<Eigen::Index>(sines.size());

        TtdNetwork net;
        net.n_ttd_per_rf = kt;
        net.max_delay_s = max_delay_s;
        net.resolution_s = resolution_s;
        net.quantized = quantize;
        net.delays_s.resize(K, kt);
        bool clipped = false;
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const double u = sines[static_cast<std::size_t>(k)];
            require(std::isfinite(u) && std::abs(u) <= 1.0, ErrorCode::invalid_argument,
                    "TTD design: direction sine outside [-1, 1]");
            const double step = P * cfg.spacing_m * u / kSpeedOfLight;
            const double offset = std::min(0.0, step * (kt - 1));
            for (int t = 0; t < kt; ++t)
            {
                double tau = t * step - offset;
                if (quantize)
                {
                    tau = std::round(tau / resolution_s) * resolution_s;
                    if (tau > max_delay_s)
                    {
                        tau = max_delay_s;
                        clipped = true;
                    }
                }
                else
                {
                    require(tau <= max_delay_s, ErrorCode::constraint_violation,
                            "TTD design: required delay exceeds the maximum delay");
                }
                net.delays_s(k, t) = tau;
            }
        }
        if (clipped)
            bf.flags.push_back("TTD delays clipped at the maximum delay");
        net.validate(N);

        // Phase shifters steer at f_c and cancel the TTD phase there.
        bf.analog.resize(N, K);
        const double fc = cfg.carrier_hz;
        for (Eigen::Index k = 0; k < K; ++k)
            for (int n = 0; n < N; ++n)
            {
                const double geometric = n * cfg.spacing_m * sines[static_cast<std::size_t>(k)] / kSpeedOfLight;
                bf.analog(n, k) = std::polar(1.0, -2.0 * kPi * fc * (geometric - net.delays_s(k, n / P)));
            }
        bf.ttd = std::move(net);
        return bf;
    }

    CMat effective_analog(const CMat &analog, const TtdNetwork *ttd, double f_hz)
    {
        if (!ttd || f_hz == 0.0)
            return analog;
        require(ttd->delays_s.rows() == analog.cols(), ErrorCode::dimension_mismatch,
                "effective_analog: TTD rows != analog columns");
        require(ttd->n_ttd_per_rf >= 1 && analog.rows() % ttd->n_ttd_per_rf == 0, ErrorCode::dimension_mismatch,
                "effective_analog: K_T does not divide N");
        const Eigen::Index P = analog.rows() / ttd->n_ttd_per_rf;
        CMat out(analog.rows(), analog.cols());
        for (Eigen::Index k = 0; k < analog.cols(); ++k)
            for (Eigen::Index n = 0; n < analog.rows(); ++n)
                out(n, k) = analog(n, k) * std::polar(1.0, -2.0 * kPi * f_hz * ttd->delays_s(k, n / P));
        return out;
    }

    std::vector<CMat> design_sd_phase_shifters(const ArrayConfig &cfg, const SubcarrierGrid &grid,
                                               std::span<const double> sines)
    {
        grid.validate();
        require(!sines.empty(), ErrorCode::invalid_argument, "SD phase shifters: no beam directions");
        std::vector<CMat> out;
        out.reserve(static_cast<std::size_t>(grid.n_subcarriers));
        for (int m = 0; m < grid.n_subcarriers; ++m)
            out.push_back(steering_matrix_sine(cfg, grid.frequency(m), sines));
        return out;
    }

    // Half-power width in sine of the full-array beam at the carrier.
    static double full_array_width(const ArrayConfig &cfg)
    {
        return 0.886 * kSpeedOfLight / (cfg.carrier_hz * cfg.n_antennas * cfg.spacing_m);
    }

    CVec beam_broadening_sine(double sine, const ArrayConfig &cfg, int n_sub)
    {
        cfg.validate();
        require(n_sub >= 1 && cfg.n_antennas % n_sub == 0, ErrorCode::invalid_argument,
                "beam_broadening: n_sub must divide n_antennas");
        require(std::isfinite(sine) && std::abs(sine) <= 1.0, ErrorCode::invalid_argument,
                "beam_broadening: direction sine outside [-1, 1]");
        const int N = cfg.n_antennas;
        const int P = N / n_sub;
        // Total spread of the subarray directions; 1.5x the target width keeps
        // the outer half-power points of the composite beam beyond n_sub widths.
        const double spread = 1.5 * n_sub * full_array_width(cfg);
        const double k = 2.0 * kPi * cfg.carrier_hz / kSpeedOfLight;
        const double norm = 1.0 / std::sqrt(static_cast<double>(N));
        CVec w(N);
        double acc = 0.0;
        for (int s = 0; s < n_sub; ++s)
        {
            const double frac = n_sub > 1 ? (s - (n_sub - 1) / 2.0) / (n_sub - 1) : 0.0;
            const double us = sine + spread * frac;
            for (int j = 0; j < P; ++j)
                w(s * P + j) = std::polar(norm, acc - k * j * cfg.spacing_m * us);
            // continue the phase front into the next subarray
            acc -= k * P * cfg.spacing_m * us;
        }
        return w;
    }

    CVec beam_broadening(double theta0_rad, const ArrayConfig &cfg, int n_sub)
    {
        require(std::isfinite(theta0_rad) && std::abs(theta0_rad) < kPi / 2.0, ErrorCode::invalid_argument,
                "beam_broadening: |theta0| must be < pi/2");
        return beam_broadening_sine(std::sin(theta0_rad), cfg, n_sub);
    }

    int broadening_subarrays(const ArrayConfig &cfg, const SubcarrierGrid &grid, double sine)
    {
        grid.validate();
        const double f_lo = grid.frequency(0);
        const double f_hi = grid.frequency(grid.n_subcarriers - 1);
        const double spread = std::abs(sine) * cfg.carrier_hz * (1.0 / f_lo - 1.0 / f_hi);
        const double width = full_array_width(cfg);
        int n_sub = 1;
        while (n_sub * width < spread && cfg.n_antennas % (2 * n_sub) == 0 && 2 * n_sub <= cfg.n_antennas / 2)
            n_sub *= 2;
        return n_sub;
    }

    std::vector<double> beam_directions(const WidebandChannel &channel, int n_rf, int n_antennas)
    {
        require(n_rf >= 1, ErrorCode::invalid_argument, "beam_directions: n_rf must be >= 1");
        std::vector<const Path *> paths;
        for (const auto &user : channel.truth)
            for (const auto &p : user.paths)
                paths.push_back(&p);
        require(!paths.empty(), ErrorCode::invalid_argument, "beam_directions: channel has no paths");
        std::stable_sort(paths.begin(), paths.end(),
                         [](const Path *a, const Path *b) { return std::abs(a->gain) > std::abs(b->gain); });

        std::vector<double> base;
        for (const Path *p : paths)
            base.push_back(std::sin(p->angle_rad));
        const int L = static_cast<int>(base.size());
        std::vector<double> out;
        for (int k = 0; k < n_rf; ++k)
        {
            if (k < L)
            {
                out.push_back(base[static_cast<std::size_t>(k)]);
                continue;
            }
            const int j = k - L;
            const int block = j / L;
            const double sign = block % 2 == 0 ? 1.0 : -1.0;
            const double offset = sign * (block / 2 + 1) / static_cast<double>(n_antennas);
            out.push_back(std::clamp(base[static_cast<std::size_t>(j % L)] + offset, -1.0, 1.0));
        }
        return out;
    }

    static PrecoderSet fit_per_subcarrier(std::span<const CMat> analog, std::span<const CMat> targets, double power)
    {
        PrecoderSet out;
        out.reserve(targets.size());
        for (std::size_t m = 0; m < targets.size(); ++m)
        {
            const CMat d = phase_correction(analog[m], targets.subspan(m, 1), power)[0];
            out.push_back(analog[m] * d);
        }
        return out;
    }

    DesignOutput design_beamformer(BeamformerKind kind, const DesignContext &ctx, const WidebandChannel &channel)
    {
        const int S = ctx.n_streams;
        const int M = ctx.grid.n_subcarriers;
        require(channel.n_subcarriers() == M, ErrorCode::dimension_mismatch, "design: channel/grid subcarrier mismatch");
        DesignOutput out;
        switch (kind)
        {
        case BeamformerKind::digital_sd:
            out.precoders = design_digital_sd(channel, S);
            return out;
        case BeamformerKind::hybrid_plain:
        case BeamformerKind::hybrid_phase_corrected:
        {
            const CMat dict = carrier_dictionary(ctx.array, ctx.dictionary_size);
            const HybridBeamformer bf =
                kind == BeamformerKind::hybrid_plain
                    ? design_hybrid_plain(ctx.array, ctx.grid, channel, ctx.n_rf, S, dict)
                    : design_hybrid_phase_corrected(ctx.array, ctx.grid, channel, ctx.n_rf, S, dict);
            out.precoders = bf.precoders(ctx.grid);
            return out;
        }
        default:
            break;
        }

        const auto dirs = beam_directions(channel, ctx.n_rf, ctx.array.n_antennas);
        const PrecoderSet target = sd_target(channel, S);
        std::vector<CMat> analog;
        if (kind == BeamformerKind::analog_sd_ps)
        {
            analog = design_sd_phase_shifters(ctx.array, ctx.grid, dirs);
        }
        else if (kind == BeamformerKind::hybrid_ttd_dpp)
        {
            const HybridBeamformer bf = design_ttd_dpp(ctx.array, dirs, ctx.n_ttd_per_rf, ctx.quantize_ttd,
                                                        ctx.ttd_max_delay_s, ctx.ttd_resolution_s);
            out.flags = bf.flags;
            for (int m = 0; m < M; ++m)
                analog.push_back(effective_analog(bf.analog, &*bf.ttd, ctx.grid.frequency(m)));
        }
        else
        {
            CMat a(ctx.array.n_antennas, static_cast<Eigen::Index>(dirs.size()));
            const double scale = std::sqrt(static_cast<double>(ctx.array.n_antennas));
            for (std::size_t k = 0; k < dirs.size(); ++k)
                a.col(static_cast<Eigen::Index>(k)) =
                    scale * beam_broadening_sine(dirs[k], ctx.array, broadening_subarrays(ctx.array, ctx.grid, dirs[k]));
            analog.assign(static_cast<std::size_t>(M), a);
        }
        out.precoders = fit_per_subcarrier(analog, target, S);
        return out;
    }

    std::vector<double> subcarrier_rates(const WidebandChannel &channel, std::span<const CMat> precoders,
                                         double snr_db)
    {
        require(static_cast<int>(precoders.size()) == channel.n_subcarriers(), ErrorCode::dimension_mismatch,
                "spectral_efficiency: one precoder per subcarrier required");
        require(!std::isnan(snr_db), ErrorCode::invalid_argument, "spectral_efficiency: snr_db is NaN");
        const double snr = std::pow(10.0, snr_db / 10.0);
        std::vector<double> rates(precoders.size());
        for (std::size_t m = 0; m < precoders.size(); ++m)
        {
            const CMat &F = precoders[m];
            const CMat &H = channel.per_subcarrier[m];
            require(F.rows() == H.rows(), ErrorCode::dimension_mismatch, "spectral_efficiency: precoder rows != N");
            const double S = static_cast<double>(F.cols());
            require(std::abs(F.squaredNorm() - S) <= kPowerTolerance * S, ErrorCode::constraint_violation,
                    "spectral_efficiency: precoder is not power-normalized");
            const CMat G = H.adjoint() * F;
            rates[m] = linalg::log2_det_identity_plus((snr / S) * (G * G.adjoint()));
        }
        return rates;
    }

    double spectral_efficiency(const WidebandChannel &channel, std::span<const CMat> precoders, double snr_db)
    {
        const auto rates = subcarrier_rates(channel, precoders, snr_db);
        return std::accumulate(rates.begin(), rates.end(), 0.0) / static_cast<double>(rates.size());
    }
}
