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

#include "squintlab/isac.hpp"

#include "squintlab/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

namespace squintlab
{
    PrecoderSet isac_beamformer(double eta, std::span<const CMat> comms_target, std::span<const CMat> radar_target,
                                double power)
    {
        require(eta >= 0.0 && eta <= 1.0, ErrorCode::invalid_argument, "isac: eta must be in [0, 1]");
        require(comms_target.size() == radar_target.size(), ErrorCode::dimension_mismatch,
                "isac: comms and radar targets differ in subcarrier count");
        PrecoderSet out;
        out.reserve(comms_target.size());
        for (std::size_t m = 0; m < comms_target.size(); ++m)
        {
            const CMat &c = comms_target[m];
            const CMat &r = radar_target[m];
            require(c.rows() == r.rows() && c.cols() == r.cols(), ErrorCode::dimension_mismatch,
                    "isac: comms and radar target shapes differ");
            // Endpoints return the selected target untouched (up to the power budget).
            if (eta == 1.0)
                out.push_back(linalg::normalize_power(c, power));
            else if (eta == 0.0)
                out.push_back(linalg::normalize_power(r, power));
            else
                out.push_back(linalg::normalize_power(eta * c + (1.0 - eta) * r, power));
        }
        return out;
    }

    static CVec summed_steering(const ArrayConfig &cfg, double f, std::span<const double> angles)
    {
        CVec v = CVec::Zero(cfg.n_antennas);
        for (double t : angles)
            v += far_field_steering(cfg, f, t);
        return v;
    }

    PrecoderSet radar_target(const ArrayConfig &cfg, const SubcarrierGrid &grid, std::span<const double> angles_rad,
                             bool carrier_only)
    {
        require(!angles_rad.empty(), ErrorCode::invalid_argument, "radar target: no target angles");
        PrecoderSet out;
        for (int m = 0; m < grid.n_subcarriers; ++m)
        {
            const double f = carrier_only ? cfg.carrier_hz : grid.frequency(m);
            out.push_back(linalg::normalize_power(summed_steering(cfg, f, angles_rad), 1.0));
        }
        return out;
    }

    double radar_beampattern_gain_db(std::span<const CMat> weights, const ArrayConfig &cfg,
                                     const SubcarrierGrid &grid, std::span<const double> target_angles_rad)
    {
        require(!target_angles_rad.empty(), ErrorCode::invalid_argument, "radar gain: no target angles");
        require(static_cast<int>(weights.size()) == grid.n_subcarriers, ErrorCode::dimension_mismatch,
                "radar gain: one weight matrix per subcarrier required");
        double worst = std::numeric_limits<double>::infinity();
        for (int m = 0; m < grid.n_subcarriers; ++m)
        {
            const CMat &F = weights[static_cast<std::size_t>(m)];
            require(F.rows() == cfg.n_antennas, ErrorCode::dimension_mismatch, "radar gain: weight rows != N");
            const double p = F.squaredNorm();
            require(p > 0.0, ErrorCode::degenerate_input, "radar gain: zero weights");
            for (double t : target_angles_rad)
            {
                const CVec a = far_field_steering(cfg, grid.frequency(m), t);
                worst = std::min(worst, (F.adjoint() * a).squaredNorm() / (cfg.n_antennas * p));
            }
        }
        return 10.0 * std::log10(std::max(worst, 1e-300));
    }

    SubarrayCodebook::SubarrayCodebook(int n_antennas, std::vector<std::vector<int>> entries)
        : n_antennas_(n_antennas)
    {
        require(!entries.empty(), ErrorCode::invalid_argument, "codebook: no entries");
        const std::size_t q = entries[0].size();
        for (auto &e : entries)
        {
            require(e.size() == q, ErrorCode::invalid_argument, "codebook: entries differ in size");
            // validates range and duplicates, and sorts
            e = SubarrayMask(n_antennas, e).indices();
        }
        std::sort(entries.begin(), entries.end());
        entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
        entries_ = std::move(entries);
    }

    SubarrayCodebook default_codebook(int n_antennas, int q)
    {
        require(q >= 1 && q <= n_antennas, ErrorCode::invalid_argument, "codebook: need 1 <= Q <= N");
        std::vector<std::vector<int>> entries;
        for (int stride = 1; stride == 1 || (q > 1 && (q - 1) * stride < n_antennas); ++stride)
        {
            for (int start = 0; start + (q - 1) * stride < n_antennas; ++start)
            {
                std::vector<int> e(static_cast<std::size_t>(q));
                for (int i = 0; i < q; ++i)
                    e[static_cast<std::size_t>(i)] = start + i * stride;
                entries.push_back(std::move(e));
            }
            if (q == 1)
                break;
        }
        return SubarrayCodebook(n_antennas, std::move(entries));
    }

    std::vector<std::vector<int>> combinations(int n, int k)
    {
        require(k >= 0 && k <= n, ErrorCode::invalid_argument, "combinations: need 0 <= k <= n");
        std::vector<std::vector<int>> out;
        std::vector<int> c(static_cast<std::size_t>(k));
        std::iota(c.begin(), c.end(), 0);
        while (true)
        {
            out.push_back(c);
            int i = k - 1;
            while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i)
                --i;
            if (i < 0)
                break;
            ++c[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
        }
        return out;
    }

    SubarrayCodebook exhaustive_codebook(int n_antennas, int q)
    {
        require(n_antennas <= 20, ErrorCode::invalid_argument, "exhaustive codebook is limited to N <= 20");
        require(q >= 1 && q <= n_antennas, ErrorCode::invalid_argument, "codebook: need 1 <= Q <= N");
        return SubarrayCodebook(n_antennas, combinations(n_antennas, q));
    }

    SubarrayCodebook random_codebook(int n_antennas, int q, int count, Rng &rng)
    {
        require(q >= 1 && q <= n_antennas && count >= 1, ErrorCode::invalid_argument,
                "random codebook: need 1 <= Q <= N and count >= 1");
        const double total = static_cast<double>(binomial(std::min(n_antennas, 62), std::min(q, 31)));
        require(n_antennas > 62 || count <= total, ErrorCode::invalid_argument,
                "random codebook: more entries requested than subsets exist");
        std::set<std::vector<int>> seen;
        std::vector<int> pool(static_cast<std::size_t>(n_antennas));
        while (static_cast<int>(seen.size()) < count)
        {
            std::iota(pool.begin(), pool.end(), 0);
            // partial Fisher-Yates on the raw engine for portable draws
            for (int i = 0; i < q; ++i)
            {
                const auto span = static_cast<std::uint64_t>(n_antennas - i);
                const auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng() % span);
                std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
            }
            std::vector<int> e(pool.begin(), pool.begin() + q);
            std::sort(e.begin(), e.end());
            seen.insert(std::move(e));
        }
        return SubarrayCodebook(n_antennas, {seen.begin(), seen.end()});
    }

    SubarrayCodebook make_codebook(CodebookKind kind, int n_antennas, int q, int random_count, Rng &rng)
    {
        switch (kind)
        {
        case CodebookKind::contiguous_and_decimated:
            return default_codebook(n_antennas, q);
        case CodebookKind::exhaustive:
            return exhaustive_codebook(n_antennas, q);
        case CodebookKind::random:
            return random_codebook(n_antennas, q, random_count, rng);
        }
        fail(ErrorCode::invalid_argument, "unknown codebook kind");
    }

    std::string_view to_string(SelectionMode mode)
    {
        switch (mode)
        {
        case SelectionMode::bsc:
            return "bsc";
        case SelectionMode::no_bsc:
            return "no-bsc";
        case SelectionMode::random:
            return "random";
        }
        return "unknown";
    }

    SelectionMode parse_selection_mode(std::string_view name)
    {
        for (auto m : {SelectionMode::bsc, SelectionMode::no_bsc, SelectionMode::random})
            if (to_string(m) == name)
                return m;
        fail(ErrorCode::invalid_argument, "unknown selection mode '" + std::string(name) + "'");
    }

    namespace
    {
        // Full-array quantities shared by every codebook entry.
        struct SelectionCache
        {
            int Q = 0;
            CMat analog;
            Eigen::ColPivHouseholderQR<CMat> analog_qr;
            std::vector<CVec> channel;           // true h_m
            std::vector<CVec> channel_model;     // carrier-steering model of h_m
            std::vector<CVec> radar;             // sum of target steering at f_m
            std::vector<CVec> radar_model;       // same at f_c
            std::vector<CMat> target_steering;   // N x T at f_m

            SelectionCache(const SelectionContext &ctx, const WidebandChannel &channel_in, int q)
                : Q(q)
            {
                const auto &cfg = ctx.array;
                require(channel_in.n_users() == 1, ErrorCode::invalid_argument,
                        "subarray selection: single-user channel expected");
                require(channel_in.n_subcarriers() == ctx.grid.n_subcarriers, ErrorCode::dimension_mismatch,
                        "subarray selection: channel/grid subcarrier mismatch");
                require(!ctx.target_angles_rad.empty(), ErrorCode::invalid_argument,
                        "subarray selection: no radar targets");
                require(ctx.eta >= 0.0 && ctx.eta <= 1.0, ErrorCode::invalid_argument,
                        "subarray selection: eta must be in [0, 1]");
                require(ctx.n_rf >= 1, ErrorCode::invalid_argument, "subarray selection: n_rf must be >= 1");
                const int K = std::min(ctx.n_rf, Q);
                analog.resize(Q, K);
                for (int i = 0; i < Q; ++i)
                    for (int k = 0; k < K; ++k)
                        analog(i, k) = std::polar(1.0, -2.0 * kPi * i * k / Q);
                analog_qr.setThreshold(linalg::kRankTolerance);
                analog_qr.compute(analog);

                const WidebandChannel model = narrowband_model_channel(cfg, ctx.grid, channel_in);
                for (int m = 0; m < ctx.grid.n_subcarriers; ++m)
                {
                    const double f = ctx.grid.frequency(m);
                    channel.push_back(channel_in.per_subcarrier[static_cast<std::size_t>(m)].col(0));
                    channel_model.push_back(model.per_subcarrier[static_cast<std::size_t>(m)].col(0));
                    radar.push_back(summed_steering(cfg, f, ctx.target_angles_rad));
                    radar_model.push_back(summed_steering(cfg, cfg.carrier_hz, ctx.target_angles_rad));
                    CMat st(cfg.n_antennas, static_cast<Eigen::Index>(ctx.target_angles_rad.size()));
                    for (std::size_t t = 0; t < ctx.target_angles_rad.size(); ++t)
                        st.col(static_cast<Eigen::Index>(t)) = far_field_steering(cfg, f, ctx.target_angles_rad[t]);
                    target_steering.push_back(std::move(st));
                }
            }
        };

        CVec gather(const CVec &v, std::span<const int> idx)
        {
            CVec out(static_cast<Eigen::Index>(idx.size()));
            for (std::size_t i = 0; i < idx.size(); ++i)
                out(static_cast<Eigen::Index>(i)) = v(idx[i]);
            return out;
        }

        CVec unit(const CVec &v, const char *what)
        {
            const double n = v.norm();
            require(n > 0.0, ErrorCode::degenerate_input, std::string("subarray selection: zero ") + what);
            return v / n;
        }

        // Q-dimensional unit-norm weights of one subcarrier.
        CVec subarray_weight(const SelectionCache &c, double eta, int m, std::span<const int> idx, bool bsc)
        {
            const auto mi = static_cast<std::size_t>(m);
            const CVec comms = unit(gather(bsc ? c.channel[mi] : c.channel_model[mi], idx), "channel on subarray");
            const CVec radar = unit(gather(bsc ? c.radar[mi] : c.radar_model[mi], idx), "radar target on subarray");
            const CVec target = eta == 1.0 ? comms : eta == 0.0 ? radar : CVec(eta * comms + (1.0 - eta) * radar);
            const CVec f = c.analog * c.analog_qr.solve(target);
            return unit(f, "fitted weights");
        }

        SubarrayScore score(const SelectionCache &c, const SelectionContext &ctx, std::span<const int> idx, bool bsc)
        {
            const double snr = std::pow(10.0, ctx.snr_db / 10.0);
            const int M = ctx.grid.n_subcarriers;
            double se = 0.0;
            double gain = std::numeric_limits<double>::infinity();
            for (int m = 0; m < M; ++m)
            {
                const auto mi = static_cast<std::size_t>(m);
                const CVec w = subarray_weight(c, ctx.eta, m, idx, bsc);
                se += std::log2(1.0 + snr * std::norm(gather(c.channel[mi], idx).dot(w)));
                for (Eigen::Index t = 0; t < c.target_steering[mi].cols(); ++t)
                {
                    const CVec a = c.target_steering[mi].col(t);
                    gain = std::min(gain, std::norm(gather(a, idx).dot(w)) / ctx.array.n_antennas);
                }
            }
            SubarrayScore s;
            s.se = se / M;
            s.radar_gain_db = 10.0 * std::log10(std::max(gain, 1e-300));
            s.objective = ctx.eta * s.se + (1.0 - ctx.eta) * gain;
            return s;
        }
    }

    PrecoderSet subarray_weights(const SelectionContext &ctx, const WidebandChannel &channel,
                                 std::span<const int> indices, bool bsc)
    {
        const SubarrayMask mask(ctx.array.n_antennas, {indices.begin(), indices.end()});
        const SelectionCache cache(ctx, channel, mask.size());
        PrecoderSet out;
        for (int m = 0; m < ctx.grid.n_subcarriers; ++m)
        {
            const CVec w = subarray_weight(cache, ctx.eta, m, mask.indices(), bsc);
            CMat full = CMat::Zero(ctx.array.n_antennas, 1);
            for (int q = 0; q < mask.size(); ++q)
                full(mask.indices()[static_cast<std::size_t>(q)], 0) = w(q);
            out.push_back(std::move(full));
        }
        return out;
    }

    SubarrayScore evaluate_subarray(const SelectionContext &ctx, const WidebandChannel &channel,
                                    std::span<const int> indices, bool bsc)
    {
        const SubarrayMask mask(ctx.array.n_antennas, {indices.begin(), indices.end()});
        const SelectionCache cache(ctx, channel, mask.size());
        return score(cache, ctx, mask.indices(), bsc);
    }

    SelectionResult select_subarray(const SubarrayCodebook &codebook, const SelectionContext &ctx,
                                    const WidebandChannel &channel, SelectionMode mode, Rng &rng)
    {
        require(codebook.size() > 0, ErrorCode::invalid_argument, "select_subarray: empty codebook");
        require(codebook.n_antennas() == ctx.array.n_antennas, ErrorCode::dimension_mismatch,
                "select_subarray: codebook built for a different array size");
        const SelectionCache cache(ctx, channel, codebook.subarray_size());
        SelectionResult best;
        if (mode == SelectionMode::random)
        {
            best.entry = static_cast<std::size_t>(rng() % codebook.size());
            best.indices = codebook[best.entry];
            best.score = score(cache, ctx, best.indices, false);
            return best;
        }
        const bool bsc = mode == SelectionMode::bsc;
        bool first = true;
        for (std::size_t i = 0; i < codebook.size(); ++i)
        {
            const SubarrayScore s = score(cache, ctx, codebook[i], bsc);
            if (first || s.objective > best.score.objective)
            {
                best.entry = i;
                best.score = s;
                first = false;
            }
        }
        best.indices = codebook[best.entry];
        return best;
    }

    void ImConfig::validate() const
    {
        require(n_paths >= 1 && n_paths <= 62, ErrorCode::invalid_argument, "IM: n_paths must be in [1, 62]");
        require(n_active >= 1 && n_active <= n_paths, ErrorCode::invalid_argument,
                "IM: need 0 < n_active <= n_paths");
        require(bits_per_symbol >= 0, ErrorCode::invalid_argument, "IM: bits_per_symbol must be >= 0");
    }

    std::uint64_t binomial(int n, int k)
    {
        require(n >= 0 && k >= 0 && k <= n && n <= 62, ErrorCode::invalid_argument, "binomial: need 0 <= k <= n <= 62");
        k = std::min(k, n - k);
        std::uint64_t r = 1;
        for (int i = 1; i <= k; ++i)
            r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
        return r;
    }

    int index_bits(int n_paths, int n_active)
    {
        return static_cast<int>(std::bit_width(binomial(n_paths, n_active))) - 1;
    }

    std::vector<int> select_analog_columns_gram(const CMat &gram, const CMat &projection, double target_energy,
                                                int n_columns)
    {
        const Eigen::Index G = gram.rows();
        require(gram.cols() == G && projection.rows() == G, ErrorCode::dimension_mismatch,
                "analog OMP (Gram): inconsistent dimensions");
        require(n_columns >= 1 && n_columns <= G, ErrorCode::invalid_argument,
                "analog OMP (Gram): need 1 <= K <= dictionary size");
        require(target_energy > 0.0, ErrorCode::degenerate_input, "analog OMP (Gram): zero target");
        const RVec diag = gram.diagonal().real();
        const RVec base = projection.rowwise().squaredNorm().cwiseQuotient(diag);

        auto best_unused = [&](const RVec &s, const std::vector<int> &used) {
            Eigen::Index best = -1;
            for (Eigen::Index g = 0; g < G; ++g)
                if (std::find(used.begin(), used.end(), static_cast<int>(g)) == used.end() &&
                    (best < 0 || s(g) > s(best)))
                    best = g;
            return static_cast<int>(best);
        };

        std::vector<int> picked;
        CMat corr = projection;
        double previous = target_energy;
        bool exhausted = false;
        while (static_cast<int>(picked.size()) < n_columns)
        {
            if (exhausted)
            {
                picked.push_back(best_unused(base, picked));
                continue;
            }
            picked.push_back(best_unused(corr.rowwise().squaredNorm().cwiseQuotient(diag), picked));
            const auto k = static_cast<Eigen::Index>(picked.size());
            CMat g_sel(G, k), g_ss(k, k), p_sel(k, projection.cols());
            for (Eigen::Index i = 0; i < k; ++i)
            {
                g_sel.col(i) = gram.col(picked[static_cast<std::size_t>(i)]);
                p_sel.row(i) = projection.row(picked[static_cast<std::size_t>(i)]);
            }
            for (Eigen::Index i = 0; i < k; ++i)
                g_ss.row(i) = g_sel.row(picked[static_cast<std::size_t>(i)]);
            Eigen::ColPivHouseholderQR<CMat> qr(g_ss);
            qr.setThreshold(linalg::kRankTolerance);
            require(qr.rank() == k, ErrorCode::rank_deficient, "analog OMP (Gram): selected atoms are dependent");
            const CMat X = qr.solve(p_sel);
            corr = projection - g_sel * X;
            const double residual = target_energy - (p_sel.adjoint() * X).trace().real();
            exhausted = residual <= 1e-12 * target_energy;
            require(exhausted || residual < previous * (1.0 + 1e-9), ErrorCode::degenerate_input,
                    "analog OMP (Gram) failed to reduce the residual");
            previous = residual;
        }
        return picked;
    }

    namespace
    {
        double capped_rate(double snr, double gain, int bits_per_symbol)
        {
            const double r = std::log2(1.0 + snr * gain);
            return bits_per_symbol > 0 ? std::min(r, static_cast<double>(bits_per_symbol)) : r;
        }

        CVec mix(double eta, const CVec &comms, const CVec &radar)
        {
            const CVec c = comms / comms.norm();
            if (eta == 1.0)
                return c;
            const CVec r = radar / radar.norm();
            if (eta == 0.0)
                return r;
            const CVec t = eta * c + (1.0 - eta) * r;
            return t / t.norm();
        }
    }

    ImSpectralEfficiency im_spectral_efficiency(const ImContext &ctx, const WidebandChannel &channel,
                                                const ImConfig &im, BeamformerKind kind)
    {
        im.validate();
        require(kind == BeamformerKind::digital_sd || kind == BeamformerKind::hybrid_plain ||
                    kind == BeamformerKind::hybrid_phase_corrected,
                ErrorCode::invalid_argument,
                "IM: supported kinds are digital-sd, hybrid-plain and hybrid-phase-corrected");
        require(channel.n_users() == 1, ErrorCode::invalid_argument, "IM: single-user channel expected");
        const auto &paths = channel.truth[0].paths;
        require(static_cast<int>(paths.size()) >= im.n_paths, ErrorCode::invalid_argument,
                "IM: channel has fewer paths than n_paths");
        require(ctx.eta >= 0.0 && ctx.eta <= 1.0, ErrorCode::invalid_argument, "IM: eta must be in [0, 1]");
        require(ctx.eta == 1.0 || !ctx.target_angles_rad.empty(), ErrorCode::invalid_argument,
                "IM: radar targets required when eta < 1");
        const auto &cfg = ctx.array;
        const int N = cfg.n_antennas;
        const int M = ctx.grid.n_subcarriers;
        const int L = im.n_paths;
        const double snr = std::pow(10.0, ctx.snr_db / 10.0);
        const bool hybrid = kind != BeamformerKind::digital_sd;

        // Per-path responses at f_m and their carrier-steering counterparts.
        std::vector<CMat> path_true(static_cast<std::size_t>(M)), path_model(static_cast<std::size_t>(M));
        std::vector<CVec> radar_true(static_cast<std::size_t>(M));
        CVec radar_model = CVec::Ones(N);
        if (!ctx.target_angles_rad.empty())
            radar_model = summed_steering(cfg, cfg.carrier_hz, ctx.target_angles_rad);
        for (int m = 0; m < M; ++m)
        {
            const auto mi = static_cast<std::size_t>(m);
            const double f = ctx.grid.frequency(m);
            path_true[mi].resize(N, L);
            path_model[mi].resize(N, L);
            for (int l = 0; l < L; ++l)
            {
                const Path &p = paths[static_cast<std::size_t>(l)];
                const cd g = p.gain * std::polar(1.0, -2.0 * kPi * f * p.delay_s);
                path_true[mi].col(l) = g * far_field_steering(cfg, f, p.angle_rad);
                path_model[mi].col(l) = g * far_field_steering(cfg, cfg.carrier_hz, p.angle_rad);
            }
            radar_true[mi] = ctx.target_angles_rad.empty() ? CVec::Ones(N)
                                                           : summed_steering(cfg, f, ctx.target_angles_rad);
        }

        CMat dict, gram, dict_paths_model, dict_radar_model;
        if (hybrid)
        {
            dict = carrier_dictionary(cfg, ctx.dictionary_size);
            gram = dict.adjoint() * dict;
            // Carrier-steering responses change with m only through the path
            // phase factors, so project the unit-gain steering once.
            CMat steer(N, L);
            for (int l = 0; l < L; ++l)
                steer.col(l) = far_field_steering(cfg, cfg.carrier_hz, paths[static_cast<std::size_t>(l)].angle_rad);
            dict_paths_model = dict.adjoint() * steer;
            dict_radar_model = dict.adjoint() * radar_model;
        }

        // Payload rate of one beam design given per-subcarrier comms targets.
        auto payload = [&](const std::vector<CVec> &comms_true, const std::vector<CVec> &comms_model,
                           const std::vector<CVec> &coeff_model) {
            double acc = 0.0;
            if (!hybrid)
            {
                for (int m = 0; m < M; ++m)
                {
                    const auto mi = static_cast<std::size_t>(m);
                    const CVec w = mix(ctx.eta, comms_true[mi], radar_true[mi]);
                    acc += capped_rate(snr, std::norm(channel.per_subcarrier[mi].col(0).dot(w)), im.bits_per_symbol);
                }
                return acc / M;
            }
            // Analog stage: Gram-domain block OMP against the carrier-model targets.
            CMat projection(dict.cols(), M);
            std::vector<CVec> model_target(static_cast<std::size_t>(M));
            for (int m = 0; m < M; ++m)
            {
                const auto mi = static_cast<std::size_t>(m);
                const double cn = comms_model[mi].norm();
                require(cn > 0.0, ErrorCode::degenerate_input, "IM: zero comms target");
                const CVec c_proj = dict_paths_model * coeff_model[mi] / cn;
                double a = 1.0, b = 0.0;
                const CVec c_unit = comms_model[mi] / cn;
                if (ctx.eta < 1.0)
                {
                    const double rn = radar_model.norm();
                    const CVec t = ctx.eta == 0.0 ? CVec(radar_model / rn)
                                                  : CVec(ctx.eta * c_unit + (1.0 - ctx.eta) * radar_model / rn);
                    const double tn = t.norm();
                    a = ctx.eta == 0.0 ? 0.0 : ctx.eta / tn;
                    b = (ctx.eta == 0.0 ? 1.0 : 1.0 - ctx.eta) / (rn * tn);
                    model_target[mi] = t / tn;
                }
                else
                {
                    model_target[mi] = c_unit;
                }
                projection.col(m) = a * c_proj + b * dict_radar_model;
            }
            const auto picks = select_analog_columns_gram(gram, projection, static_cast<double>(M), ctx.n_rf);
            CMat A(N, static_cast<Eigen::Index>(picks.size()));
            for (std::size_t k = 0; k < picks.size(); ++k)
                A.col(static_cast<Eigen::Index>(k)) = dict.col(picks[k]);
            Eigen::ColPivHouseholderQR<CMat> qr(A);
            qr.setThreshold(linalg::kRankTolerance);
            require(qr.rank() == A.cols(), ErrorCode::rank_deficient, "IM: analog matrix is rank deficient");
            for (int m = 0; m < M; ++m)
            {
                const auto mi = static_cast<std::size_t>(m);
                const CVec target = kind == BeamformerKind::hybrid_plain ? model_target[mi]
                                                                         : mix(ctx.eta, comms_true[mi], radar_true[mi]);
                CVec w = A * qr.solve(target);
                const double wn = w.norm();
                require(wn > 0.0, ErrorCode::degenerate_input, "IM: target orthogonal to the analog span");
                w /= wn;
                acc += capped_rate(snr, std::norm(channel.per_subcarrier[mi].col(0).dot(w)), im.bits_per_symbol);
            }
            return acc / M;
        };

        auto targets_for = [&](std::span<const int> active, std::vector<CVec> &comms_true,
                               std::vector<CVec> &comms_model, std::vector<CVec> &coeff_model) {
            comms_true.assign(static_cast<std::size_t>(M), CVec::Zero(N));
            comms_model.assign(static_cast<std::size_t>(M), CVec::Zero(N));
            coeff_model.assign(static_cast<std::size_t>(M), CVec::Zero(L));
            for (int m = 0; m < M; ++m)
            {
                const auto mi = static_cast<std::size_t>(m);
                const double f = ctx.grid.frequency(m);
                for (int l : active)
                {
                    comms_true[mi] += path_true[mi].col(l);
                    comms_model[mi] += path_model[mi].col(l);
                    const Path &p = paths[static_cast<std::size_t>(l)];
                    coeff_model[mi](l) = p.gain * std::polar(1.0, -2.0 * kPi * f * p.delay_s);
                }
            }
        };

        ImSpectralEfficiency out;
        out.index_bits = index_bits(L, im.n_active);
        std::vector<CVec> ct, cm, coeff;
        const auto patterns = combinations(L, im.n_active);
        double payload_sum = 0.0;
        for (const auto &active : patterns)
        {
            targets_for(active, ct, cm, coeff);
            payload_sum += payload(ct, cm, coeff);
        }
        out.index_modulated = out.index_bits + payload_sum / static_cast<double>(patterns.size());

        std::vector<int> all(static_cast<std::size_t>(L));
        std::iota(all.begin(), all.end(), 0);
        targets_for(all, ct, cm, coeff);
        out.conventional = payload(ct, cm, coeff);
        return out;
    }
}
