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

#include "squintlab/estimation.hpp"

#include "squintlab/kernels.hpp"
#include "squintlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace squintlab
{
    SdDictionary::SdDictionary(const ArrayConfig &cfg, const SubcarrierGrid &grid, int grid_size, bool bsc)
        : n_subcarriers_(grid.n_subcarriers), bsc_(bsc)
    {
        cfg.validate();
        grid.validate();
        require(grid_size >= 1, ErrorCode::invalid_argument, "dictionary: grid size must be >= 1");
        sines_.resize(static_cast<std::size_t>(grid_size));
        for (int g = 0; g < grid_size; ++g)
            sines_[static_cast<std::size_t>(g)] = -1.0 + (2.0 * g + 1.0) / grid_size;
        const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n_antennas));
        if (bsc)
            for (int m = 0; m < grid.n_subcarriers; ++m)
                atoms_.push_back(scale * steering_matrix_sine(cfg, grid.frequency(m), sines_));
        else
            atoms_.push_back(scale * steering_matrix_sine(cfg, cfg.carrier_hz, sines_));
    }

    const CMat &SdDictionary::atoms(int m) const
    {
        require(m >= 0 && m < n_subcarriers_, ErrorCode::invalid_argument, "dictionary: subcarrier out of range");
        return atoms_[bsc_ ? static_cast<std::size_t>(m) : 0];
    }

    EstimationResult omp_block_estimate(const PilotObservation &pilots, const SdDictionary &dict, int sparsity)
    {
        const int M = dict.n_subcarriers();
        const int G = dict.size();
        require(sparsity >= 1 && sparsity <= G, ErrorCode::invalid_argument, "OMP: sparsity must be in [1, G]");
        require(static_cast<int>(pilots.observations.size()) == M && static_cast<int>(pilots.combiners.size()) == M,
                ErrorCode::dimension_mismatch, "OMP: pilots and dictionary differ in subcarrier count");

        // Measurement-domain atoms. Reused across subcarriers when neither the
        // dictionary nor the combiner changes with m.
        std::vector<CMat> phi(static_cast<std::size_t>(M));
        std::vector<RVec> phi_norm(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m)
        {
            const auto mi = static_cast<std::size_t>(m);
            const CMat &W = pilots.combiners[mi];
            require(W.rows() == dict.atoms(m).rows(), ErrorCode::dimension_mismatch, "OMP: combiner rows != N");
            require(pilots.observations[mi].size() == W.cols(), ErrorCode::dimension_mismatch,
                    "OMP: observation length != combiner columns");
            if (m > 0 && !dict.bsc() && W == pilots.combiners[0])
            {
                phi[mi] = phi[0];
                phi_norm[mi] = phi_norm[0];
                continue;
            }
            phi[mi] = W.adjoint() * dict.atoms(m);
            phi_norm[mi] = phi[mi].colwise().norm().transpose();
            for (Eigen::Index g = 0; g < G; ++g)
                if (phi_norm[mi](g) == 0.0)
                    phi_norm[mi](g) = std::numeric_limits<double>::infinity();
        }

        EstimationResult res;
        std::vector<CVec> residual(pilots.observations.begin(), pilots.observations.end());
        res.gains.assign(static_cast<std::size_t>(M), CVec());
        for (int it = 0; it < sparsity; ++it)
        {
            double energy = 0.0;
            for (const auto &r : residual)
                energy += r.squaredNorm();
            if (energy == 0.0)
                break;

            RVec score = RVec::Zero(G);
            for (int m = 0; m < M; ++m)
            {
                const auto mi = static_cast<std::size_t>(m);
                score += (phi[mi].adjoint() * residual[mi]).cwiseAbs().cwiseQuotient(phi_norm[mi]);
            }
            int best = -1;
            for (int g = 0; g < G; ++g)
            {
                if (std::find(res.support.begin(), res.support.end(), g) != res.support.end())
                    continue;
                if (best < 0 || score(g) > score(best))
                    best = g;
            }
            res.support.push_back(best);

            double stacked = 0.0;
            for (int m = 0; m < M; ++m)
            {
                const auto mi = static_cast<std::size_t>(m);
                CMat A(phi[mi].rows(), static_cast<Eigen::Index>(res.support.size()));
                for (std::size_t s = 0; s < res.support.size(); ++s)
                    A.col(static_cast<Eigen::Index>(s)) = phi[mi].col(res.support[s]);
                res.gains[mi] = linalg::least_squares(A, pilots.observations[mi]);
                residual[mi] = pilots.observations[mi] - A * res.gains[mi];
                stacked += residual[mi].squaredNorm();
            }
            res.residual_history.push_back(stacked);
        }

        res.estimate.resize(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m)
        {
            const auto mi = static_cast<std::size_t>(m);
            CVec h = CVec::Zero(dict.atoms(m).rows());
            for (std::size_t s = 0; s < res.support.size(); ++s)
                h += res.gains[mi](static_cast<Eigen::Index>(s)) * dict.atoms(m).col(res.support[s]);
            res.estimate[mi] = std::move(h);
        }
        return res;
    }

    std::vector<CMat> covariance(std::span<const CMat> snapshots)
    {
        std::vector<CMat> out;
        out.reserve(snapshots.size());
        for (const CMat &x : snapshots)
        {
            require(x.cols() >= 1, ErrorCode::invalid_argument, "covariance: need at least one snapshot");
            CMat r = CMat::Zero(x.rows(), x.rows());
            r.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0 / static_cast<double>(x.cols()));
            // mirror the lower triangle so the result is exactly Hermitian
            r = r.selfadjointView<Eigen::Lower>();
            out.push_back(std::move(r));
        }
        return out;
    }

    std::vector<CMat> doa_snapshots(const ArrayConfig &cfg, const SubcarrierGrid &grid,
                                    std::span<const double> angles_rad, double snr_db, int n_snapshots, Rng &rng,
                                    const CMat *coupling, const CVec *gain_phase)
    {
        cfg.validate();
        grid.validate();
        require(!angles_rad.empty(), ErrorCode::invalid_argument, "doa_snapshots: no sources");
        require(n_snapshots >= 1, ErrorCode::invalid_argument, "doa_snapshots: need at least one snapshot");
        const double sigma2 = noise_variance(snr_db);
        const CMat eye_mc = CMat::Identity(cfg.n_antennas, cfg.n_antennas);
        const CVec unit_gpm = CVec::Ones(cfg.n_antennas);
        const CMat &mc = coupling ? *coupling : eye_mc;
        const CVec &gpm = gain_phase ? *gain_phase : unit_gpm;

        std::vector<CMat> out;
        out.reserve(static_cast<std::size_t>(grid.n_subcarriers));
        const auto Q = static_cast<Eigen::Index>(angles_rad.size());
        for (int m = 0; m < grid.n_subcarriers; ++m)
        {
            const double f = grid.frequency(m);
            CMat A(cfg.n_antennas, Q);
            for (Eigen::Index q = 0; q < Q; ++q)
            {
                const CVec a = far_field_steering(cfg, f, angles_rad[static_cast<std::size_t>(q)]);
                A.col(q) = (coupling || gain_phase) ? apply_imperfections(a, mc, gpm) : a;
            }
            const CMat S = complex_normal_matrix(rng, Q, n_snapshots, 1.0);
            CMat X = A * S;
            if (sigma2 > 0.0)
                X += complex_normal_matrix(rng, cfg.n_antennas, n_snapshots, sigma2);
            out.push_back(std::move(X));
        }
        return out;
    }

    std::string_view to_string(MusicMode mode)
    {
        return mode == MusicMode::uncorrected ? "uncorrected" : "squint-corrected";
    }

    std::vector<double> default_doa_scan()
    {
        std::vector<double> g;
        for (int i = -1799; i <= 1799; ++i)
            g.push_back(deg2rad(0.05 * i));
        return g;
    }

    MusicResult music_doa(std::span<const CMat> covariances, const ArrayConfig &cfg, const SubcarrierGrid &grid,
                          int n_sources, MusicMode mode, const CMat *calibrate_mc,
                          std::span<const double> scan_angles_rad)
    {
        const int N = cfg.n_antennas;
        require(n_sources >= 1 && n_sources < N, ErrorCode::invalid_argument, "MUSIC: need 1 <= n_sources < N");
        require(static_cast<int>(covariances.size()) == grid.n_subcarriers, ErrorCode::dimension_mismatch,
                "MUSIC: one covariance per subcarrier required");
        for (const auto &r : covariances)
            require(r.rows() == N && r.cols() == N, ErrorCode::dimension_mismatch, "MUSIC: covariance must be N x N");

        std::vector<double> default_scan;
        if (scan_angles_rad.empty())
        {
            default_scan = default_doa_scan();
            scan_angles_rad = default_scan;
        }
        require(scan_angles_rad.size() >= 3, ErrorCode::invalid_argument, "MUSIC: scan grid needs >= 3 points");
        std::vector<double> sines(scan_angles_rad.size());
        for (std::size_t g = 0; g < sines.size(); ++g)
            sines[g] = std::sin(scan_angles_rad[g]);

        // Subcarriers sharing a frequency observe the same manifold, so their
        // covariances are pooled before the eigendecomposition. Uncorrected mode
        // pools everything at the carrier; at zero bandwidth both modes coincide.
        std::vector<std::pair<double, std::vector<int>>> groups;
        if (mode == MusicMode::uncorrected)
        {
            groups.push_back({cfg.carrier_hz, {}});
            for (int m = 0; m < grid.n_subcarriers; ++m)
                groups.back().second.push_back(m);
        }
        else
        {
            for (int m = 0; m < grid.n_subcarriers; ++m)
            {
                const double f = grid.frequency(m);
                auto it = std::find_if(groups.begin(), groups.end(), [f](const auto &g) { return g.first == f; });
                if (it == groups.end())
                    groups.push_back({f, {m}});
                else
                    it->second.push_back(m);
            }
        }

        MusicResult res;
        res.null_spectrum = RVec::Zero(static_cast<Eigen::Index>(sines.size()));
        for (const auto &[f, members] : groups)
        {
            CMat pooled = CMat::Zero(N, N);
            for (int m : members)
                pooled += covariances[static_cast<std::size_t>(m)];
            pooled /= static_cast<double>(members.size());
            const CMat us = linalg::dominant_subspace(pooled, n_sources);
            const double weight = static_cast<double>(members.size()) / grid.n_subcarriers;
            res.null_spectrum += weight * kernels::null_spectrum(cfg, f, us, sines, calibrate_mc);
        }

        const RVec &q = res.null_spectrum;
        std::vector<Eigen::Index> minima;
        for (Eigen::Index i = 1; i + 1 < q.size(); ++i)
            if (q(i) < q(i - 1) && q(i) <= q(i + 1))
                minima.push_back(i);
        std::stable_sort(minima.begin(), minima.end(), [&](Eigen::Index a, Eigen::Index b) { return q(a) < q(b); });
        if (static_cast<int>(minima.size()) > n_sources)
            minima.resize(static_cast<std::size_t>(n_sources));
        res.missing_peaks = n_sources - static_cast<int>(minima.size());

        for (Eigen::Index i : minima)
        {
            const double left = q(i - 1), mid = q(i), right = q(i + 1);
            const double curvature = left - 2.0 * mid + right;
            double offset = curvature > 0.0 ? 0.5 * (left - right) / curvature : 0.0;
            offset = std::clamp(offset, -0.5, 0.5);
            const auto ii = static_cast<std::size_t>(i);
            const double step = offset >= 0.0 ? scan_angles_rad[ii + 1] - scan_angles_rad[ii]
                                              : scan_angles_rad[ii] - scan_angles_rad[ii - 1];
            res.angles_rad.push_back(scan_angles_rad[ii] + offset * step);
        }
        std::sort(res.angles_rad.begin(), res.angles_rad.end());
        return res;
    }

    double nmse_db(std::span<const CVec> truth, std::span<const CVec> estimate)
    {
        require(!truth.empty(), ErrorCode::invalid_argument, "nmse: empty input");
        require(truth.size() == estimate.size(), ErrorCode::dimension_mismatch, "nmse: subcarrier count mismatch");
        double err = 0.0, ref = 0.0;
        for (std::size_t m = 0; m < truth.size(); ++m)
        {
            require(truth[m].size() == estimate[m].size(), ErrorCode::dimension_mismatch, "nmse: length mismatch");
            err += (truth[m] - estimate[m]).squaredNorm();
            ref += truth[m].squaredNorm();
        }
        require(ref > 0.0, ErrorCode::degenerate_input, "nmse: zero reference channel");
        if (err == 0.0)
            return kNmseFloorDb;
        return std::max(kNmseFloorDb, 10.0 * std::log10(err / ref));
    }

    std::vector<int> min_cost_assignment(const RMat &cost)
    {
        const int n = static_cast<int>(cost.rows());
        const int m = static_cast<int>(cost.cols());
        require(n <= m, ErrorCode::invalid_argument, "assignment: more rows than columns");
        if (n == 0)
            return {};
        // Shortest augmenting path with potentials, 1-based as in the textbook form.
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> u(static_cast<std::size_t>(n) + 1), v(static_cast<std::size_t>(m) + 1);
        std::vector<int> p(static_cast<std::size_t>(m) + 1), way(static_cast<std::size_t>(m) + 1);
        for (int i = 1; i <= n; ++i)
        {
            p[0] = i;
            int j0 = 0;
            std::vector<double> minv(static_cast<std::size_t>(m) + 1, inf);
            std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
            do
            {
                used[static_cast<std::size_t>(j0)] = 1;
                const int i0 = p[static_cast<std::size_t>(j0)];
                double delta = inf;
                int j1 = 0;
                for (int j = 1; j <= m; ++j)
                {
                    const auto js = static_cast<std::size_t>(j);
                    if (used[js])
                        continue;
                    const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[js];
                    if (cur < minv[js])
                    {
                        minv[js] = cur;
                        way[js] = j0;
                    }
                    if (minv[js] < delta)
                    {
                        delta = minv[js];
                        j1 = j;
                    }
                }
                for (int j = 0; j <= m; ++j)
                {
                    const auto js = static_cast<std::size_t>(j);
                    if (used[js])
                    {
                        u[static_cast<std::size_t>(p[js])] += delta;
                        v[js] -= delta;
                    }
                    else
                    {
                        minv[js] -= delta;
                    }
                }
                j0 = j1;
            } while (p[static_cast<std::size_t>(j0)] != 0);
            do
            {
                const int j1 = way[static_cast<std::size_t>(j0)];
                p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
                j0 = j1;
            } while (j0 != 0);
        }
        std::vector<int> assignment(static_cast<std::size_t>(n), -1);
        for (int j = 1; j <= m; ++j)
            if (p[static_cast<std::size_t>(j)] != 0)
                assignment[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
        return assignment;
    }

    AngleError rmse_deg(std::span<const double> truth_rad, std::span<const double> estimate_rad)
    {
        require(!truth_rad.empty(), ErrorCode::invalid_argument, "rmse: empty truth");
        AngleError out;
        out.missing = std::max(0, static_cast<int>(truth_rad.size()) - static_cast<int>(estimate_rad.size()));
        if (estimate_rad.empty())
            return out;
        const bool truth_rows = truth_rad.size() <= estimate_rad.size();
        const auto rows = truth_rows ? truth_rad : estimate_rad;
        const auto cols = truth_rows ? estimate_rad : truth_rad;
        RMat cost(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j)
            {
                const double e = rad2deg(rows[i] - cols[j]);
                cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = e * e;
            }
        const auto match = min_cost_assignment(cost);
        double sq = 0.0;
        for (std::size_t i = 0; i < match.size(); ++i)
            sq += cost(static_cast<Eigen::Index>(i), match[i]);
        out.matched = static_cast<int>(match.size());
        out.rmse_deg = std::sqrt(sq / out.matched);
        return out;
    }
}
