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

#include "squintlab/experiments.hpp"

#include "squintlab/beamformers.hpp"
#include "squintlab/estimation.hpp"
#include "squintlab/isac.hpp"
#include "squintlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

namespace squintlab
{
    namespace
    {
        struct Column
        {
            std::string mode;
            std::string metric;
            /// Aggregate as sqrt(mean(x^2)) instead of mean(x).
            bool rms = false;
        };

        using TrialBody = std::function<void(int trial, std::vector<double> &values, std::vector<std::string> &flags)>;

        struct Plan
        {
            std::vector<Column> columns;
            TrialBody run;
            /// Deterministic experiments run one trial regardless of `trials`.
            bool deterministic = false;
        };

        ArrayConfig array_of(const ExperimentSpec &s)
        {
            ArrayConfig a = ArrayConfig::half_wavelength(s.n_antennas, s.carrier_hz);
            if (s.spacing_m > 0.0)
                a.spacing_m = s.spacing_m;
            a.validate();
            return a;
        }

        SubcarrierGrid grid_of(const ExperimentSpec &s)
        {
            SubcarrierGrid g{s.n_subcarriers, s.carrier_hz, s.bandwidth_hz};
            g.validate();
            return g;
        }

        PathDrawSpec path_spec_of(const ExperimentSpec &s)
        {
            PathDrawSpec p;
            p.n_paths = s.n_paths;
            p.max_delay_s = s.max_delay_ns * 1e-9;
            return p;
        }

        std::vector<double> radians(const std::vector<double> &deg)
        {
            std::vector<double> out(deg.size());
            std::transform(deg.begin(), deg.end(), out.begin(), deg2rad);
            return out;
        }

        std::vector<std::string> active_modes(const ExperimentSpec &s)
        {
            std::vector<std::string> out;
            for (const auto &m : experiment_modes(s.experiment))
                if (s.modes.empty() || std::find(s.modes.begin(), s.modes.end(), m) != s.modes.end())
                    out.push_back(m);
            return out;
        }

        Rng scenario_rng(const ExperimentSpec &s, int trial)
        {
            return Rng(child_seed(s.seed, static_cast<std::uint64_t>(trial), kSharedStream));
        }

        // Independent noise stream `k` of one trial at one sweep point.
        Rng noise_rng(const ExperimentSpec &s, int trial, int sweep_index, std::uint64_t k = 0)
        {
            const std::uint64_t base = child_seed(s.seed, static_cast<std::uint64_t>(trial),
                                                  static_cast<std::uint64_t>(sweep_index));
            return Rng(k == 0 ? base : mix64(base ^ mix64(k)));
        }

        WidebandChannel draw_channel(const ExperimentSpec &s, const ArrayConfig &array, const SubcarrierGrid &grid,
                                     int trial)
        {
            Rng rng = scenario_rng(s, trial);
            const std::vector<PathSet> users{draw_paths(path_spec_of(s), rng)};
            return generate_channel(array, grid, users);
        }

        Plan squint_plan(const ExperimentSpec &s, std::vector<ProfileRecord> &profiles, double sweep)
        {
            const ArrayConfig array = array_of(s);
            const SubcarrierGrid grid = grid_of(s);
            const double theta0 = deg2rad(s.theta0_deg);
            Plan plan;
            plan.deterministic = true;
            const auto modes = active_modes(s);
            const bool far = std::find(modes.begin(), modes.end(), "far-field") != modes.end();
            const bool near = s.range_m > 0.0 && std::find(modes.begin(), modes.end(), "near-field") != modes.end();
            for (const char *metric : {"deviation_low_deg", "deviation_high_deg", "max_gain_loss_db"})
            {
                if (far)
                    plan.columns.push_back({"far-field", metric});
            }
            if (near)
                for (const char *metric :
                     {"deviation_low_deg", "deviation_high_deg", "max_gain_loss_db", "max_range_deviation_m"})
                    plan.columns.push_back({"near-field", metric});

            // Profiles are computed here, once, and the trial body only copies
            // the summary numbers.
            std::vector<double> summary;
            std::vector<std::string> flags;
            auto max_loss = [](const SquintReport &r) {
                double v = 0.0;
                for (double x : r.gain_loss_db)
                    v = std::max(v, std::abs(x));
                return v;
            };
            if (far)
            {
                const SquintReport r = squint_deviation_profile(array, grid, theta0);
                const BandEdgeDeviation edge = band_edge_deviation(theta0, s.carrier_hz, s.bandwidth_hz);
                summary.push_back(rad2deg(edge.low_edge_rad));
                summary.push_back(rad2deg(edge.high_edge_rad));
                summary.push_back(max_loss(r));
                profiles.push_back({"far-field", sweep, r});
            }
            if (near)
            {
                const SquintReport r =
                    near_field_squint_deviation(array, grid, theta0, s.range_m, NearFieldSearch::around(s.range_m));
                summary.push_back(rad2deg(r.deviation_rad.front()));
                summary.push_back(rad2deg(r.deviation_rad.back()));
                summary.push_back(max_loss(r));
                double range_dev = 0.0;
                for (double x : *r.range_deviation_m)
                    range_dev = std::max(range_dev, std::abs(x));
                summary.push_back(range_dev);
                if (r.boundary_hit)
                    flags.push_back("near-field search hit its window boundary");
                profiles.push_back({"near-field", sweep, r});
            }
            plan.run = [summary, flags](int, std::vector<double> &values, std::vector<std::string> &f) {
                values = summary;
                f = flags;
            };
            return plan;
        }

        Plan beamforming_plan(const ExperimentSpec &s, int)
        {
            DesignContext ctx;
            ctx.array = array_of(s);
            ctx.grid = grid_of(s);
            ctx.n_rf = s.n_rf;
            ctx.n_streams = s.n_streams;
            ctx.n_ttd_per_rf = s.n_ttd;
            ctx.quantize_ttd = s.ttd_quantize;
            ctx.ttd_max_delay_s = s.ttd_max_delay_ps * 1e-12;
            ctx.ttd_resolution_s = s.ttd_resolution_ps * 1e-12;
            ctx.dictionary_size = s.dict_size;

            std::vector<BeamformerKind> kinds;
            Plan plan;
            for (const auto &m : active_modes(s))
            {
                kinds.push_back(parse_beamformer_kind(m));
                plan.columns.push_back({m, "se"});
            }
            plan.run = [s, ctx, kinds](int trial, std::vector<double> &values, std::vector<std::string> &flags) {
                const WidebandChannel channel = draw_channel(s, ctx.array, ctx.grid, trial);
                for (auto kind : kinds)
                {
                    const DesignOutput out = design_beamformer(kind, ctx, channel);
                    values.push_back(spectral_efficiency(channel, out.precoders, s.snr_db));
                    flags.insert(flags.end(), out.flags.begin(), out.flags.end());
                }
            };
            return plan;
        }

        Plan chanest_plan(const ExperimentSpec &s, int sweep_index)
        {
            const ArrayConfig array = array_of(s);
            const SubcarrierGrid grid = grid_of(s);
            const auto modes = active_modes(s);
            auto dicts = std::make_shared<std::vector<SdDictionary>>();
            Plan plan;
            for (const auto &m : modes)
            {
                dicts->emplace_back(array, grid, s.est_dict_size, m == "omp-bsc");
                plan.columns.push_back({m, "nmse_db"});
            }
            plan.run = [s, array, grid, dicts, sweep_index](int trial, std::vector<double> &values,
                                                            std::vector<std::string> &) {
                Rng shared = scenario_rng(s, trial);
                const std::vector<PathSet> users{draw_paths(path_spec_of(s), shared)};
                const WidebandChannel channel = generate_channel(array, grid, users);
                const CMat w = random_analog_combiner(s.n_antennas, s.n_rf, s.pilot_frames, shared);
                const std::vector<CMat> combiners(static_cast<std::size_t>(grid.n_subcarriers), w);
                Rng noise = noise_rng(s, trial, sweep_index);
                const PilotObservation pilots = received_pilots(channel, combiners, s.n_rf, s.snr_db, noise);
                std::vector<CVec> truth;
                for (const auto &h : channel.per_subcarrier)
                    truth.push_back(h.col(0));
                for (const auto &dict : *dicts)
                {
                    const EstimationResult est = omp_block_estimate(pilots, dict, s.n_paths);
                    values.push_back(nmse_db(truth, est.estimate));
                }
            };
            return plan;
        }

        Plan doa_plan(const ExperimentSpec &s, int sweep_index)
        {
            const ArrayConfig array = array_of(s);
            const SubcarrierGrid grid = grid_of(s);
            const SubcarrierGrid narrow{s.n_subcarriers, s.carrier_hz, 0.0};
            ImperfectionModel imp;
            imp.mc_band = s.mc_band;
            imp.mc_coeff = cd(s.mc_coeff_re, s.mc_coeff_im);
            imp.gpm_gain_std = s.gpm_gain_std;
            imp.gpm_phase_std_rad = deg2rad(s.gpm_phase_std_deg);
            imp.validate();
            const CMat mc = mutual_coupling_matrix(array, imp);
            const std::vector<double> sources = radians(s.source_deg);
            const auto modes = active_modes(s);

            Plan plan;
            for (const auto &m : modes)
            {
                plan.columns.push_back({m, "rmse_deg", true});
                plan.columns.push_back({m, "missing_peaks"});
            }
            plan.run = [=](int trial, std::vector<double> &values, std::vector<std::string> &) {
                Rng shared = scenario_rng(s, trial);
                const CVec gpm = draw_gain_phase_mismatch(array, imp, shared);
                const int n_src = static_cast<int>(sources.size());
                auto record = [&](const MusicResult &r) {
                    const AngleError e = rmse_deg(sources, r.angles_rad);
                    values.push_back(e.rmse_deg);
                    values.push_back(static_cast<double>(r.missing_peaks));
                };

                // Clean wideband data feeds both squint modes.
                std::vector<CMat> clean;
                auto clean_covariances = [&]() -> const std::vector<CMat> & {
                    if (clean.empty())
                    {
                        Rng rng = noise_rng(s, trial, sweep_index, 1);
                        clean = covariance(doa_snapshots(array, grid, sources, s.snr_db, s.n_snapshots, rng));
                    }
                    return clean;
                };
                std::vector<CMat> coupled;
                auto coupled_covariances = [&]() -> const std::vector<CMat> & {
                    if (coupled.empty())
                    {
                        Rng rng = noise_rng(s, trial, sweep_index, 3);
                        coupled = covariance(
                            doa_snapshots(array, grid, sources, s.snr_db, s.n_snapshots, rng, &mc, &gpm));
                    }
                    return coupled;
                };

                for (const auto &m : modes)
                {
                    if (m == "uncorrected")
                        record(music_doa(clean_covariances(), array, grid, n_src, MusicMode::uncorrected));
                    else if (m == "squint-corrected")
                        record(music_doa(clean_covariances(), array, grid, n_src, MusicMode::squint_corrected));
                    else if (m == "mc-only")
                    {
                        Rng rng = noise_rng(s, trial, sweep_index, 2);
                        const auto cov = covariance(
                            doa_snapshots(array, narrow, sources, s.snr_db, s.n_snapshots, rng, &mc, &gpm));
                        record(music_doa(cov, array, narrow, n_src, MusicMode::uncorrected));
                    }
                    else if (m == "mc-uncalibrated")
                        record(music_doa(coupled_covariances(), array, grid, n_src, MusicMode::squint_corrected));
                    else if (m == "mc-calibrated")
                        record(
                            music_doa(coupled_covariances(), array, grid, n_src, MusicMode::squint_corrected, &mc));
                }
            };
            return plan;
        }

        Plan selection_plan(const ExperimentSpec &s, int sweep_index)
        {
            SelectionContext ctx;
            ctx.array = array_of(s);
            ctx.grid = grid_of(s);
            ctx.n_rf = s.n_rf;
            ctx.eta = s.eta;
            ctx.snr_db = s.snr_db;
            ctx.target_angles_rad = radians(s.target_deg);

            // The codebook is part of the scenario: drawn once per run.
            Rng codebook_rng(child_seed(s.seed, 0, kSharedStream - 1));
            const CodebookKind kind = s.codebook == "random"       ? CodebookKind::random
                                      : s.codebook == "exhaustive" ? CodebookKind::exhaustive
                                                                   : CodebookKind::contiguous_and_decimated;
            auto codebook = std::make_shared<SubarrayCodebook>(
                make_codebook(kind, s.n_antennas, s.subarray_size, s.codebook_size, codebook_rng));

            std::vector<SelectionMode> sel;
            Plan plan;
            for (const auto &m : active_modes(s))
            {
                sel.push_back(parse_selection_mode(m));
                for (const char *metric : {"objective", "se", "radar_gain_db"})
                    plan.columns.push_back({m, metric});
            }
            plan.run = [s, ctx, codebook, sel, sweep_index](int trial, std::vector<double> &values,
                                                             std::vector<std::string> &) {
                const WidebandChannel channel = draw_channel(s, ctx.array, ctx.grid, trial);
                Rng rng = noise_rng(s, trial, sweep_index);
                for (auto mode : sel)
                {
                    const SelectionResult r = select_subarray(*codebook, ctx, channel, mode, rng);
                    values.push_back(r.score.objective);
                    values.push_back(r.score.se);
                    values.push_back(r.score.radar_gain_db);
                }
            };
            return plan;
        }

        Plan im_plan(const ExperimentSpec &s, int)
        {
            ImContext ctx;
            ctx.array = array_of(s);
            ctx.grid = grid_of(s);
            ctx.n_rf = s.n_rf;
            ctx.eta = s.eta;
            ctx.snr_db = s.snr_db;
            ctx.target_angles_rad = radians(s.target_deg);
            ctx.dictionary_size = s.dict_size;
            ImConfig im;
            im.n_paths = s.n_paths;
            im.n_active = s.n_active;
            im.bits_per_symbol = s.bits_per_symbol;
            im.validate();

            // Both the IM and the conventional figure come out of one evaluation
            // per beamformer kind.
            const auto modes = active_modes(s);
            struct Slot
            {
                BeamformerKind kind;
                bool want_im = false;
                bool want_conv = false;
            };
            std::vector<Slot> slots;
            for (auto kind : {BeamformerKind::digital_sd, BeamformerKind::hybrid_plain,
                              BeamformerKind::hybrid_phase_corrected})
            {
                const std::string name(to_string(kind));
                Slot slot{kind};
                slot.want_im = std::find(modes.begin(), modes.end(), "im-" + name) != modes.end();
                slot.want_conv = std::find(modes.begin(), modes.end(), "conv-" + name) != modes.end();
                if (slot.want_im || slot.want_conv)
                    slots.push_back(slot);
            }
            Plan plan;
            for (const auto &m : modes)
                plan.columns.push_back({m, "se"});
            plan.run = [s, ctx, im, slots, modes](int trial, std::vector<double> &values, std::vector<std::string> &) {
                const WidebandChannel channel = draw_channel(s, ctx.array, ctx.grid, trial);
                std::vector<std::pair<std::string, double>> by_mode;
                for (const auto &slot : slots)
                {
                    const ImSpectralEfficiency se = im_spectral_efficiency(ctx, channel, im, slot.kind);
                    const std::string name(to_string(slot.kind));
                    by_mode.emplace_back("im-" + name, se.index_modulated);
                    by_mode.emplace_back("conv-" + name, se.conventional);
                }
                for (const auto &m : modes)
                    for (const auto &[k, v] : by_mode)
                        if (k == m)
                            values.push_back(v);
            };
            return plan;
        }

        void aggregate(const Plan &plan, const std::vector<std::vector<double>> &values, double sweep,
                       std::vector<ResultRow> &rows)
        {
            const std::size_t n = values.size();
            for (std::size_t c = 0; c < plan.columns.size(); ++c)
            {
                double sum = 0.0, sum_sq = 0.0;
                for (const auto &v : values)
                {
                    sum += v[c];
                    sum_sq += v[c] * v[c];
                }
                const double mean = sum / static_cast<double>(n);
                double var = 0.0;
                for (const auto &v : values)
                    var += (v[c] - mean) * (v[c] - mean);
                ResultRow row;
                row.sweep = sweep;
                row.metric = plan.columns[c].metric;
                row.mode = plan.columns[c].mode;
                row.mean = plan.columns[c].rms ? std::sqrt(sum_sq / static_cast<double>(n)) : mean;
                row.std = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
                row.trials = static_cast<int>(n);
                rows.push_back(std::move(row));
            }
        }
    }

    double sweep_value(const ExperimentSpec &spec, const std::string &variable)
    {
        if (variable == "snr_db")
            return spec.snr_db;
        if (variable == "eta")
            return spec.eta;
        if (variable == "bandwidth_hz")
            return spec.bandwidth_hz;
        if (variable == "theta0")
            return spec.theta0_deg;
        fail(ErrorCode::invalid_config, "field 'sweep': unknown sweep variable '" + variable + "'");
    }

    ExperimentSpec with_sweep_value(const ExperimentSpec &spec, const std::string &variable, double value)
    {
        ExperimentSpec out = spec;
        out.sweep.reset();
        if (variable == "snr_db")
            out.snr_db = value;
        else if (variable == "eta")
            out.eta = value;
        else if (variable == "bandwidth_hz")
            out.bandwidth_hz = value;
        else if (variable == "theta0")
            out.theta0_deg = value;
        else
            fail(ErrorCode::invalid_config, "field 'sweep': unknown sweep variable '" + variable + "'");
        return out;
    }

    ExperimentResult run_experiment(const ExperimentSpec &spec)
    {
        spec.validate();
        ExperimentResult result;
        result.spec = spec;
        result.sweep_variable = spec.sweep ? spec.sweep->variable : sweep_variables(spec.experiment).front();
        const std::vector<double> points =
            spec.sweep ? spec.sweep->values : std::vector<double>{sweep_value(spec, result.sweep_variable)};

        for (std::size_t i = 0; i < points.size(); ++i)
        {
            const int sweep_index = static_cast<int>(i);
            const ExperimentSpec point = with_sweep_value(spec, result.sweep_variable, points[i]);
            auto where = [&](const std::string &what) {
                return "sweep " + result.sweep_variable + "=" + std::to_string(points[i]) + " (index " +
                       std::to_string(i) + ")" + what;
            };

            Plan plan;
            try
            {
                switch (spec.experiment)
                {
                case ExperimentKind::squint_profile:
                    plan = squint_plan(point, result.profiles, points[i]);
                    break;
                case ExperimentKind::beamforming_se:
                    plan = beamforming_plan(point, sweep_index);
                    break;
                case ExperimentKind::chanest_nmse:
                    plan = chanest_plan(point, sweep_index);
                    break;
                case ExperimentKind::doa_rmse:
                    plan = doa_plan(point, sweep_index);
                    break;
                case ExperimentKind::antenna_selection:
                    plan = selection_plan(point, sweep_index);
                    break;
                case ExperimentKind::index_modulation:
                    plan = im_plan(point, sweep_index);
                    break;
                }
            }
            catch (const Error &e)
            {
                throw Error(e.code(), where(": ") + e.what());
            }

            const int trials = plan.deterministic ? 1 : spec.trials;
            std::vector<std::vector<double>> values(static_cast<std::size_t>(trials));
            std::vector<std::vector<std::string>> flags(static_cast<std::size_t>(trials));
            kernels::parallel_for(trials, [&](int t) {
                const auto slot = static_cast<std::size_t>(t);
                try
                {
                    plan.run(t, values[slot], flags[slot]);
                }
                catch (const Error &e)
                {
                    throw Error(e.code(), where(", trial " + std::to_string(t) + ": ") + e.what());
                }
                if (values[slot].size() != plan.columns.size())
                    fail(ErrorCode::dimension_mismatch, where(": trial produced the wrong number of metrics"));
            });

            aggregate(plan, values, points[i], result.rows);
            for (const auto &trial_flags : flags)
                for (const auto &f : trial_flags)
                    if (std::find(result.flags.begin(), result.flags.end(), f) == result.flags.end())
                        result.flags.push_back(f);
        }
        return result;
    }
}
