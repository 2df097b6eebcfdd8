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

// Runs the reproduction criteria at full size and prints one PASS/FAIL line
// per criterion. Exit status is nonzero when any criterion fails.

#include "checks.hpp"

#include "squintlab/config.hpp"
#include "squintlab/experiments.hpp"
#include "squintlab/isac.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

using namespace squintlab;

namespace
{
    struct Verdict
    {
        bool passed = true;
        std::string detail;

        void require(bool ok, const std::string &what)
        {
            if (!ok)
            {
                passed = false;
                detail += (detail.empty() ? "" : "; ") + what;
            }
        }
    };

    std::string fmt(double v, int digits = 4)
    {
        std::ostringstream s;
        s.precision(digits);
        s << v;
        return s.str();
    }

    class Table
    {
    public:
        explicit Table(const ExperimentResult &r)
        {
            for (const auto &row : r.rows)
                rows_[{row.sweep, row.metric, row.mode}] = row.mean;
        }

        double at(double sweep, const std::string &metric, const std::string &mode) const
        {
            const auto it = rows_.find({sweep, metric, mode});
            if (it == rows_.end())
                fail(ErrorCode::invalid_argument, "missing row " + metric + "/" + mode + " at " + fmt(sweep));
            return it->second;
        }

    private:
        std::map<std::tuple<double, std::string, std::string>, double> rows_;
    };

    // a >= b with a relative slack for values equal up to rounding
    bool at_least(double a, double b) { return a >= b - 1e-9 * std::max(std::abs(a), std::abs(b)); }

    ExperimentSpec spec_for(ExperimentKind kind, std::uint64_t seed)
    {
        ExperimentSpec s = default_spec(kind);
        s.seed = seed;
        return s;
    }

    Verdict squint_magnitudes()
    {
        Verdict v;
        const auto suite = checks::squint_magnitude_suite();
        v.require(checks::all_passed(suite), checks::failures(suite));
        if (v.passed)
            v.detail = std::to_string(suite.size()) + " checks";
        return v;
    }

    Verdict oracle_equivalence()
    {
        Verdict v;
        const auto suite = checks::oracle_suite();
        v.require(checks::all_passed(suite), checks::failures(suite));
        if (v.passed)
            v.detail = std::to_string(suite.size()) + " oracle comparisons";
        return v;
    }

    Verdict beamforming_ordering()
    {
        ExperimentSpec s = spec_for(ExperimentKind::beamforming_se, 2024);
        s.trials = 50;
        s.snr_db = 0.0;
        s.sweep.reset();
        s.modes = {"digital-sd", "analog-sd-ps", "hybrid-ttd-dpp", "hybrid-phase-corrected", "hybrid-plain"};
        const Table t(run_experiment(s));
        const double x = sweep_value(s, "snr_db");
        std::vector<double> se;
        for (const auto &m : s.modes)
            se.push_back(t.at(x, "se", m));
        Verdict v;
        for (std::size_t i = 1; i < se.size(); ++i)
            v.require(at_least(se[i - 1], se[i]), s.modes[i - 1] + " < " + s.modes[i]);
        const double gap = (se[0] - se[2]) / se[0];
        v.require(gap < 0.10, "digital-TTD gap " + fmt(100 * gap) + "%");
        v.detail += (v.detail.empty() ? "" : "; ") + std::string("SE ") + fmt(se[0]) + " >= " + fmt(se[1]) +
                    " >= " + fmt(se[2]) + " >= " + fmt(se[3]) + " >= " + fmt(se[4]) + ", TTD gap " +
                    fmt(100 * gap, 3) + "%";
        return v;
    }

    Verdict nmse_contrast()
    {
        Verdict v;
        ExperimentSpec s = spec_for(ExperimentKind::chanest_nmse, 2025);
        s.trials = 50;
        s.sweep = Sweep{"snr_db", {10.0, 20.0}};
        const Table t(run_experiment(s));
        for (double snr : {10.0, 20.0})
        {
            const double bsc = t.at(snr, "nmse_db", "omp-bsc"), plain = t.at(snr, "nmse_db", "omp-plain");
            v.require(bsc <= plain - 10.0, "gap at " + fmt(snr) + " dB only " + fmt(plain - bsc));
            v.detail += (v.detail.empty() ? "" : "; ") + fmt(snr) + " dB: " + fmt(bsc) + " vs " + fmt(plain) + " dB";
        }
        ExperimentSpec z = s;
        z.trials = 5;
        z.bandwidth_hz = 0.0;
        z.sweep = Sweep{"snr_db", {0.0, 20.0}};
        const auto r = run_experiment(z);
        for (std::size_t i = 0; i + 1 < r.rows.size(); i += 2)
        {
            ResultRow a = r.rows[i], b = r.rows[i + 1];
            b.mode = a.mode;
            v.require(a == b, "B=0 modes differ at " + fmt(a.sweep) + " dB");
        }
        return v;
    }

    Verdict doa_contrast()
    {
        Verdict v;
        ExperimentSpec s = spec_for(ExperimentKind::doa_rmse, 2026);
        s.trials = 50;
        s.sweep = Sweep{"snr_db", {-10.0, 0.0, 10.0, 20.0}};
        s.modes = {"uncorrected", "squint-corrected", "mc-only"};
        const Table t(run_experiment(s));
        const double unc = t.at(20.0, "rmse_deg", "uncorrected");
        const double mc = t.at(20.0, "rmse_deg", "mc-only");
        v.require(unc >= 2.0 && unc <= 6.0, "uncorrected error " + fmt(unc) + " deg outside [2, 6]");
        v.require(mc * 5.0 <= unc, "MC-only error " + fmt(mc) + " deg not 5x below " + fmt(unc));
        std::string curve;
        double prev = std::numeric_limits<double>::infinity();
        for (double snr : {-10.0, 0.0, 10.0, 20.0})
        {
            const double c = t.at(snr, "rmse_deg", "squint-corrected");
            v.require(c <= prev, "squint-corrected RMSE rises at " + fmt(snr) + " dB");
            prev = c;
            curve += (curve.empty() ? "" : ", ") + fmt(c, 3);
        }
        v.detail += (v.detail.empty() ? "" : "; ") + std::string("uncorrected ") + fmt(unc) + " deg, MC-only " +
                    fmt(mc, 3) + " deg, corrected [" + curve + "] deg";
        return v;
    }

    Verdict selection_ordering()
    {
        Verdict v;
        ExperimentSpec s = spec_for(ExperimentKind::antenna_selection, 2027);
        s.trials = 50;
        s.sweep = Sweep{"eta", {0.0, 0.25, 0.5, 0.75, 1.0}};
        const Table t(run_experiment(s));
        for (double eta : s.sweep->values)
        {
            const double b = t.at(eta, "objective", "bsc"), n = t.at(eta, "objective", "no-bsc"),
                         r = t.at(eta, "objective", "random");
            v.require(at_least(b, n) && at_least(n, r),
                      "eta " + fmt(eta) + ": " + fmt(b) + ", " + fmt(n) + ", " + fmt(r));
            if (eta == 0.5)
                v.detail += (v.detail.empty() ? "" : "; ") + std::string("eta 0.5: ") + fmt(b) + " >= " + fmt(n) +
                            " >= " + fmt(r);
        }
        ExperimentSpec z = s;
        z.trials = 10;
        z.bandwidth_hz = 0.0;
        z.modes = {"bsc", "no-bsc"};
        const Table tz(run_experiment(z));
        for (double eta : z.sweep->values)
            for (const char *metric : {"objective", "se", "radar_gain_db"})
                v.require(tz.at(eta, metric, "bsc") == tz.at(eta, metric, "no-bsc"),
                          std::string("B=0 ") + metric + " differs at eta " + fmt(eta));
        return v;
    }

    Verdict im_behaviour()
    {
        Verdict v;
        ExperimentSpec s = spec_for(ExperimentKind::index_modulation, 2028);
        s.trials = 200;
        s.sweep = Sweep{"bandwidth_hz", {0.0, 7.5e9, 15e9, 22.5e9, 30e9}};
        const Table t(run_experiment(s));
        const auto &bw = s.sweep->values;
        for (const char *kind : {"digital-sd", "hybrid-plain", "hybrid-phase-corrected"})
            for (double b : bw)
                v.require(t.at(b, "se", std::string("im-") + kind) > t.at(b, "se", std::string("conv-") + kind),
                          std::string("IM not above conventional for ") + kind + " at " + fmt(b));
        for (const char *mode :
             {"im-hybrid-plain", "im-hybrid-phase-corrected", "conv-hybrid-plain", "conv-hybrid-phase-corrected"})
            for (std::size_t i = 1; i < bw.size(); ++i)
                v.require(at_least(t.at(bw[i - 1], "se", mode), t.at(bw[i], "se", mode)),
                          std::string(mode) + " increases at " + fmt(bw[i]));
        for (const char *mode : {"im-digital-sd", "conv-digital-sd"})
        {
            double lo = 1e300, hi = -1e300;
            for (double b : bw)
            {
                lo = std::min(lo, t.at(b, "se", mode));
                hi = std::max(hi, t.at(b, "se", mode));
            }
            v.require(hi - lo <= 0.02 * hi, std::string(mode) + " varies by " + fmt(100 * (hi - lo) / hi) + "%");
            if (std::string(mode) == "im-digital-sd")
                v.detail += (v.detail.empty() ? "" : "; ") + std::string("digital spread ") +
                            fmt(100 * (hi - lo) / hi, 2) + "%";
        }
        const int bits = index_bits(s.n_paths, s.n_active);
        v.require(bits == 5, "index bits " + std::to_string(bits));
        v.detail += ", index bits " + std::to_string(bits) + ", IM-plain " + fmt(t.at(0.0, "se", "im-hybrid-plain")) +
                    " -> " + fmt(t.at(30e9, "se", "im-hybrid-plain"));
        return v;
    }

    Verdict properties()
    {
        Verdict v;
        const auto suite = checks::property_suite();
        v.require(checks::all_passed(suite), checks::failures(suite));
        if (v.passed)
            v.detail = std::to_string(suite.size()) + " properties";
        return v;
    }
}

int main()
{
    struct Criterion
    {
        const char *name;
        double budget_s;
        std::function<Verdict()> run;
    };
    const Criterion criteria[] = {
        {"squint magnitudes", 10, squint_magnitudes},
        {"oracle equivalence", 120, oracle_equivalence},
        {"beamforming SE ordering", 600, beamforming_ordering},
        {"channel estimation NMSE contrast", 600, nmse_contrast},
        {"DoA contrast", 600, doa_contrast},
        {"subarray selection ordering", 900, selection_ordering},
        {"index modulation behaviour", 600, im_behaviour},
        {"property suites", 300, properties},
    };

    int failed = 0, index = 0;
    for (const auto &c : criteria)
    {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try
        {
            v = c.run();
        }
        catch (const std::exception &e)
        {
            v.passed = false;
            v.detail = std::string("threw: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        v.require(secs < c.budget_s, "runtime over " + fmt(c.budget_s) + " s");
        failed += v.passed ? 0 : 1;
        std::printf("[%d] %s %s (%.1f s) %s\n", index, v.passed ? "PASS" : "FAIL", c.name, secs, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
