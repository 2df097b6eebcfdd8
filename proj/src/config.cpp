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

#include "squintlab/config.hpp"

#include "squintlab/beamformers.hpp"
#include "squintlab/channel_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace squintlab
{
    namespace
    {
        constexpr std::pair<ExperimentKind, std::string_view> kExperimentNames[] = {
            {ExperimentKind::squint_profile, "squint-profile"},
            {ExperimentKind::beamforming_se, "beamforming-se"},
            {ExperimentKind::chanest_nmse, "chanest-nmse"},
            {ExperimentKind::doa_rmse, "doa-rmse"},
            {ExperimentKind::antenna_selection, "antenna-selection"},
            {ExperimentKind::index_modulation, "index-modulation"},
        };

        [[noreturn]] void config_error(std::string_view key, const std::string &message)
        {
            fail(ErrorCode::invalid_config, "field '" + std::string(key) + "': " + message);
        }

        void check(bool ok, std::string_view key, const std::string &message)
        {
            if (!ok)
                config_error(key, message);
        }

        std::string trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return std::string(s.substr(b, e - b + 1));
        }

        std::vector<std::string> split(std::string_view s, char sep)
        {
            std::vector<std::string> out;
            std::size_t start = 0;
            while (true)
            {
                const auto pos = s.find(sep, start);
                out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.size() - start : pos - start)));
                if (pos == std::string_view::npos)
                    break;
                start = pos + 1;
            }
            return out;
        }

        double parse_real(std::string_view key, const std::string &text)
        {
            std::string t = text;
            if (!t.empty() && t[0] == '+')
                t.erase(0, 1);
            if (t == "inf" || t == "+inf")
                return std::numeric_limits<double>::infinity();
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            check(ec == std::errc() && ptr == t.data() + t.size() && !t.empty(), key,
                  "expected a real number, got '" + text + "'");
            return v;
        }

        long long parse_integer(std::string_view key, const std::string &text)
        {
            long long v = 0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            check(ec == std::errc() && ptr == text.data() + text.size() && !text.empty(), key,
                  "expected an integer, got '" + text + "'");
            return v;
        }

        int parse_int(std::string_view key, const std::string &text)
        {
            const long long v = parse_integer(key, text);
            check(v >= std::numeric_limits<int>::min() && v <= std::numeric_limits<int>::max(), key,
                  "integer out of range");
            return static_cast<int>(v);
        }

        std::uint64_t parse_seed(std::string_view key, const std::string &text)
        {
            std::uint64_t v = 0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            check(ec == std::errc() && ptr == text.data() + text.size() && !text.empty(), key,
                  "expected a nonnegative integer, got '" + text + "'");
            return v;
        }

        bool parse_bool(std::string_view key, const std::string &text)
        {
            if (text == "true" || text == "1" || text == "yes")
                return true;
            if (text == "false" || text == "0" || text == "no")
                return false;
            config_error(key, "expected true or false, got '" + text + "'");
        }

        std::vector<double> parse_real_list(std::string_view key, const std::string &text)
        {
            std::vector<double> out;
            if (trim(text).empty())
                return out;
            for (const auto &item : split(text, ','))
                out.push_back(parse_real(key, item));
            return out;
        }

        std::vector<std::string> parse_text_list(const std::string &text)
        {
            std::vector<std::string> out;
            if (trim(text).empty())
                return out;
            for (auto &item : split(text, ','))
                out.push_back(std::move(item));
            return out;
        }

        std::string format_real(double v)
        {
            if (std::isinf(v))
                return v > 0 ? "inf" : "-inf";
            char buf[64];
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            return std::string(buf, ptr);
        }

        template <typename T>
        std::string join(const std::vector<T> &items, std::function<std::string(const T &)> fmt)
        {
            std::string out;
            for (std::size_t i = 0; i < items.size(); ++i)
            {
                if (i)
                    out += ", ";
                out += fmt(items[i]);
            }
            return out;
        }

        using Type = ConfigEntry::Type;

        struct Field
        {
            std::string_view key;
            Type type;
            std::function<std::string(const ExperimentSpec &)> get;
            std::function<void(ExperimentSpec &, const std::string &)> set;
        };

#define SQL_INT(name)                                                                                            \
    Field{#name, Type::integer, [](const ExperimentSpec &s) { return std::to_string(s.name); },                  \
          [](ExperimentSpec &s, const std::string &v) { s.name = parse_int(#name, v); }}
#define SQL_REAL(name)                                                                                           \
    Field{#name, Type::real, [](const ExperimentSpec &s) { return format_real(s.name); },                        \
          [](ExperimentSpec &s, const std::string &v) { s.name = parse_real(#name, v); }}
#define SQL_BOOL(name)                                                                                           \
    Field{#name, Type::boolean, [](const ExperimentSpec &s) { return std::string(s.name ? "true" : "false"); },  \
          [](ExperimentSpec &s, const std::string &v) { s.name = parse_bool(#name, v); }}
#define SQL_TEXT(name)                                                                                           \
    Field{#name, Type::text, [](const ExperimentSpec &s) { return s.name; },                                     \
          [](ExperimentSpec &s, const std::string &v) { s.name = v; }}
#define SQL_REALS(name)                                                                                          \
    Field{#name, Type::real_list,                                                                                \
          [](const ExperimentSpec &s) { return join<double>(s.name, format_real); },                             \
          [](ExperimentSpec &s, const std::string &v) { s.name = parse_real_list(#name, v); }}

        const std::vector<Field> &fields()
        {
            static const std::vector<Field> table = {
                Field{"experiment", Type::text,
                      [](const ExperimentSpec &s) { return std::string(to_string(s.experiment)); },
                      [](ExperimentSpec &s, const std::string &v) { s.experiment = parse_experiment_kind(v); }},
                SQL_INT(n_antennas),
                SQL_INT(n_rf),
                SQL_INT(n_subcarriers),
                SQL_REAL(carrier_hz),
                SQL_REAL(bandwidth_hz),
                SQL_REAL(spacing_m),
                SQL_REAL(snr_db),
                SQL_REAL(eta),
                SQL_INT(trials),
                Field{"seed", Type::integer, [](const ExperimentSpec &s) { return std::to_string(s.seed); },
                      [](ExperimentSpec &s, const std::string &v) { s.seed = parse_seed("seed", v); }},
                Field{"sweep", Type::text,
                      [](const ExperimentSpec &s) {
                          return s.sweep ? s.sweep->variable + ": " + join<double>(s.sweep->values, format_real)
                                         : std::string();
                      },
                      [](ExperimentSpec &s, const std::string &v) {
                          if (trim(v).empty())
                          {
                              s.sweep.reset();
                              return;
                          }
                          const auto colon = v.find(':');
                          check(colon != std::string::npos, "sweep", "expected 'variable: v1, v2, ...'");
                          Sweep sw;
                          sw.variable = trim(std::string_view(v).substr(0, colon));
                          sw.values = parse_real_list("sweep", v.substr(colon + 1));
                          check(!sw.values.empty(), "sweep", "no sweep values");
                          s.sweep = std::move(sw);
                      }},
                SQL_TEXT(output),
                SQL_INT(n_paths),
                SQL_INT(n_streams),
                SQL_REAL(max_delay_ns),
                SQL_REAL(theta0_deg),
                SQL_REAL(range_m),
                SQL_INT(n_ttd),
                SQL_BOOL(ttd_quantize),
                SQL_REAL(ttd_max_delay_ps),
                SQL_REAL(ttd_resolution_ps),
                SQL_INT(dict_size),
                SQL_INT(pilot_frames),
                SQL_INT(est_dict_size),
                SQL_INT(n_snapshots),
                SQL_REALS(source_deg),
                SQL_INT(mc_band),
                SQL_REAL(mc_coeff_re),
                SQL_REAL(mc_coeff_im),
                SQL_REAL(gpm_gain_std),
                SQL_REAL(gpm_phase_std_deg),
                SQL_REALS(target_deg),
                SQL_INT(subarray_size),
                SQL_TEXT(codebook),
                SQL_INT(codebook_size),
                SQL_INT(n_active),
                SQL_INT(bits_per_symbol),
                Field{"modes", Type::text_list,
                      [](const ExperimentSpec &s) {
                          return join<std::string>(s.modes, [](const std::string &x) { return x; });
                      },
                      [](ExperimentSpec &s, const std::string &v) { s.modes = parse_text_list(v); }},
            };
            return table;
        }

#undef SQL_INT
#undef SQL_REAL
#undef SQL_BOOL
#undef SQL_TEXT
#undef SQL_REALS

        const Field *find_field(std::string_view key)
        {
            for (const auto &f : fields())
                if (f.key == key)
                    return &f;
            return nullptr;
        }

        void validate_point(const ExperimentSpec &s)
        {
            check(s.n_antennas >= 2, "n_antennas", "must be >= 2");
            check(s.n_rf >= 1, "n_rf", "must be >= 1");
            check(s.n_rf <= s.n_antennas, "n_rf", "must be <= n_antennas");
            check(s.n_subcarriers >= 1, "n_subcarriers", "must be >= 1");
            check(std::isfinite(s.carrier_hz) && s.carrier_hz > 0.0, "carrier_hz", "must be finite and > 0");
            check(std::isfinite(s.bandwidth_hz) && s.bandwidth_hz >= 0.0, "bandwidth_hz", "must be finite and >= 0");
            try
            {
                SubcarrierGrid{s.n_subcarriers, s.carrier_hz, s.bandwidth_hz}.validate();
            }
            catch (const Error &e)
            {
                config_error("bandwidth_hz", e.what());
            }
            check(std::isfinite(s.spacing_m) && s.spacing_m >= 0.0, "spacing_m", "must be >= 0 (0 = half wavelength)");
            check(!std::isnan(s.snr_db) && s.snr_db != -std::numeric_limits<double>::infinity(), "snr_db",
                  "must be a number or +inf");
            check(s.eta >= 0.0 && s.eta <= 1.0, "eta", "must be in [0, 1]");
            check(s.trials >= 1, "trials", "must be >= 1");
            check(s.n_paths >= 1, "n_paths", "must be >= 1");
            check(s.n_streams >= 1 && s.n_streams <= s.n_rf, "n_streams", "must be in [1, n_rf]");
            check(std::isfinite(s.max_delay_ns) && s.max_delay_ns >= 0.0, "max_delay_ns", "must be >= 0");
            check(s.max_delay_ns <= 1e9 * PathSet::kDefaultMaxDelay, "max_delay_ns", "exceeds the cyclic-prefix budget");
            check(std::abs(s.theta0_deg) < 90.0, "theta0_deg", "must satisfy |theta0| < 90");
            check(std::isfinite(s.range_m) && s.range_m >= 0.0, "range_m", "must be >= 0 (0 = far field only)");
            check(s.n_ttd >= 1 && s.n_ttd <= s.n_antennas, "n_ttd", "must be in [1, n_antennas]");
            check(s.ttd_max_delay_ps > 0.0, "ttd_max_delay_ps", "must be > 0");
            check(s.ttd_resolution_ps > 0.0, "ttd_resolution_ps", "must be > 0");
            check(s.dict_size >= s.n_rf, "dict_size", "must be >= n_rf");
            check(s.pilot_frames >= 1, "pilot_frames", "must be >= 1");
            check(s.est_dict_size >= s.n_paths, "est_dict_size", "must be >= n_paths");
            check(s.n_snapshots >= 1, "n_snapshots", "must be >= 1");
            check(!s.source_deg.empty(), "source_deg", "needs at least one source");
            check(static_cast<int>(s.source_deg.size()) < s.n_antennas, "source_deg", "needs fewer sources than antennas");
            for (double a : s.source_deg)
                check(std::abs(a) < 90.0, "source_deg", "angles must satisfy |theta| < 90");
            check(s.mc_band >= 0 && s.mc_band < s.n_antennas, "mc_band", "must be in [0, n_antennas)");
            check(std::hypot(s.mc_coeff_re, s.mc_coeff_im) < 1.0, "mc_coeff_re", "|mc_coeff| must be < 1");
            check(s.gpm_gain_std >= 0.0, "gpm_gain_std", "must be >= 0");
            check(s.gpm_phase_std_deg >= 0.0, "gpm_phase_std_deg", "must be >= 0");
            check(!s.target_deg.empty(), "target_deg", "needs at least one target");
            for (double a : s.target_deg)
                check(std::abs(a) < 90.0, "target_deg", "angles must satisfy |theta| < 90");
            check(s.subarray_size >= 1 && s.subarray_size <= s.n_antennas, "subarray_size",
                  "must be in [1, n_antennas]");
            check(s.codebook == "default" || s.codebook == "exhaustive" || s.codebook == "random", "codebook",
                  "must be default, exhaustive or random");
            check(s.codebook != "exhaustive" || s.n_antennas <= 20, "codebook", "exhaustive needs n_antennas <= 20");
            check(s.codebook_size >= 1, "codebook_size", "must be >= 1");
            check(s.n_active >= 1 && s.n_active <= s.n_paths, "n_active", "must be in [1, n_paths]");
            check(s.bits_per_symbol >= 0, "bits_per_symbol", "must be >= 0");

            switch (s.experiment)
            {
            case ExperimentKind::chanest_nmse:
                check(s.n_rf * s.pilot_frames >= s.n_paths, "pilot_frames", "n_rf * pilot_frames must be >= n_paths");
                break;
            case ExperimentKind::antenna_selection:
                check(s.n_streams == 1, "n_streams", "antenna selection uses a single stream");
                break;
            case ExperimentKind::index_modulation:
                check(s.n_streams == 1, "n_streams", "index modulation uses a single stream");
                check(s.n_paths <= 16, "n_paths", "index modulation supports at most 16 paths");
                break;
            case ExperimentKind::squint_profile:
                if (s.range_m > 0.0)
                {
                    const double d = s.spacing_m > 0.0 ? s.spacing_m : kSpeedOfLight / (2.0 * s.carrier_hz);
                    check(s.range_m > d * (s.n_antennas - 1), "range_m", "must exceed the array aperture");
                }
                break;
            default:
                break;
            }
        }

        void apply_sweep_value(ExperimentSpec &s, const std::string &variable, double v)
        {
            if (variable == "snr_db")
                s.snr_db = v;
            else if (variable == "eta")
                s.eta = v;
            else if (variable == "bandwidth_hz")
                s.bandwidth_hz = v;
            else if (variable == "theta0")
                s.theta0_deg = v;
            else
                config_error("sweep", "unknown sweep variable '" + variable + "'");
        }
    }

    std::string_view to_string(ExperimentKind kind)
    {
        for (const auto &[k, name] : kExperimentNames)
            if (k == kind)
                return name;
        return "unknown";
    }

    ExperimentKind parse_experiment_kind(std::string_view name)
    {
        for (const auto &[k, n] : kExperimentNames)
            if (n == name)
                return k;
        fail(ErrorCode::invalid_config, "field 'experiment': unknown experiment '" + std::string(name) + "'");
    }

    std::vector<std::string> sweep_variables(ExperimentKind kind)
    {
        switch (kind)
        {
        case ExperimentKind::squint_profile:
            return {"bandwidth_hz", "theta0"};
        case ExperimentKind::beamforming_se:
        case ExperimentKind::chanest_nmse:
        case ExperimentKind::doa_rmse:
            return {"snr_db", "bandwidth_hz"};
        case ExperimentKind::antenna_selection:
        case ExperimentKind::index_modulation:
            return {"eta", "snr_db", "bandwidth_hz"};
        }
        return {};
    }

    std::vector<std::string> experiment_modes(ExperimentKind kind)
    {
        switch (kind)
        {
        case ExperimentKind::squint_profile:
            return {"far-field", "near-field"};
        case ExperimentKind::beamforming_se:
        {
            std::vector<std::string> out;
            for (auto k : kAllBeamformerKinds)
                out.emplace_back(to_string(k));
            return out;
        }
        case ExperimentKind::chanest_nmse:
            return {"omp-bsc", "omp-plain"};
        case ExperimentKind::doa_rmse:
            return {"uncorrected", "squint-corrected", "mc-only", "mc-uncalibrated", "mc-calibrated"};
        case ExperimentKind::antenna_selection:
            return {"bsc", "no-bsc", "random"};
        case ExperimentKind::index_modulation:
            return {"im-digital-sd",   "im-hybrid-plain",   "im-hybrid-phase-corrected",
                    "conv-digital-sd", "conv-hybrid-plain", "conv-hybrid-phase-corrected"};
        }
        return {};
    }

    ExperimentSpec default_spec(ExperimentKind kind)
    {
        ExperimentSpec s;
        s.experiment = kind;
        switch (kind)
        {
        case ExperimentKind::squint_profile:
            break;
        case ExperimentKind::beamforming_se:
        case ExperimentKind::chanest_nmse:
        case ExperimentKind::doa_rmse:
            s.sweep = Sweep{"snr_db", {-10.0, 0.0, 10.0, 20.0}};
            break;
        case ExperimentKind::antenna_selection:
            s.sweep = Sweep{"eta", {0.0, 0.25, 0.5, 0.75, 1.0}};
            break;
        case ExperimentKind::index_modulation:
            s.n_paths = 8;
            s.eta = 0.5;
            s.sweep = Sweep{"bandwidth_hz", {0.0, 7.5e9, 15e9, 22.5e9, 30e9}};
            break;
        }
        return s;
    }

    void ExperimentSpec::validate() const
    {
        validate_point(*this);
        const auto modes_ok = experiment_modes(experiment);
        for (const auto &m : modes)
            check(std::find(modes_ok.begin(), modes_ok.end(), m) != modes_ok.end(), "modes",
                  "mode '" + m + "' is not reported by " + std::string(to_string(experiment)));
        if (sweep)
        {
            const auto vars = sweep_variables(experiment);
            check(std::find(vars.begin(), vars.end(), sweep->variable) != vars.end(), "sweep",
                  "variable '" + sweep->variable + "' is not valid for " + std::string(to_string(experiment)));
            check(!sweep->values.empty(), "sweep", "no sweep values");
            for (double v : sweep->values)
            {
                ExperimentSpec point = *this;
                point.sweep.reset();
                apply_sweep_value(point, sweep->variable, v);
                validate_point(point);
            }
        }
    }

    ExperimentSpec parse_config(std::string_view text, std::optional<ExperimentKind> experiment_override)
    {
        std::vector<std::pair<std::string, std::string>> pairs;
        std::istringstream in{std::string(text)};
        std::string line;
        int line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            const auto comment = line.find_first_of("#;");
            const std::string body = trim(comment == std::string::npos ? line : line.substr(0, comment));
            if (body.empty() || (body.front() == '[' && body.back() == ']'))
                continue;
            const auto eq = body.find('=');
            if (eq == std::string::npos)
                fail(ErrorCode::invalid_config, "line " + std::to_string(line_no) + ": expected 'key = value'");
            const std::string key = trim(std::string_view(body).substr(0, eq));
            const std::string value = trim(std::string_view(body).substr(eq + 1));
            if (!find_field(key))
                fail(ErrorCode::invalid_config, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
            for (const auto &p : pairs)
                if (p.first == key)
                    fail(ErrorCode::invalid_config,
                         "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
            pairs.emplace_back(key, value);
        }

        std::optional<ExperimentKind> kind = experiment_override;
        for (const auto &[k, v] : pairs)
            if (k == "experiment")
            {
                const auto named = parse_experiment_kind(v);
                if (kind && *kind != named)
                    fail(ErrorCode::invalid_config, "field 'experiment': config names '" + v +
                                                        "' but '" + std::string(to_string(*kind)) + "' was requested");
                kind = named;
            }
        if (!kind)
            fail(ErrorCode::invalid_config, "field 'experiment': missing required key");

        ExperimentSpec spec = default_spec(*kind);
        for (const auto &[k, v] : pairs)
            if (k != "experiment")
                find_field(k)->set(spec, v);
        spec.validate();
        return spec;
    }

    ExperimentSpec load_config(const std::string &path, std::optional<ExperimentKind> experiment_override)
    {
        std::ifstream in(path);
        if (!in)
            fail(ErrorCode::io_failure, "cannot open config file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_config(buf.str(), experiment_override);
    }

    std::string serialize_config(const ExperimentSpec &spec)
    {
        std::string out;
        for (const auto &f : fields())
        {
            const std::string v = f.get(spec);
            // An empty sweep is expressed by omitting the key, so that the
            // experiment default is not re-applied on parse.
            out += std::string(f.key) + " = " + v + "\n";
        }
        return out;
    }

    std::vector<ConfigEntry> config_entries(const ExperimentSpec &spec)
    {
        std::vector<ConfigEntry> out;
        for (const auto &f : fields())
            out.push_back({std::string(f.key), f.get(spec), f.type});
        return out;
    }
}
