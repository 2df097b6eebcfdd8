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

#include "squintlab/results.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace squintlab
{
    using nlohmann::json;

    std::string format_number(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, ptr);
    }

    void write_csv(const ExperimentResult &result, std::ostream &out)
    {
        out << "sweep,metric,mode,mean,std,trials\n";
        for (const auto &r : result.rows)
            out << format_number(r.sweep) << ',' << r.metric << ',' << r.mode << ',' << format_number(r.mean) << ','
                << format_number(r.std) << ',' << r.trials << '\n';
    }

    static std::ofstream open_for_write(const std::string &path)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            fail(ErrorCode::io_failure, "cannot open '" + path + "' for writing");
        return out;
    }

    static void finish_write(std::ofstream &out, const std::string &path)
    {
        out.flush();
        if (!out)
            fail(ErrorCode::io_failure, "write to '" + path + "' failed");
    }

    void emit_csv(const ExperimentResult &result, const std::string &path)
    {
        auto out = open_for_write(path);
        write_csv(result, out);
        finish_write(out, path);
    }

    static json typed_value(const ConfigEntry &e)
    {
        using Type = ConfigEntry::Type;
        auto number = [](const std::string &text) -> json {
            if (text == "inf" || text == "-inf" || text == "nan")
                return text;
            return std::stod(text);
        };
        switch (e.type)
        {
        case Type::integer:
            return e.key == "seed" ? json(std::stoull(e.value)) : json(std::stoll(e.value));
        case Type::real:
            return number(e.value);
        case Type::boolean:
            return e.value == "true";
        case Type::text:
            return e.value;
        case Type::real_list:
        case Type::text_list:
        {
            json arr = json::array();
            std::stringstream in(e.value);
            std::string item;
            while (std::getline(in, item, ','))
            {
                const auto b = item.find_first_not_of(' ');
                item = b == std::string::npos ? std::string() : item.substr(b);
                if (item.empty())
                    continue;
                arr.push_back(e.type == Type::real_list ? number(item) : json(item));
            }
            return arr;
        }
        }
        return nullptr;
    }

    static json number_or_text(double v)
    {
        if (std::isfinite(v))
            return v;
        return format_number(v);
    }

    std::string to_json(const ExperimentResult &result)
    {
        json spec = json::object();
        for (const auto &e : config_entries(result.spec))
            spec[e.key] = typed_value(e);

        json rows = json::array();
        for (const auto &r : result.rows)
            rows.push_back({{"sweep", number_or_text(r.sweep)},
                            {"metric", r.metric},
                            {"mode", r.mode},
                            {"mean", number_or_text(r.mean)},
                            {"std", number_or_text(r.std)},
                            {"trials", r.trials}});

        json doc;
        doc["metadata"] = {
            {"artifact", "squintlab"},
            {"version", kArtifactVersion},
            {"experiment", std::string(to_string(result.spec.experiment))},
            {"seed", result.spec.seed},
            {"sweep_variable", result.sweep_variable},
            {"spec", spec},
            {"flags", result.flags},
            {"conventions",
             {{"steering", "a_f(theta)[n] = exp(-i 2 pi f n d sin(theta) / c)"},
              {"beampattern", "|a_f(theta)^H w|^2; a matched unit-norm full-array beam peaks at N"},
              {"deviation", "pointed angle minus intended angle"},
              {"radar_gain_db", "relative to the matched full-array gain"},
              {"ttd_per_rf", "rounded up to a divisor of n_antennas when needed (see flags)"},
              {"rmse_mean", "square root of the trial-averaged squared error"},
              {"std", "sample standard deviation over trials"}}},
        };
        doc["rows"] = rows;
        return doc.dump(2) + "\n";
    }

    void emit_json(const ExperimentResult &result, const std::string &path)
    {
        auto out = open_for_write(path);
        out << to_json(result);
        finish_write(out, path);
    }

    static double read_number(const json &v)
    {
        if (v.is_number())
            return v.get<double>();
        const std::string s = v.get<std::string>();
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
        return std::numeric_limits<double>::quiet_NaN();
    }

    std::vector<ResultRow> rows_from_json(const std::string &text)
    {
        std::vector<ResultRow> rows;
        try
        {
            const json doc = json::parse(text);
            for (const auto &r : doc.at("rows"))
            {
                ResultRow row;
                row.sweep = read_number(r.at("sweep"));
                row.metric = r.at("metric").get<std::string>();
                row.mode = r.at("mode").get<std::string>();
                row.mean = read_number(r.at("mean"));
                row.std = read_number(r.at("std"));
                row.trials = r.at("trials").get<int>();
                rows.push_back(std::move(row));
            }
        }
        catch (const json::exception &e)
        {
            fail(ErrorCode::invalid_argument, std::string("result JSON: ") + e.what());
        }
        return rows;
    }
}
