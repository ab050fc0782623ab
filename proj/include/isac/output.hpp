// SPDX-License-Identifier: Apache-2.0
//
// isac-polyblock: IRS-assisted sensing and communication simulator
// Copyright (C) 2026 The isac-polyblock authors
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

// Result tables and their CSV / JSON encodings. Numbers are written in the
// shortest form that round-trips, so identical runs give identical bytes.

#ifndef ISAC_OUTPUT_HPP
#define ISAC_OUTPUT_HPP

#include "isac/error.hpp"
#include "isac/protocol_sim.hpp"
#include "isac/time_allocation.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace isac
{
    using Cell = std::variant<std::string, double, std::int64_t>;

    struct Table
    {
        std::vector<std::string> columns;
        std::vector<std::vector<Cell>> rows;

        void add(std::vector<Cell> row)
        {
            detail::require(row.size() == columns.size(), ErrorKind::invalid_input, "Table: row width mismatch");
            rows.push_back(std::move(row));
        }
    };

    enum class Format
    {
        csv,
        json
    };

    inline Format format_from_string(const std::string &s)
    {
        if (s == "csv")
            return Format::csv;
        if (s == "json")
            return Format::json;
        throw Error(ErrorKind::invalid_input, "unknown format '" + s + "'");
    }

    inline std::string format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    }

    inline void write_csv(const Table &t, std::ostream &os)
    {
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            os << (i ? "," : "") << t.columns[i];
        os << '\n';
        for (const auto &row : t.rows)
        {
            for (std::size_t i = 0; i < row.size(); ++i)
            {
                if (i)
                    os << ',';
                std::visit(
                    [&os](const auto &v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, double>)
                            os << format_double(v);
                        else
                            os << v;
                    },
                    row[i]);
            }
            os << '\n';
        }
    }

    // Array of objects keyed by column name; non-finite numbers become null.
    inline void write_json(const Table &t, std::ostream &os)
    {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto &row : t.rows)
        {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < row.size(); ++i)
            {
                std::visit(
                    [&](const auto &v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, double>)
                            obj[t.columns[i]] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json();
                        else
                            obj[t.columns[i]] = v;
                    },
                    row[i]);
            }
            arr.push_back(std::move(obj));
        }
        os << arr.dump(2) << '\n';
    }

    inline void write_table(const Table &t, Format f, std::ostream &os)
    {
        if (f == Format::csv)
            write_csv(t, os);
        else
            write_json(t, os);
    }

    // Writes <dir>/<stem>.csv or .json and returns the path.
    inline std::filesystem::path write_table_file(const Table &t, Format f, const std::filesystem::path &dir,
                                                  const std::string &stem)
    {
        std::filesystem::create_directories(dir);
        const auto path = dir / (stem + (f == Format::csv ? ".csv" : ".json"));
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw Error(ErrorKind::invalid_input, "cannot write '" + path.string() + "'");
        write_table(t, f, out);
        return path;
    }

    inline Table frames_table(const std::vector<FrameResult> &frames)
    {
        Table t;
        t.columns = {"n", "vehicle", "phi_true", "phi_pred", "phi_tracked", "var_tracked", "gamma_s", "rate", "feasible"};
        for (const auto &f : frames)
            for (std::size_t k = 0; k < f.vehicles.size(); ++k)
            {
                const auto &v = f.vehicles[k];
                t.add({std::int64_t{f.n}, static_cast<std::int64_t>(k + 1), v.phi_true, v.phi_pred, v.phi_tracked,
                       v.var_tracked, v.gamma_s, v.rate, std::int64_t{f.feasible ? 1 : 0}});
            }
        return t;
    }

    // One row per frame with the slot fractions.
    inline Table allocation_table(const std::vector<FrameResult> &frames)
    {
        Table t;
        t.columns = {"n", "slot", "eta", "min_rate", "feasible"};
        for (const auto &f : frames)
            for (std::size_t i = 0; i < f.allocation.size(); ++i)
                t.add({std::int64_t{f.n}, static_cast<std::int64_t>(i), f.allocation[i], f.min_rate,
                       std::int64_t{f.feasible ? 1 : 0}});
        return t;
    }

    inline Table sweep_table(const SweepResult &res)
    {
        Table t;
        t.columns = {"scheme", "param", "value", "mean_min_rate", "mean_gamma_s", "frames", "seed"};
        for (const auto &r : res.rows)
            t.add({std::string(to_string(r.scheme)), std::string(to_string(r.param)), r.value, r.mean_min_rate,
                   r.mean_gamma_s, std::int64_t{r.frames}, std::to_string(r.seed)});
        return t;
    }

    inline Table trace_table(const std::vector<TraceRow> &trace)
    {
        Table t;
        t.columns = {"iter", "cbv", "upper_bound", "vertices"};
        for (const auto &r : trace)
            t.add({std::int64_t{r.iter}, r.cbv, r.upper_bound, static_cast<std::int64_t>(r.vertices)});
        return t;
    }
}

#endif
