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

// Scenario files: INI sections [array], [radio], [noise], [scenario] and
// [vehicle1] .. [vehicleN]. A power-like key may be given linearly or with a
// _db / _dbm suffix (sensing_noise = 1e-11, sensing_noise_dbm = -80); values are
// converted to linear units on load. Unknown keys are rejected.

#ifndef ISAC_CONFIG_HPP
#define ISAC_CONFIG_HPP

#include "isac/error.hpp"
#include "isac/protocol_sim.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace isac
{
    namespace detail
    {
        using boost::property_tree::ptree;

        [[noreturn]] inline void config_fail(const std::string &what)
        {
            throw Error(ErrorKind::config_error, what);
        }

        inline std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        }

        inline double parse_double(const std::string &raw, const std::string &key)
        {
            const std::string s = trim(raw);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
                config_fail("'" + key + "' is not a finite number: '" + raw + "'");
            return v;
        }

        inline std::vector<double> parse_list(const std::string &raw, const std::string &key)
        {
            std::vector<double> out;
            std::stringstream ss(raw);
            std::string item;
            while (std::getline(ss, item, ','))
                out.push_back(parse_double(item, key));
            return out;
        }

        inline long long parse_integer(const std::string &raw, const std::string &key)
        {
            const std::string s = trim(raw);
            long long v = 0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
                config_fail("'" + key + "' is not an integer: '" + raw + "'");
            return v;
        }

        // Reads one section, tracking which keys were consumed.
        class Section
        {
          public:
            Section(const ptree *node, std::string name) : node_(node), name_(std::move(name)) {}

            std::optional<std::string> raw(const std::string &key)
            {
                if (node_ == nullptr)
                    return std::nullopt;
                const auto child = node_->get_child_optional(key);
                if (!child)
                    return std::nullopt;
                used_.insert(key);
                return child->data();
            }

            double number(const std::string &key, double fallback)
            {
                const auto r = raw(key);
                return r ? parse_double(*r, qualified(key)) : fallback;
            }

            long long integer(const std::string &key, long long fallback)
            {
                const auto r = raw(key);
                return r ? parse_integer(*r, qualified(key)) : fallback;
            }

            // key, key_db (10^(x/10)) or key_dbm (10^(x/10) mW); at most one of them.
            double power(const std::string &key, double fallback)
            {
                const auto lin = raw(key);
                const auto db = raw(key + "_db");
                const auto dbm = raw(key + "_dbm");
                if ((lin ? 1 : 0) + (db ? 1 : 0) + (dbm ? 1 : 0) > 1)
                    config_fail("'" + qualified(key) + "' is given in more than one unit");
                if (lin)
                    return parse_double(*lin, qualified(key));
                if (db)
                    return std::pow(10.0, parse_double(*db, qualified(key + "_db")) / 10.0);
                if (dbm)
                    return 1e-3 * std::pow(10.0, parse_double(*dbm, qualified(key + "_dbm")) / 10.0);
                return fallback;
            }

            void reject_unknown() const
            {
                if (node_ == nullptr)
                    return;
                for (const auto &kv : *node_)
                    if (!used_.count(kv.first))
                        config_fail("unknown key '" + qualified(kv.first) + "'");
            }

          private:
            std::string qualified(const std::string &key) const { return name_ + "." + key; }

            const ptree *node_;
            std::string name_;
            std::set<std::string> used_;
        };

        inline Vec3 parse_vec3(const std::string &raw, const std::string &key)
        {
            const auto v = parse_list(raw, key);
            if (v.size() != 3)
                config_fail("'" + key + "' needs three comma-separated coordinates");
            return {v[0], v[1], v[2]};
        }
    }

    inline ScenarioConfig parse_config(std::istream &in)
    {
        using detail::ptree;
        ptree tree;
        try
        {
            boost::property_tree::ini_parser::read_ini(in, tree);
        }
        catch (const boost::property_tree::ini_parser_error &e)
        {
            detail::config_fail(std::string("parse error: ") + e.message() + " at line " + std::to_string(e.line()));
        }

        std::map<int, const ptree *> vehicle_nodes;
        for (const auto &kv : tree)
        {
            const std::string &name = kv.first;
            if (kv.second.empty() && !kv.second.data().empty())
                detail::config_fail("key '" + name + "' outside any section");
            if (name == "array" || name == "radio" || name == "noise" || name == "scenario")
                continue;
            if (name.rfind("vehicle", 0) == 0 && name.size() > 7)
            {
                const int idx = static_cast<int>(detail::parse_integer(name.substr(7), "section " + name));
                if (idx < 1 || vehicle_nodes.count(idx))
                    detail::config_fail("bad vehicle section '" + name + "'");
                vehicle_nodes[idx] = &kv.second;
                continue;
            }
            detail::config_fail("unknown section '" + name + "'");
        }

        auto node = [&](const char *name) -> const ptree * {
            const auto c = tree.get_child_optional(name);
            return c ? &*c : nullptr;
        };

        ScenarioConfig cfg;

        detail::Section array(node("array"), "array");
        cfg.arrays.num_rx_antennas = static_cast<int>(array.integer("rx_antennas", cfg.arrays.num_rx_antennas));
        cfg.arrays.num_irs_elements = static_cast<int>(array.integer("irs_elements", cfg.arrays.num_irs_elements));
        array.reject_unknown();

        detail::Section radio(node("radio"), "radio");
        cfg.radio.P_A = radio.power("transmit_power", cfg.radio.P_A);
        cfg.radio.W = radio.number("symbols_per_frame", cfg.radio.W);
        cfg.radio.sigma_s2 = radio.power("sensing_noise", cfg.radio.sigma_s2);
        cfg.radio.sigma_c2 = radio.power("comm_noise", cfg.radio.sigma_c2);
        cfg.radio.sigmaR2 = radio.number("estimator_variance", cfg.radio.sigmaR2);
        cfg.beta0 = radio.power("beta0", cfg.beta0);
        radio.reject_unknown();

        detail::Section noise(node("noise"), "noise");
        cfg.noise.var_phi = noise.number("angle_variance", cfg.noise.var_phi);
        cfg.noise.var_d = noise.number("distance_variance", cfg.noise.var_d);
        cfg.noise.var_v = noise.number("speed_variance", cfg.noise.var_v);
        noise.reject_unknown();

        detail::Section sc(node("scenario"), "scenario");
        cfg.gamma_th = sc.power("gamma_th", cfg.gamma_th);
        cfg.epsilon = sc.number("epsilon", cfg.epsilon);
        cfg.max_iters = static_cast<int>(sc.integer("max_iters", cfg.max_iters));
        cfg.dt = sc.number("frame_duration", cfg.dt);
        cfg.n_frames = static_cast<int>(sc.integer("frames", cfg.n_frames));
        if (const auto r = sc.raw("rsu"))
            cfg.rsu = detail::parse_vec3(*r, "scenario.rsu");
        cfg.device_distance = sc.number("device_distance", cfg.device_distance);
        cfg.device_angle = sc.number("device_angle", cfg.device_angle);
        const long long seed = sc.integer("seed", static_cast<long long>(cfg.seed));
        if (seed < 0)
            detail::config_fail("'scenario.seed' must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(seed);
        if (const auto r = sc.raw("scheme"))
        {
            try
            {
                cfg.scheme = scheme_from_string(detail::trim(*r));
            }
            catch (const Error &e)
            {
                detail::config_fail(e.what());
            }
        }
        cfg.random_phase_draws = static_cast<int>(sc.integer("random_phase_draws", cfg.random_phase_draws));
        if (const auto r = sc.raw("fixed_eta"))
            cfg.fixed_eta = detail::parse_list(*r, "scenario.fixed_eta");
        sc.reject_unknown();

        if (!vehicle_nodes.empty())
        {
            cfg.vehicles.clear();
            int expect = 1;
            for (const auto &[idx, vnode] : vehicle_nodes)
            {
                if (idx != expect++)
                    detail::config_fail("vehicle sections must be numbered 1..N without gaps");
                const std::string name = "vehicle" + std::to_string(idx);
                detail::Section vs(vnode, name);
                VehicleSpec spec;
                const auto pos = vs.raw("position");
                if (!pos)
                    detail::config_fail("'" + name + ".position' is required");
                spec.position = detail::parse_vec3(*pos, name + ".position");
                spec.speed = vs.number("speed", spec.speed);
                vs.reject_unknown();
                cfg.vehicles.push_back(spec);
            }
        }

        try
        {
            cfg.validate();
        }
        catch (const Error &e)
        {
            detail::config_fail(e.what());
        }
        return cfg;
    }

    inline ScenarioConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            detail::config_fail("cannot open '" + path + "'");
        return parse_config(in);
    }
}

#endif
