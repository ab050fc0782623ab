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

// Command-line front end: validate-prop1, feasibility, optimize, simulate, sweep.
//
// Exit codes: 0 success, 1 infeasible scenario, 2 configuration or usage error,
// 3 any other failure.

#include "isac/isac.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace
{
    using namespace isac;

    constexpr int exit_ok = 0;
    constexpr int exit_infeasible = 1;
    constexpr int exit_config = 2;
    constexpr int exit_other = 3;

    struct CommonOptions
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::string out = ".";
        std::string format = "csv";
    };

    void add_common(CLI::App *cmd, CommonOptions &o)
    {
        cmd->add_option("--config", o.config, "Scenario file (INI); built-in defaults when omitted");
        cmd->add_option("--seed", o.seed, "Override the scenario seed");
        cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
        cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    }

    ScenarioConfig load(const CommonOptions &o)
    {
        ScenarioConfig cfg = o.config.empty() ? ScenarioConfig{} : load_config(o.config);
        if (o.seed)
            cfg.seed = *o.seed;
        return cfg;
    }

    std::vector<std::string> split_list(const std::string &s)
    {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty())
                out.push_back(item);
        return out;
    }

    std::vector<double> parse_values(const std::string &s, const char *flag)
    {
        std::vector<double> out;
        for (const auto &item : split_list(s))
        {
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(item, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (used != item.size())
                throw Error(ErrorKind::config_error, std::string(flag) + ": not a number: '" + item + "'");
            out.push_back(v);
        }
        return out;
    }

    std::vector<Scheme> parse_schemes(const std::string &s)
    {
        std::vector<Scheme> out;
        for (const auto &item : split_list(s))
            out.push_back(scheme_from_string(item));
        return out;
    }

    void note_written(const std::filesystem::path &p) { std::cerr << "wrote " << p.string() << '\n'; }

    int cmd_validate_prop1(const CommonOptions &o, std::size_t samples, double dist)
    {
        const ScenarioConfig cfg = load(o);
        Table t;
        t.columns = {"L", "phi_over_pi", "closed_form", "mc_mean", "mc_std_error", "rel_error"};
        for (int L : {50, 100})
            for (double frac : {0.3, 0.5, 0.7})
            {
                ArrayConfig arrays = cfg.arrays;
                arrays.num_irs_elements = L;
                const double phi = frac * pi;
                const auto pm = make_perf_model(phi, dist, cfg.noise.var_phi, cfg.beta0, cfg.beta_h(), cfg.radio, arrays);
                const double closed = echo_snr_closed_form(1.0, pm, cfg.radio, arrays);
                McConfig mc;
                mc.num_samples = samples;
                mc.seed = Rng(cfg.seed).substream({static_cast<std::uint64_t>(L), bits_of(frac)}).seed();
                const auto est = mc_echo_snr(1.0, phi, dist, cfg.noise.var_phi, cfg.beta0, cfg.radio, arrays, mc);
                t.add({std::int64_t{L}, frac, closed, est.mean, est.std_error, (closed - est.mean) / est.mean});
            }
        write_csv(t, std::cout);
        note_written(write_table_file(t, format_from_string(o.format), o.out, "prop1"));
        return exit_ok;
    }

    int cmd_feasibility(const CommonOptions &o)
    {
        const ScenarioConfig cfg = load(o);
        const auto p = first_frame_problem(cfg);
        const auto f = feasibility_max_snr(p);
        std::cout << "max_gamma=" << format_double(f.max_gamma) << '\n'
                  << "gamma_th=" << format_double(p.gamma_th) << '\n'
                  << "verdict=" << (f.feasible ? "feasible" : "infeasible") << '\n';
        return f.feasible ? exit_ok : exit_infeasible;
    }

    int cmd_optimize(const CommonOptions &o)
    {
        const ScenarioConfig cfg = load(o);
        const auto p = first_frame_problem(cfg);
        PolyblockOptions opts;
        opts.epsilon = cfg.epsilon;
        opts.max_iters = cfg.max_iters;
        const auto res = polyblock_solve(p, opts);
        std::cout << "value=" << format_double(res.value) << '\n'
                  << "upper_bound=" << format_double(res.upper_bound) << '\n'
                  << "iterations=" << res.iterations << '\n'
                  << "converged=" << (res.converged ? 1 : 0) << '\n'
                  << "eta=";
        for (std::size_t i = 0; i < res.eta.size(); ++i)
            std::cout << (i ? "," : "") << format_double(res.eta[i]);
        std::cout << '\n';
        note_written(write_table_file(trace_table(res.trace), format_from_string(o.format), o.out, "trace"));
        return exit_ok;
    }

    int cmd_simulate(const CommonOptions &o, const std::string &scheme, const std::string &fixed_eta)
    {
        ScenarioConfig cfg = load(o);
        if (!scheme.empty())
            cfg.scheme = scheme_from_string(scheme);
        if (!fixed_eta.empty())
            cfg.fixed_eta = parse_values(fixed_eta, "--fixed-eta");
        const auto frames = run_trajectory(cfg);
        const Format fmt = format_from_string(o.format);
        note_written(write_table_file(frames_table(frames), fmt, o.out, "frames"));
        note_written(write_table_file(allocation_table(frames), fmt, o.out, "allocation"));
        const auto row = summarize(frames);
        std::cout << "scheme=" << to_string(cfg.scheme) << '\n'
                  << "frames=" << row.frames << '\n'
                  << "feasible_frames=" << row.feasible_frames << '\n'
                  << "mean_min_rate=" << format_double(row.mean_min_rate) << '\n'
                  << "mean_gamma_s=" << format_double(row.mean_gamma_s) << '\n';
        return row.feasible_frames == row.frames ? exit_ok : exit_infeasible;
    }

    int cmd_sweep(const CommonOptions &o, const std::string &param, const std::string &values,
                  const std::optional<std::string> &schemes, const std::string &fixed_eta)
    {
        ScenarioConfig cfg = load(o);
        if (!fixed_eta.empty())
            cfg.fixed_eta = parse_values(fixed_eta, "--fixed-eta");
        std::vector<Scheme> list(all_schemes.begin(), all_schemes.end());
        if (schemes)
            list = parse_schemes(*schemes);
        const auto res = sweep(cfg, sweep_param_from_string(param), parse_values(values, "--values"), list);
        for (const auto &v : res.trend_violations)
            std::cerr << "warning: " << v << '\n';
        const auto t = sweep_table(res);
        write_csv(t, std::cout);
        note_written(write_table_file(t, format_from_string(o.format), o.out, "sweep"));
        return exit_ok;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"IRS-assisted sensing and communication: closed forms, polyblock allocation, trajectory simulation"};
    app.require_subcommand(1);

    CommonOptions common;

    auto *prop1 = app.add_subcommand("validate-prop1", "Monte Carlo check of the closed-form echo SNR");
    add_common(prop1, common);
    std::size_t samples = 100'000;
    double dist = 10.0;
    prop1->add_option("--samples", samples, "Monte Carlo samples per point")->capture_default_str();
    prop1->add_option("--distance", dist, "RSU-IRS distance in m")->capture_default_str();

    auto *feas = app.add_subcommand("feasibility", "Largest feasible sensing threshold for the first frame");
    add_common(feas, common);

    auto *opt = app.add_subcommand("optimize", "Single-frame polyblock allocation with trace");
    add_common(opt, common);

    std::string scheme;
    std::string fixed_eta;
    auto *sim = app.add_subcommand("simulate", "Run one scheme over the trajectory");
    add_common(sim, common);
    sim->add_option("--scheme", scheme, "proposed, no_s_assist, no_c_assist, no_sc_assist or random_phase");
    sim->add_option("--fixed-eta", fixed_eta, "Comma-separated slot fractions used instead of the optimizer");

    std::string param;
    std::string values;
    std::optional<std::string> schemes;
    auto *sw = app.add_subcommand("sweep", "Sweep gamma_th or P_A across schemes");
    add_common(sw, common);
    sw->add_option("--param", param, "gamma_th or P_A")->required()->check(CLI::IsMember({"gamma_th", "P_A"}));
    sw->add_option("--values", values, "Comma-separated ascending values")->required();
    sw->add_option("--scheme", schemes, "Comma-separated schemes (default: all)");
    sw->add_option("--fixed-eta", fixed_eta, "Comma-separated slot fractions used instead of the optimizer");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try
    {
        if (*prop1)
            return cmd_validate_prop1(common, samples, dist);
        if (*feas)
            return cmd_feasibility(common);
        if (*opt)
            return cmd_optimize(common);
        if (*sim)
            return cmd_simulate(common, scheme, fixed_eta);
        if (*sw)
            return cmd_sweep(common, param, values, schemes, fixed_eta);
    }
    catch (const InfeasibleError &e)
    {
        std::cerr << "isac: " << e.what() << '\n';
        return exit_infeasible;
    }
    catch (const Error &e)
    {
        std::cerr << "isac: " << e.what() << '\n';
        return (e.kind() == ErrorKind::config_error || e.kind() == ErrorKind::invalid_input) ? exit_config : exit_other;
    }
    catch (const std::exception &e)
    {
        std::cerr << "isac: " << e.what() << '\n';
        return exit_other;
    }
    return exit_other;
}
