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

#include "isac/protocol_sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace isac;

namespace
{
    ScenarioConfig short_run(Scheme s, int frames = 10)
    {
        ScenarioConfig cfg;
        cfg.scheme = s;
        cfg.n_frames = frames;
        cfg.random_phase_draws = 200;
        return cfg;
    }
}

TEST(Bearing, Examples)
{
    EXPECT_NEAR(compute_true_bearing({0, 0, 10}, {0, -20, 0}), pi / 2, 1e-15);
    const double b = compute_true_bearing({0, 0, 10}, {-50, -20, 0});
    EXPECT_NEAR(b, 0.420534335283965, 1e-13);
    // independent vector-angle check against the array axis (-x)
    const double dx = -50.0, dy = -20.0, dz = -10.0;
    EXPECT_NEAR(b, std::atan2(std::hypot(dy, dz), -dx), 1e-14);
    EXPECT_GT(compute_true_bearing({0, 0, 10}, {1e6, -20, 0}), pi - 1e-4);
    EXPECT_THROW(compute_true_bearing({0, 0, 0}, {0, 0, 0}), Error);
}

TEST(Truth, MovesAlongX)
{
    ScenarioConfig cfg;
    const auto s0 = true_state(cfg, 0, 0);
    const auto s10 = true_state(cfg, 0, 10);
    EXPECT_NEAR(s0.d, distance(cfg.rsu, cfg.vehicles[0].position), 1e-12);
    EXPECT_NEAR(s10.d, distance(cfg.rsu, {-35.0, -20.0, 0.0}), 1e-12);
    EXPECT_GT(s10.phi, s0.phi);
    // bearing stays inside the guard band over the default trajectory
    for (std::size_t k = 0; k < cfg.K(); ++k)
        for (int n = 0; n <= cfg.n_frames; ++n)
        {
            const double phi = true_state(cfg, k, n).phi;
            EXPECT_GT(phi, 0.05);
            EXPECT_LT(phi, pi - 0.05);
        }
}

TEST(Scheme, Names)
{
    for (Scheme s : all_schemes)
        EXPECT_EQ(scheme_from_string(to_string(s)), s);
    EXPECT_THROW(scheme_from_string("bogus"), Error);
    EXPECT_EQ(sweep_param_from_string("P_A"), SweepParam::P_A);
}

TEST(Config, Validation)
{
    ScenarioConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.vehicles.clear();
    EXPECT_THROW(cfg.validate(), Error);
    cfg = ScenarioConfig{};
    cfg.dt = 0.0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = ScenarioConfig{};
    cfg.fixed_eta = std::vector<double>{0.5, 0.5};
    EXPECT_THROW(cfg.validate(), Error);
}

TEST(Trajectory, ProposedInvariants)
{
    const auto cfg = short_run(Scheme::proposed, 20);
    const auto frames = run_trajectory(cfg);
    ASSERT_EQ(frames.size(), 20u);
    for (const auto &f : frames)
    {
        ASSERT_TRUE(f.feasible);
        EXPECT_NEAR(f.allocation.sum(), 1.0, 1e-9);
        double worst = 1e300;
        for (const auto &v : f.vehicles)
        {
            EXPECT_LE(v.var_tracked, cfg.noise.var_phi);
            EXPECT_GE(v.gamma_s, cfg.gamma_th * (1 - 1e-9));
            worst = std::min(worst, v.rate);
        }
        EXPECT_EQ(f.min_rate, worst);
    }
}

TEST(Trajectory, Deterministic)
{
    for (Scheme s : {Scheme::proposed, Scheme::random_phase})
    {
        const auto cfg = short_run(s, 5);
        const auto a = run_trajectory(cfg);
        const auto b = run_trajectory(cfg);
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            EXPECT_EQ(bits_of(a[i].min_rate), bits_of(b[i].min_rate));
            for (std::size_t k = 0; k < a[i].vehicles.size(); ++k)
                EXPECT_EQ(bits_of(a[i].vehicles[k].phi_tracked), bits_of(b[i].vehicles[k].phi_tracked));
        }
    }
}

TEST(Trajectory, StationaryVehiclesRepeat)
{
    auto cfg = short_run(Scheme::no_s_assist, 4);
    for (auto &v : cfg.vehicles)
        v.speed = 0.0;
    cfg.noise = {0.01, 0.0, 0.0};
    // no_s_assist rates do not depend on the measurement, and belief bearings
    // only move through the tracked estimate.
    const auto frames = run_trajectory(cfg);
    for (std::size_t i = 1; i < frames.size(); ++i)
        for (std::size_t k = 0; k < cfg.K(); ++k)
            EXPECT_EQ(frames[i].vehicles[k].phi_true, frames[0].vehicles[k].phi_true);

    // with a perfect estimator the belief stays on the truth and every frame matches
    cfg.scheme = Scheme::proposed;
    cfg.radio.sigmaR2 = 1e-300;
    const auto same = run_trajectory(cfg);
    for (std::size_t i = 1; i < same.size(); ++i)
    {
        EXPECT_NEAR(same[i].min_rate, same[0].min_rate, 1e-12);
        for (std::size_t j = 0; j < same[0].allocation.size(); ++j)
            EXPECT_NEAR(same[i].allocation[j], same[0].allocation[j], 1e-12);
    }
}

TEST(Trajectory, ProposedBeatsNoSensingAssistEveryFrame)
{
    const auto a = run_trajectory(short_run(Scheme::proposed, 67));
    const auto b = run_trajectory(short_run(Scheme::no_s_assist, 67));
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_GE(a[i].min_rate, b[i].min_rate) << "frame " << a[i].n;
}

TEST(Trajectory, SchemeLayouts)
{
    const auto td = run_trajectory(short_run(Scheme::no_c_assist, 2));
    EXPECT_EQ(td[0].allocation.size(), 6u);
    EXPECT_NEAR(td[0].allocation.sum(), 1.0, 1e-9);
    const auto rp = run_trajectory(short_run(Scheme::random_phase, 2));
    EXPECT_EQ(rp[0].allocation.size(), 4u);
}

TEST(Trajectory, InfeasibleFramesReportZero)
{
    auto cfg = short_run(Scheme::proposed, 3);
    cfg.gamma_th = 1e9;
    const auto frames = run_trajectory(cfg);
    for (const auto &f : frames)
    {
        EXPECT_FALSE(f.feasible);
        EXPECT_EQ(f.min_rate, 0.0);
        EXPECT_NEAR(f.allocation.sum(), 1.0, 1e-12);
        EXPECT_EQ(f.allocation[3], 0.0);
        // equalizing point: every echo SNR is the same
        for (const auto &v : f.vehicles)
            EXPECT_NEAR(v.gamma_s, f.vehicles[0].gamma_s, 1e-9 * f.vehicles[0].gamma_s);
    }
}

TEST(Trajectory, SingleVehicleWithoutThreshold)
{
    auto cfg = short_run(Scheme::proposed, 3);
    cfg.vehicles.resize(1);
    cfg.gamma_th = 0.0;
    const auto frames = run_trajectory(cfg);
    for (const auto &f : frames)
    {
        ASSERT_TRUE(f.feasible);
        // a short sensing slot buys more rate than it costs
        EXPECT_GT(f.allocation[0], 0.0);
        EXPECT_GT(f.allocation[1], 0.5);
        EXPECT_GT(f.min_rate, 0.0);
    }
}

TEST(Trajectory, FixedAllocation)
{
    auto cfg = short_run(Scheme::proposed, 3);
    cfg.fixed_eta = std::vector<double>{0.1, 0.3, 0.3, 0.3};
    const auto frames = run_trajectory(cfg);
    for (const auto &f : frames)
        EXPECT_EQ(f.allocation.eta, *cfg.fixed_eta);
    cfg.fixed_eta = std::vector<double>{0.0, 0.4, 0.3, 0.3};
    for (const auto &f : run_trajectory(cfg))
    {
        EXPECT_FALSE(f.feasible);
        EXPECT_EQ(f.min_rate, 0.0);
    }
}

TEST(Trajectory, StableAcrossSeeds)
{
    std::vector<double> means;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        auto cfg = short_run(Scheme::proposed, 67);
        cfg.seed = seed;
        means.push_back(summarize(run_trajectory(cfg)).mean_min_rate);
    }
    const double avg = std::accumulate(means.begin(), means.end(), 0.0) / means.size();
    for (double m : means)
        EXPECT_LT(std::abs(m - avg) / avg, 0.02);
}

TEST(Sweep, RowsAndTrends)
{
    auto cfg = short_run(Scheme::proposed, 4);
    const std::vector<double> values{1e2, 1e3, 1e4};
    const auto res = sweep(cfg, SweepParam::gamma_th, values, {Scheme::proposed, Scheme::no_sc_assist}, 2);
    ASSERT_EQ(res.rows.size(), 6u);
    EXPECT_EQ(res.rows[0].scheme, Scheme::proposed);
    EXPECT_EQ(res.rows[3].scheme, Scheme::no_sc_assist);
    EXPECT_EQ(res.rows[4].value, 1e3);
    EXPECT_TRUE(res.trend_violations.empty());
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_GE(res.rows[i].mean_min_rate, res.rows[i + 3].mean_min_rate);

    // thread count does not change the numbers
    const auto one = sweep(cfg, SweepParam::gamma_th, values, {Scheme::proposed, Scheme::no_sc_assist}, 1);
    for (std::size_t i = 0; i < 6; ++i)
        EXPECT_EQ(bits_of(one.rows[i].mean_min_rate), bits_of(res.rows[i].mean_min_rate));

    EXPECT_TRUE(sweep(cfg, SweepParam::P_A, values, {}).rows.empty());
    EXPECT_THROW(sweep(cfg, SweepParam::P_A, {0.2, 0.1}, {Scheme::proposed}), Error);
}

TEST(Sweep, TrendCheckFlagsViolations)
{
    SweepResult r;
    SweepRow a;
    a.param = SweepParam::P_A;
    a.value = 0.1;
    a.mean_min_rate = 2.0;
    SweepRow b = a;
    b.value = 0.2;
    b.mean_min_rate = 1.0;
    r.rows = {a, b};
    EXPECT_EQ(check_sweep_trends(r).size(), 1u);
    r.rows[1].mean_min_rate = 2.0;
    EXPECT_TRUE(check_sweep_trends(r).empty());
}
