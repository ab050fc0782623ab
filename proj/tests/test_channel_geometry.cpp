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

#include "isac/channel_geometry.hpp"
#include "isac/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

using namespace isac;

namespace
{
    std::complex<double> cis(double a) { return std::polar(1.0, a); }

    // distance on the circle
    double phase_gap(double a, double b)
    {
        const double d = std::abs(std::remainder(a - b, two_pi));
        return d;
    }

    void expect_close(const std::complex<double> &a, const std::complex<double> &b, double tol = 1e-14)
    {
        EXPECT_NEAR(a.real(), b.real(), tol);
        EXPECT_NEAR(a.imag(), b.imag(), tol);
    }
}

TEST(Steering, BroadsideIsAllOnes)
{
    const auto a = steering_irs(pi / 2, 4);
    ASSERT_EQ(a.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i)
        expect_close(a[i], 1.0);
    const auto b = steering_rsu(pi / 2, 3);
    for (std::size_t i = 0; i < 3; ++i)
        expect_close(b[i], 1.0);
}

TEST(Steering, SignConvention)
{
    const auto a = steering_irs(pi / 3, 2);
    expect_close(a[0], 1.0);
    expect_close(a[1], cis(pi * 0.5));
    const auto b = steering_rsu(pi / 3, 2);
    expect_close(b[1], cis(-pi * 0.5));
}

TEST(Steering, UnitModulusAgainstHandRolled)
{
    for (double phi : {0.1, 0.7, 1.3, 2.2, 3.0})
    {
        const auto a = steering_irs(phi, 16);
        for (int l = 0; l < 16; ++l)
        {
            EXPECT_NEAR(std::abs(a[l]), 1.0, 1e-15);
            const double ang = pi * l * std::cos(phi);
            expect_close(a[l], {std::cos(ang), std::sin(ang)}, 1e-12);
        }
    }
}

TEST(Steering, RejectsBadAngles)
{
    EXPECT_THROW(steering_irs(0.0, 4), Error);
    EXPECT_THROW(steering_irs(pi, 4), Error);
    EXPECT_THROW(steering_rsu(std::nan(""), 4), Error);
    EXPECT_THROW(steering_rsu(1.0, 0), Error);
}

TEST(Fejer, LimitsAndZeros)
{
    EXPECT_DOUBLE_EQ(fejer_kernel(0.0, 100), 100.0);
    EXPECT_NEAR(fejer_kernel(2.0, 7), 7.0, 1e-9);
    EXPECT_NEAR(fejer_kernel(0.5, 4), 0.0, 1e-15);
    EXPECT_NEAR(fejer_kernel(1e-12, 50), 50.0, 1e-6);
}

TEST(Fejer, BoundedAndPeriodic)
{
    Rng rng(3);
    for (int i = 0; i < 2000; ++i)
    {
        const double x = -4.0 + 8.0 * rng.uniform();
        const int L = 1 + static_cast<int>(rng.uniform() * 64);
        const double f = fejer_kernel(x, L);
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, L * (1 + 1e-12));
        EXPECT_NEAR(f, fejer_kernel(x + 2.0, L), 1e-8 * L);
        EXPECT_NEAR(f, fejer_kernel(-x, L), 1e-9 * L);
    }
}

TEST(PathGain, Values)
{
    EXPECT_DOUBLE_EQ(path_gain(1e-3, 10.0), 1e-5);
    EXPECT_DOUBLE_EQ(path_gain(1e-3, 1.0), 1e-3);
    EXPECT_NEAR(path_gain(1e-3, 22.36), 2.000121607393729682e-6, 1e-20);
    EXPECT_THROW(path_gain(1e-3, 0.0), Error);
    EXPECT_THROW(path_gain(-1.0, 3.0), Error);
}

TEST(PhaseShifts, Reflect)
{
    for (double t : reflect_phase_shifts(pi / 2, 3))
        EXPECT_LT(phase_gap(t, 0.0), 1e-12);
    const auto t = reflect_phase_shifts(pi / 3, 2);
    EXPECT_LT(phase_gap(t[0], 0.0), 1e-12);
    EXPECT_LT(phase_gap(t[1], pi), 1e-12);
    const auto one = reflect_phase_shifts(1.1, 1, 7.5);
    EXPECT_LT(phase_gap(one[0], 7.5), 1e-12);
}

TEST(PhaseShifts, Refract)
{
    for (double t : refract_phase_shifts(1.2, 1.2, 5, 0.3))
        EXPECT_LT(phase_gap(t, 0.3), 1e-12);
    auto t = refract_phase_shifts(pi / 2, pi / 3, 2);
    EXPECT_LT(phase_gap(t[1], 1.5 * pi), 1e-12);
    t = refract_phase_shifts(pi / 3, pi / 2, 2);
    EXPECT_LT(phase_gap(t[1], 0.5 * pi), 1e-12);
}

TEST(PhaseShifts, WrappedIntoRange)
{
    Rng rng(5);
    for (int i = 0; i < 200; ++i)
    {
        const double phi = 0.01 + 3.1 * rng.uniform();
        for (double t : reflect_phase_shifts(phi, 33, 100.0 * (rng.uniform() - 0.5)))
        {
            EXPECT_GE(t, 0.0);
            EXPECT_LT(t, two_pi);
        }
    }
}

TEST(Gains, CoherentAlignment)
{
    EXPECT_NEAR(passive_gain_exact(1.0, 1.0, 100), 1e4, 1e-7);
    EXPECT_NEAR(receive_gain_exact(1.0, 1.0, 10), 10.0, 1e-11);
    EXPECT_NEAR(refract_gain_exact(0.9, 0.9, pi / 2, 64), 64.0 * 64.0, 1e-8);
}

TEST(Gains, FejerNull)
{
    // 2 dcos = 2/L puts the reflection on the first null.
    const int L = 20;
    const double phi_design = pi / 2;
    const double phi_true = std::acos(std::cos(phi_design) - 1.0 / L);
    EXPECT_NEAR(passive_gain_exact(phi_true, phi_design, L), 0.0, 1e-9);
}

TEST(Gains, MatchKernels)
{
    Rng rng(11);
    for (int i = 0; i < 200; ++i)
    {
        const double pt = 0.05 + 3.0 * rng.uniform();
        const double pd = 0.05 + 3.0 * rng.uniform();
        const double pu = 0.05 + 3.0 * rng.uniform();
        const double dc = std::cos(pd) - std::cos(pt);
        const double want_r = 16.0 * fejer_kernel(2.0 * dc, 16);
        EXPECT_NEAR(passive_gain_exact(pt, pd, 16), want_r, 1e-10 * 256.0);
        EXPECT_NEAR(receive_gain_exact(pt, pd, 10), fejer_kernel(dc, 10), 1e-10 * 10.0);
        EXPECT_NEAR(refract_gain_exact(pt, pd, pu, 16), 16.0 * fejer_kernel(dc, 16), 1e-10 * 256.0);
    }
}

TEST(Gains, ReflectPhaseOffsetDoesNotMatter)
{
    const auto a = reflect_phase_shifts(1.3, 32, 0.0);
    const auto b = reflect_phase_shifts(1.3, 32, 2.1);
    EXPECT_NEAR(reflect_gain(1.25, a), reflect_gain(1.25, b), 1e-9);
}

TEST(WrapPhase, Range)
{
    EXPECT_DOUBLE_EQ(wrap_phase(0.0), 0.0);
    EXPECT_NEAR(wrap_phase(-pi), pi, 1e-15);
    EXPECT_NEAR(wrap_phase(5 * two_pi + 1.0), 1.0, 1e-12);
    EXPECT_LT(wrap_phase(two_pi), two_pi);
}
