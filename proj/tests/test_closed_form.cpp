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

#include "isac/closed_form.hpp"
#include "isac/mc_oracle.hpp"
#include "isac/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace isac;

namespace
{
    RadioConstants reference_radio()
    {
        RadioConstants rc;
        rc.sigma_s2 = 1e-8;
        return rc;
    }

    double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}

TEST(HSeries, ReferenceValues)
{
    EXPECT_LT(rel(h_series(pi / 2, 0.01), 3.989422804014326737876), 1e-13);
    EXPECT_LT(rel(h_series(pi / 2, 4.0), 0.3185234483256118615), 1e-10);
    EXPECT_LT(rel(h_series(0.3 * pi, 4.0), 0.4302713572715863119), 1e-10);
    EXPECT_LT(rel(h_series(1.0, 0.5), 0.6827604191691762856), 1e-10);
}

TEST(HSeries, Symmetric)
{
    for (double x : {0.1, 0.4, 0.9, 1.3})
        for (double y : {1e-3, 0.01, 0.3, 2.0, 10.0})
            EXPECT_LT(rel(h_series(x, y), h_series(pi - x, y)), 1e-12) << x << " " << y;
}

TEST(HSeries, Errors)
{
    try
    {
        h_series(1.0, 0.0);
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::degenerate_variance);
    }
    EXPECT_THROW(h_series(0.01, 0.1), Error);
    EXPECT_THROW(h_tilde(pi - 0.01, 0.1), Error);
}

TEST(HTilde, AgreesWithSeriesForSmallVariance)
{
    EXPECT_NEAR(h_tilde(pi / 2, 0.01), 3.9894228040143, 1e-12);
    for (double y : {1e-4, 1e-3, 0.01})
        for (double x = 0.3; x <= pi - 0.3; x += 0.01)
            EXPECT_LT(rel(h_tilde(x, y), h_series(x, y)), 1e-6) << x << " " << y;
    // the dropped exp(-2 x^2 / y) term needs x >~ 0.85 at y = 0.1
    for (double x = 0.85; x <= pi - 0.3; x += 0.01)
        EXPECT_LT(rel(h_tilde(x, 0.1), h_series(x, 0.1)), 1e-6) << x;
    EXPECT_GT(rel(h_tilde(0.3, 0.1), h_series(0.3, 0.1)), 0.1);
}

TEST(HTilde, ScalingLaw)
{
    for (double x : {1.0, pi / 2, 2.0})
        EXPECT_LT(rel(h_tilde(x, 1e-3), h_tilde(x, 4e-3) * 2.0), 1e-12);
}

TEST(EchoSnr, ReferenceGeometry)
{
    const auto rc = reference_radio();
    const ArrayConfig arr;
    const auto pm = make_perf_model(pi / 2, 10.0, 0.01, 1e-3, 2.5e-4, rc, arr);
    EXPECT_DOUBLE_EQ(pm.beta_G, 1e-5);
    EXPECT_LT(rel(echo_snr_closed_form(1.0, pm, rc, arr), 39894.22804014326846), 1e-13);
    EXPECT_EQ(echo_snr_closed_form(0.0, pm, rc, arr), 0.0);
    EXPECT_DOUBLE_EQ(echo_snr_closed_form(0.5, pm, rc, arr), 0.5 * echo_snr_closed_form(1.0, pm, rc, arr));
    EXPECT_LT(rel(pm.A_phi, 2.506628274631000600e-6), 1e-13);
    EXPECT_THROW(echo_snr_closed_form(1.5, pm, rc, arr), Error);
}

TEST(TrackedVariance, Values)
{
    EXPECT_EQ(tracked_variance(0.0, 2.5e-6, 0.01), 0.01);
    EXPECT_LT(rel(tracked_variance(1.0, 2.506628274631000600e-6, 0.01), 2.506000113556913574e-6), 1e-12);
    EXPECT_LT(tracked_variance(1e9, 1e-6, 0.01), 1e-14);
    double prev = 1.0;
    for (double eta = 0.0; eta <= 1.0; eta += 0.01)
    {
        const double v = tracked_variance(eta, 1e-5, 0.01);
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(Rate, ZeroAndMonotone)
{
    const RadioConstants rc;
    const ArrayConfig arr;
    const auto pm = make_perf_model(1.2, 18.0, 0.01, 1e-3, 2.5e-4, rc, arr);
    EXPECT_EQ(rate_closed_form(0.0, 0.3, pm), 0.0);
    Rng rng(7);
    for (int i = 0; i < 1000; ++i)
    {
        const double ek = rng.uniform();
        const double a = rng.uniform();
        const double b = a + (1.0 - a) * rng.uniform();
        EXPECT_LE(rate_closed_form(ek, a, pm), rate_closed_form(ek, b, pm) + 1e-12);
        EXPECT_GE(rate_closed_form(ek, a, pm), 0.0);
    }
    EXPECT_THROW(rate_closed_form(1.2, 0.1, pm), Error);
}

TEST(Rate, LinearInOwnSlot)
{
    const RadioConstants rc;
    const ArrayConfig arr;
    const auto pm = make_perf_model(1.2, 18.0, 0.01, 1e-3, 2.5e-4, rc, arr);
    EXPECT_NEAR(rate_closed_form(0.4, 0.2, pm), 0.4 * spectral_efficiency(0.2, pm), 1e-13);
    EXPECT_NEAR(rate_closed_form(0.4, 0.2, pm), 2.0 * rate_closed_form(0.2, 0.2, pm), 1e-13);
}

TEST(Rate, NearJensenBoundWhenUncertaintySpansManyBeams)
{
    // L * sigma >> 1: no sensing help, sigma = 0.1, L = 100.
    RadioConstants rc;
    const ArrayConfig arr;
    const auto pm = make_perf_model(pi / 2, 10.0, 0.01, 1e-3, 2.5e-4, rc, arr);
    McConfig mc;
    mc.num_samples = 100'000;
    const auto est = mc_expected_rate(pm, rc, arr, 0.25, 0.0, mc);
    EXPECT_LT(rel(rate_closed_form(0.25, 0.0, pm), est.jensen_bound), 0.05);
    EXPECT_GE(est.jensen_bound, est.exact_expectation);
}

TEST(Witness, IncreasingOnUnitInterval)
{
    double prev = 0.0;
    for (int i = 1; i <= 10'000; ++i)
    {
        const double e = i / 10'000.0;
        const double f = monotonicity_witness(e);
        EXPECT_GT(f, prev);
        prev = f;
    }
}
