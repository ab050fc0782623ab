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

// Monte Carlo and quadrature checks for the closed forms in closed_form.hpp.
//
// Nothing in this header calls h_series or h_tilde. The sampled quantities are
// built from steering vectors and phase shifts alone, so agreement with the
// closed forms is evidence rather than tautology.

#ifndef ISAC_MC_ORACLE_HPP
#define ISAC_MC_ORACLE_HPP

#include "isac/channel_geometry.hpp"
#include "isac/closed_form.hpp"
#include "isac/error.hpp"
#include "isac/quadrature.hpp"
#include "isac/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <future>
#include <span>
#include <utility>
#include <vector>

namespace isac
{
    struct McConfig
    {
        std::size_t num_samples = 100'000;
        std::uint64_t seed = 1;
        double confidence_z = 3.0; // reporting only
        std::size_t lanes = 8;     // independent substreams; results do not depend on thread count
    };

    struct RateEstimate
    {
        double exact_expectation = 0.0; // eta_k E[log2(1 + gamma_C)]
        double jensen_bound = 0.0;      // eta_k log2(1 + E[gamma_C])
        double std_error = 0.0;         // of the exact expectation
        double mean_gamma = 0.0;
    };

    namespace detail
    {
        // Any real angle mapped to the (0, pi) representative with the same cosine.
        inline double fold_angle(double phi)
        {
            double a = std::acos(std::clamp(std::cos(phi), -1.0, 1.0));
            if (a <= 0.0)
                a = 1e-12;
            if (a >= pi)
                a = pi - 1e-12;
            return a;
        }

        // Draw `n` samples split across lanes; lane i uses substream i. Samples are
        // concatenated in lane order so the output is independent of scheduling.
        inline std::vector<double> sample_lanes(const McConfig &mc, const std::function<double(Rng &)> &draw)
        {
            require(mc.num_samples >= 1, ErrorKind::invalid_input, "McConfig: num_samples must be >= 1");
            const std::size_t lanes = std::max<std::size_t>(1, std::min(mc.lanes, mc.num_samples));
            const Rng root(mc.seed);
            std::vector<std::future<std::vector<double>>> jobs;
            jobs.reserve(lanes);
            for (std::size_t lane = 0; lane < lanes; ++lane)
            {
                const std::size_t begin = mc.num_samples * lane / lanes;
                const std::size_t end = mc.num_samples * (lane + 1) / lanes;
                jobs.push_back(std::async(std::launch::async, [&draw, root, lane, begin, end]() {
                    Rng rng = root.substream(static_cast<std::uint64_t>(lane));
                    std::vector<double> out(end - begin);
                    for (auto &v : out)
                        v = draw(rng);
                    return out;
                }));
            }
            std::vector<double> all;
            all.reserve(mc.num_samples);
            for (auto &j : jobs)
            {
                auto part = j.get();
                all.insert(all.end(), part.begin(), part.end());
            }
            return all;
        }
    }

    // E[F_L(2 dcos) F_{M_r}(dcos)] over phi_pred ~ N(phi_true, var_proc), with
    // dcos = cos(phi_pred) - cos(phi_true). The IRS and receive-beam gains are the
    // brute-force complex sums from channel_geometry.
    inline MeanEstimate mc_expected_echo_gain(double phi_true, double var_proc, int L, int M_r, const McConfig &mc)
    {
        detail::require_angle(phi_true, "mc_expected_echo_gain: phi must be in (0, pi)");
        detail::require(var_proc >= 0.0, ErrorKind::invalid_input, "mc_expected_echo_gain: variance must be >= 0");
        const double sd = std::sqrt(var_proc);
        const double Ld = static_cast<double>(L);
        auto draw = [=](Rng &rng) {
            const double phi_pred = detail::fold_angle(phi_true + sd * rng.normal());
            return passive_gain_exact(phi_true, phi_pred, L) / Ld * receive_gain_exact(phi_true, phi_pred, M_r);
        };
        const auto samples = detail::sample_lanes(mc, draw);
        return estimate_mean(samples);
    }

    // Monte Carlo echo SNR: eta W P_A beta_G^2 L / sigma_s^2 times the sampled gain.
    inline MeanEstimate mc_echo_snr(double eta_prev, double phi_true, double d, double var_proc, double beta0,
                                    const RadioConstants &rc, const ArrayConfig &arrays, const McConfig &mc)
    {
        const double bG = path_gain(beta0, d);
        const double scale = eta_prev * rc.W * rc.P_A * bG * bG * arrays.num_irs_elements / rc.sigma_s2;
        auto g = mc_expected_echo_gain(phi_true, var_proc, arrays.num_irs_elements, arrays.num_rx_antennas, mc);
        g.mean *= scale;
        g.std_error *= scale;
        return g;
    }

    // Sampled achievable rate with refraction phases designed from a tracked angle
    // phi_tracked ~ N(phi_pred, var_tracked(eta_prev)).
    inline RateEstimate mc_expected_rate(const PerfModel &pm, const RadioConstants &rc, const ArrayConfig &arrays,
                                         double eta_k, double eta_prev, const McConfig &mc, double phi_user = pi / 2)
    {
        detail::require(eta_k >= 0.0 && eta_k <= 1.0 && eta_prev >= 0.0 && eta_prev <= 1.0,
                        ErrorKind::invalid_input, "mc_expected_rate: fractions must be in [0, 1]");
        const double var = tracked_variance(eta_prev, pm.A_phi, pm.var_proc);
        const double sd = std::sqrt(var);
        const double phi_true = pm.phi_pred;
        const int L = arrays.num_irs_elements;
        const double scale = rc.P_A * pm.beta_G * pm.beta_h / rc.sigma_c2;
        auto gammas = detail::sample_lanes(mc, [=](Rng &rng) {
            const double phi_tr = detail::fold_angle(phi_true + sd * rng.normal());
            return scale * refract_gain_exact(phi_true, phi_tr, phi_user, L);
        });
        std::vector<double> logs(gammas.size());
        for (std::size_t i = 0; i < gammas.size(); ++i)
            logs[i] = eta_k * std::log2(1.0 + gammas[i]);
        const auto r = estimate_mean(logs);
        const auto g = estimate_mean(gammas);
        RateEstimate out;
        out.exact_expectation = r.mean;
        out.std_error = r.std_error;
        out.mean_gamma = g.mean;
        out.jensen_bound = eta_k * std::log2(1.0 + g.mean);
        return out;
    }

    // Support of y = 2 cos(phi_pred) - 2 cos(phi): the arccos domain |y/2 + cos phi| <= 1.
    inline std::pair<double, double> pdf_y_support(double phi)
    {
        const double c = std::cos(phi);
        return {-2.0 - 2.0 * c, 2.0 - 2.0 * c};
    }

    // Density of y = 2 cos(phi + w) - 2 cos(phi), w ~ N(0, var_proc), by change of
    // variables through arccos and wrapping over all 2*pi branches.
    inline double pdf_y(double y, double phi, double var_proc, double tol = h_series_default_tol)
    {
        detail::require_angle(phi, "pdf_y: phi must be in (0, pi)");
        if (!(var_proc > 0.0))
            throw Error(ErrorKind::degenerate_variance, "pdf_y: variance must be > 0");
        const double c = 0.5 * y + std::cos(phi);
        if (!std::isfinite(y) || std::abs(c) > 1.0)
            throw Error(ErrorKind::domain_error, "pdf_y: y outside the arccos domain");
        const double root = std::sqrt(1.0 - c * c);
        const double ac = std::acos(c);
        const double two_var = 2.0 * var_proc;
        auto term = [&](double i) {
            const double a = 2.0 * (i + 1.0) * pi - ac - phi;
            const double b = 2.0 * i * pi + ac - phi;
            return std::exp(-a * a / two_var) + std::exp(-b * b / two_var);
        };
        double sum = term(0.0);
        int quiet = 0;
        for (long i = 1; i < 1'000'000 && quiet < 2; ++i)
        {
            const double pair = term(static_cast<double>(i)) + term(-static_cast<double>(i));
            sum += pair;
            quiet = (pair <= tol * sum) ? quiet + 1 : 0;
        }
        if (sum == 0.0)
            return 0.0;
        if (root == 0.0)
            return std::numeric_limits<double>::infinity();
        return sum / (2.0 * std::sqrt(2.0 * pi * var_proc) * root);
    }

    // Integral of pdf_y over [lo, hi] clipped to the open support (the 1/sqrt edge
    // singularity is integrable and carries negligible mass for small variances).
    inline double pdf_y_mass(double lo, double hi, double phi, double var_proc, double abs_tol = 1e-10,
                             std::size_t panels = 200)
    {
        auto [smin, smax] = pdf_y_support(phi);
        const double edge = 1e-9 * (smax - smin);
        lo = std::max(lo, smin + edge);
        hi = std::min(hi, smax - edge);
        if (!(hi > lo))
            return 0.0;
        return adaptive_simpson([&](double y) { return pdf_y(y, phi, var_proc); }, lo, hi, abs_tol, panels);
    }

    // (1/2) * integral_{-1}^{1} g(u) F_L(u) du by adaptive Simpson with at least 20 L panels.
    inline double fejer_smoothed(const std::function<double(double)> &g, int L, double abs_tol = 1e-8)
    {
        detail::require_count(L, "fejer_smoothed: L must be >= 1");
        const std::size_t panels = std::max<std::size_t>(64, 20 * static_cast<std::size_t>(L));
        return 0.5 * adaptive_simpson([&](double u) { return g(u) * fejer_kernel(u, L); }, -1.0, 1.0, abs_tol,
                                      panels);
    }

    // |(1/2) int g F_L - g(0)| for each L; tends to zero for continuous period-2 g.
    inline std::vector<double> fejer_limit_check(const std::function<double(double)> &g, std::span<const int> L_list)
    {
        const double g0 = g(0.0);
        std::vector<double> errors;
        errors.reserve(L_list.size());
        for (int L : L_list)
            errors.push_back(std::abs(fejer_smoothed(g, L) - g0));
        return errors;
    }
}

#endif
