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

// Closed-form echo SNR, tracking variance and achievable rate under Gaussian
// angle uncertainty.
//
// The expected product of Fejer kernels over the prediction error collapses, for
// large arrays, to the wrapped-Gaussian series
//
//   h(x, y) = (2 pi y sin^2 x)^{-1/2} sum_i [ exp(-2 (i pi)^2 / y) + exp(-2 ((i+1) pi - x)^2 / y) ],
//
// whose i = 0 term alone gives h_tilde. Everything downstream (SNR, the
// per-slot variance coefficient A_phi, the rate approximation) is built on these.

#ifndef ISAC_CLOSED_FORM_HPP
#define ISAC_CLOSED_FORM_HPP

#include "isac/channel_geometry.hpp"
#include "isac/error.hpp"

#include <cmath>

namespace isac
{
    // Angles closer than this to 0 or pi are rejected by the h functions.
    inline constexpr double angle_guard = 0.05;

    inline constexpr double h_series_default_tol = 1e-14;

    struct RadioConstants
    {
        double P_A = 0.1;         // transmit power, W
        double W = 1e4;           // symbols per frame (matched-filter gain at eta = 1)
        double sigma_s2 = 1e-11;  // sensing noise power, W
        double sigma_c2 = 1e-11;  // communication noise power, W
        double sigmaR2 = 0.1;     // angle estimator variance parameter

        void validate() const
        {
            detail::require(P_A > 0.0 && W > 0.0 && sigma_s2 > 0.0 && sigma_c2 > 0.0 && sigmaR2 > 0.0,
                            ErrorKind::invalid_input, "RadioConstants: all constants must be > 0");
        }
    };

    // Per-vehicle coefficients for one frame.
    struct PerfModel
    {
        double beta_G = 0.0;
        double beta_h = 0.0;
        double A_phi = 0.0;   // measurement variance at eta_{k-1} = 1
        double C_k = 0.0;     // 2 P_A beta_G beta_h L / sigma_c^2
        double h_val = 0.0;   // h(phi_pred, var_proc)
        double phi_pred = pi / 2;
        double var_proc = 0.01;
        double snr_coef = 0.0; // echo SNR at eta_{k-1} = 1
    };

    namespace detail
    {
        inline void require_h_args(double x, double y, const char *fn)
        {
            if (!std::isfinite(x) || x < angle_guard || x > pi - angle_guard)
                throw Error(ErrorKind::invalid_input, std::string(fn) + ": angle within guard band of 0 or pi");
            if (!(y > 0.0) || !std::isfinite(y))
                throw Error(ErrorKind::degenerate_variance, std::string(fn) + ": variance must be > 0");
        }

        inline double h_term(double x, double y, double i)
        {
            const double a = i * pi;
            const double b = (i + 1.0) * pi - x;
            return std::exp(-2.0 * a * a / y) + std::exp(-2.0 * b * b / y);
        }
    }

    // Full wrapped series, summed outward from i = 0 in (+i, -i) pairs. Stops after two
    // consecutive pairs contribute less than tol relative to the running sum.
    inline double h_series(double x, double y, double tol = h_series_default_tol)
    {
        detail::require_h_args(x, y, "h_series");
        double sum = detail::h_term(x, y, 0.0);
        int quiet = 0;
        for (long i = 1; i < 10'000'000 && quiet < 2; ++i)
        {
            const double di = static_cast<double>(i);
            const double pair = detail::h_term(x, y, di) + detail::h_term(x, y, -di);
            sum += pair;
            quiet = (pair < tol * sum) ? quiet + 1 : 0;
        }
        const double s = std::sin(x);
        return sum / std::sqrt(2.0 * pi * y * s * s);
    }

    // Two-term truncation of h.
    inline double h_tilde(double x, double y)
    {
        detail::require_h_args(x, y, "h_tilde");
        const double s = std::sin(x);
        const double b = pi - x;
        return (1.0 + std::exp(-2.0 * b * b / y)) / std::sqrt(2.0 * pi * y * s * s);
    }

    inline PerfModel make_perf_model(double phi_pred, double d_pred, double var_proc, double beta0, double beta_h,
                                     const RadioConstants &rc, const ArrayConfig &arrays)
    {
        rc.validate();
        arrays.validate();
        detail::require(beta_h > 0.0, ErrorKind::invalid_input, "make_perf_model: beta_h must be > 0");
        PerfModel pm;
        pm.phi_pred = phi_pred;
        pm.var_proc = var_proc;
        pm.beta_G = path_gain(beta0, d_pred);
        pm.beta_h = beta_h;
        pm.h_val = h_series(phi_pred, var_proc);
        const double L = arrays.num_irs_elements;
        const double M = arrays.num_rx_antennas;
        pm.snr_coef = rc.W * rc.P_A * pm.beta_G * pm.beta_G * L * M * pm.h_val / rc.sigma_s2;
        const double s = std::sin(phi_pred);
        pm.A_phi = rc.sigmaR2 / (pm.snr_coef * s * s);
        pm.C_k = 2.0 * rc.P_A * pm.beta_G * pm.beta_h * L / rc.sigma_c2;
        return pm;
    }

    // Expected echo SNR after matched filtering over a fraction eta_prev of the frame.
    inline double echo_snr_closed_form(double eta_prev, const PerfModel &pm, const RadioConstants &rc,
                                       const ArrayConfig &arrays)
    {
        detail::require(eta_prev >= 0.0 && eta_prev <= 1.0, ErrorKind::invalid_input,
                        "echo_snr_closed_form: eta must be in [0, 1]");
        return eta_prev * rc.W * rc.P_A * pm.beta_G * pm.beta_G * arrays.num_irs_elements *
               arrays.num_rx_antennas * pm.h_val / rc.sigma_s2;
    }

    // Kalman-tracked angle variance when the measurement variance is A_phi / eta_prev.
    inline double tracked_variance(double eta_prev, double A_phi, double var_proc)
    {
        detail::require(eta_prev >= 0.0, ErrorKind::invalid_input, "tracked_variance: eta must be >= 0");
        detail::require(A_phi > 0.0 && var_proc > 0.0, ErrorKind::invalid_input,
                        "tracked_variance: A_phi and var_proc must be > 0");
        return var_proc * A_phi / (var_proc * eta_prev + A_phi);
    }

    // Rate from an explicit angle-uncertainty variance.
    inline double rate_with_variance(double eta_k, double C_k, double phi_pred, double var_angle)
    {
        if (eta_k == 0.0)
            return 0.0;
        return eta_k * std::log2(1.0 + C_k * h_tilde(phi_pred, var_angle));
    }

    // Rate per unit of communication time, log2(1 + C_k h_tilde), for a vehicle sensed over eta_prev.
    inline double spectral_efficiency(double eta_prev, const PerfModel &pm)
    {
        const double var = tracked_variance(eta_prev, pm.A_phi, pm.var_proc);
        return std::log2(1.0 + pm.C_k * h_tilde(pm.phi_pred, var));
    }

    // Approximate achievable rate in bps/Hz of a device served over eta_k, whose
    // vehicle was sensed over eta_prev.
    inline double rate_closed_form(double eta_k, double eta_prev, const PerfModel &pm)
    {
        detail::require(eta_k >= 0.0 && eta_k <= 1.0 && eta_prev >= 0.0 && eta_prev <= 1.0,
                        ErrorKind::invalid_input, "rate_closed_form: fractions must be in [0, 1]");
        if (eta_k == 0.0)
            return 0.0;
        return eta_k * spectral_efficiency(eta_prev, pm);
    }

    // f(eta) = sqrt(eta) (1 + exp(-eta)); h_tilde is an affine image of it along eta.
    inline double monotonicity_witness(double eta)
    {
        return std::sqrt(eta) * (1.0 + std::exp(-eta));
    }
}

#endif
