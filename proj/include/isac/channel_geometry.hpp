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

#ifndef ISAC_CHANNEL_GEOMETRY_HPP
#define ISAC_CHANNEL_GEOMETRY_HPP

#include "isac/error.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace isac
{
    using cdouble = std::complex<double>;

    inline constexpr double pi = std::numbers::pi;
    inline constexpr double two_pi = 2.0 * std::numbers::pi;

    // Receive ULA at the RSU and the per-vehicle IRS, both half-wavelength spaced.
    struct ArrayConfig
    {
        int num_rx_antennas = 10;   // M_r
        int num_irs_elements = 100; // L

        void validate() const
        {
            detail::require(num_rx_antennas >= 1, ErrorKind::invalid_input, "num_rx_antennas must be >= 1");
            detail::require(num_irs_elements >= 1, ErrorKind::invalid_input, "num_irs_elements must be >= 1");
        }
    };

    struct ChannelGains
    {
        double beta0 = 1e-3;  // power gain at 1 m
        double beta_G = 0.0;  // RSU <-> IRS
        double beta_h = 0.0;  // IRS <-> in-vehicle device
    };

    struct SteeringVector
    {
        std::vector<cdouble> entries;

        std::size_t size() const { return entries.size(); }
        const cdouble &operator[](std::size_t i) const { return entries[i]; }
    };

    namespace detail
    {
        inline void require_angle(double phi, const char *what)
        {
            if (!std::isfinite(phi) || !(phi > 0.0) || !(phi < pi))
                throw Error(ErrorKind::invalid_input, what);
        }

        inline void require_count(int n, const char *what)
        {
            if (n < 1)
                throw Error(ErrorKind::invalid_input, what);
        }

        inline SteeringVector steering(double phi, int n, double sign)
        {
            const double c = std::cos(phi);
            SteeringVector sv;
            sv.entries.resize(static_cast<std::size_t>(n));
            for (int m = 0; m < n; ++m)
                sv.entries[static_cast<std::size_t>(m)] = std::polar(1.0, sign * pi * m * c);
            return sv;
        }
    }

    // Reduce an angle to [0, 2*pi).
    inline double wrap_phase(double theta)
    {
        double r = std::fmod(theta, two_pi);
        if (r < 0.0)
            r += two_pi;
        if (r >= two_pi)
            r = 0.0;
        return r;
    }

    // a_IRS(-phi): entry l is exp(+j*pi*l*cos(phi)), l = 0..L-1.
    inline SteeringVector steering_irs(double phi, int L)
    {
        detail::require_angle(phi, "steering_irs: phi must be finite and in (0, pi)");
        detail::require_count(L, "steering_irs: L must be >= 1");
        return detail::steering(phi, L, +1.0);
    }

    // b_RSU(phi): entry m is exp(-j*pi*m*cos(phi)), m = 0..M_r-1.
    inline SteeringVector steering_rsu(double phi, int M_r)
    {
        detail::require_angle(phi, "steering_rsu: phi must be finite and in (0, pi)");
        detail::require_count(M_r, "steering_rsu: M_r must be >= 1");
        return detail::steering(phi, M_r, -1.0);
    }

    // Fejer kernel F_L(x) = (1/L) (sin(L*pi*x/2) / sin(pi*x/2))^2, period 2, peak L at x = 0 mod 2.
    inline double fejer_kernel(double x, int L)
    {
        const double den = std::sin(0.5 * pi * x);
        if (std::abs(den) < 1e-9)
            return static_cast<double>(L);
        const double num = std::sin(0.5 * pi * static_cast<double>(L) * x);
        const double r = num / den;
        return r * r / static_cast<double>(L);
    }

    // Free-space power gain beta0 / d^2.
    inline double path_gain(double beta0, double d)
    {
        detail::require(std::isfinite(beta0) && beta0 > 0.0, ErrorKind::invalid_input, "path_gain: beta0 must be > 0");
        detail::require(std::isfinite(d) && d > 0.0, ErrorKind::invalid_input, "path_gain: distance must be > 0");
        return beta0 / (d * d);
    }

    // Reflection phases steering the echo back along phi_est.
    inline std::vector<double> reflect_phase_shifts(double phi_est, int L, double theta0 = 0.0)
    {
        detail::require_angle(phi_est, "reflect_phase_shifts: phi_est must be in (0, pi)");
        detail::require_count(L, "reflect_phase_shifts: L must be >= 1");
        const double c = std::cos(phi_est);
        std::vector<double> theta(static_cast<std::size_t>(L));
        for (int l = 0; l < L; ++l)
            theta[static_cast<std::size_t>(l)] = wrap_phase(-two_pi * l * c + theta0);
        return theta;
    }

    // Refraction phases steering the incident RSU beam (arriving from phi_tracked)
    // toward the in-vehicle device at phi_user.
    inline std::vector<double> refract_phase_shifts(double phi_user, double phi_tracked, int L, double theta0 = 0.0)
    {
        detail::require_angle(phi_user, "refract_phase_shifts: phi_user must be in (0, pi)");
        detail::require_angle(phi_tracked, "refract_phase_shifts: phi_tracked must be in (0, pi)");
        detail::require_count(L, "refract_phase_shifts: L must be >= 1");
        const double dc = std::cos(phi_user) - std::cos(phi_tracked);
        std::vector<double> theta(static_cast<std::size_t>(L));
        for (int l = 0; l < L; ++l)
            theta[static_cast<std::size_t>(l)] = wrap_phase(pi * l * dc + theta0);
        return theta;
    }

    // |a^T(-phi) diag(e^{j theta}) a(-phi)|^2 for an arbitrary reflection phase vector.
    inline double reflect_gain(double phi_true, std::span<const double> theta)
    {
        const auto a = steering_irs(phi_true, static_cast<int>(theta.size()));
        cdouble acc{0.0, 0.0};
        for (std::size_t l = 0; l < theta.size(); ++l)
            acc += a[l] * std::polar(1.0, theta[l]) * a[l];
        return std::norm(acc);
    }

    // |h_k^T diag(e^{j theta}) h_DL|^2 / (beta_h beta_G): device channel uses exp(-j*pi*l*cos(phi_user)).
    inline double refract_gain(double phi_true, double phi_user, std::span<const double> theta)
    {
        const int L = static_cast<int>(theta.size());
        const auto dl = steering_irs(phi_true, L);
        const auto dev = steering_rsu(phi_user, L);
        cdouble acc{0.0, 0.0};
        for (std::size_t l = 0; l < theta.size(); ++l)
            acc += dev[l] * std::polar(1.0, theta[l]) * dl[l];
        return std::norm(acc);
    }

    // Coherent reflection gain when the IRS is configured from phi_design but the
    // vehicle sits at phi_true. Equals L * F_L(2 (cos phi_design - cos phi_true)).
    inline double passive_gain_exact(double phi_true, double phi_design, int L)
    {
        const auto theta = reflect_phase_shifts(phi_design, L);
        return reflect_gain(phi_true, theta);
    }

    // |v^H b_RSU(phi_true)|^2 with v = b_RSU(phi_design) / sqrt(M_r).
    // Equals F_{M_r}(cos phi_design - cos phi_true).
    inline double receive_gain_exact(double phi_true, double phi_design, int M_r)
    {
        const auto v = steering_rsu(phi_design, M_r);
        const auto b = steering_rsu(phi_true, M_r);
        cdouble acc{0.0, 0.0};
        for (std::size_t m = 0; m < b.size(); ++m)
            acc += std::conj(v[m]) * b[m];
        return std::norm(acc) / static_cast<double>(M_r);
    }

    // Refraction gain with phases designed from phi_tracked. Equals L * F_L(cos phi_tracked - cos phi_true).
    inline double refract_gain_exact(double phi_true, double phi_tracked, double phi_user, int L)
    {
        const auto theta = refract_phase_shifts(phi_user, phi_tracked, L);
        return refract_gain(phi_true, phi_user, theta);
    }
}

#endif
