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

#ifndef ISAC_KINEMATICS_HPP
#define ISAC_KINEMATICS_HPP

#include "isac/channel_geometry.hpp"
#include "isac/error.hpp"
#include "isac/random.hpp"

#include <cmath>

namespace isac
{
    // Bearing phi (rad), RSU-IRS distance d (m) and speed v (m/s) of one vehicle.
    struct VehicleState
    {
        double phi = pi / 2;
        double d = 20.0;
        double v = 0.0;
    };

    struct ProcessNoise
    {
        double var_phi = 0.01; // rad^2
        double var_d = 0.0;    // m^2
        double var_v = 0.0;    // (m/s)^2
    };

    struct TrackBelief
    {
        double phi_pred = pi / 2;
        double d_pred = 20.0;
        double phi_tracked = pi / 2;
        double var_tracked = 0.0;
        double var_meas = 0.0;
    };

    struct KalmanOutput
    {
        double phi_tracked = 0.0;
        double var_tracked = 0.0;
        double gain = 0.0;
    };

    // One-frame state transition:
    //   phi' = phi + v dt sin(phi) / d,  d' = d - v dt cos(phi),  v' = v
    // plus zero-mean Gaussian noise on each line when an rng is supplied.
    inline VehicleState predict_state(const VehicleState &prev, double dt, const ProcessNoise &noise, Rng *rng = nullptr)
    {
        detail::require(std::isfinite(prev.phi) && prev.phi > 0.0 && prev.phi < pi,
                        ErrorKind::invalid_input, "predict_state: phi must be in (0, pi)");
        detail::require(std::isfinite(prev.d) && prev.d > 0.0, ErrorKind::invalid_input, "predict_state: d must be > 0");
        detail::require(std::isfinite(dt) && dt > 0.0, ErrorKind::invalid_input, "predict_state: dt must be > 0");

        VehicleState next;
        next.phi = prev.phi + prev.v * dt * std::sin(prev.phi) / prev.d;
        next.d = prev.d - prev.v * dt * std::cos(prev.phi);
        next.v = prev.v;
        if (rng != nullptr)
        {
            next.phi += std::sqrt(noise.var_phi) * rng->normal();
            next.d += std::sqrt(noise.var_d) * rng->normal();
            next.v += std::sqrt(noise.var_v) * rng->normal();
        }
        if (!(next.phi > 0.0 && next.phi < pi) || !(next.d > 0.0))
            throw Error(ErrorKind::state_out_of_domain, "predict_state: predicted state leaves phi in (0, pi), d > 0");
        return next;
    }

    // Angle-estimation error variance sigma_R^2 / (gamma_S sin^2 phi).
    inline double measurement_variance(double gamma_S, double phi, double sigmaR2)
    {
        if (!(gamma_S > 0.0))
            throw Error(ErrorKind::infeasible_sensing, "measurement_variance: echo SNR must be > 0");
        const double s = std::sin(phi);
        detail::require(s != 0.0, ErrorKind::invalid_input, "measurement_variance: sin(phi) must be nonzero");
        return sigmaR2 / (gamma_S * s * s);
    }

    // Scalar Kalman fusion of the kinematic prediction with an echo measurement.
    inline KalmanOutput kalman_update(double phi_pred, double phi_meas, double var_proc, double var_meas)
    {
        detail::require(var_proc >= 0.0 && var_meas >= 0.0, ErrorKind::invalid_input,
                        "kalman_update: variances must be >= 0");
        const double total = var_proc + var_meas;
        if (!(total > 0.0))
            throw Error(ErrorKind::degenerate_filter, "kalman_update: both variances are zero");
        KalmanOutput out;
        out.gain = var_proc / total;
        out.phi_tracked = phi_pred + out.gain * (phi_meas - phi_pred);
        out.var_tracked = var_proc * var_meas / total;
        return out;
    }

    // phi_true + N(0, var_meas).
    inline double synthesize_measurement(double phi_true, double var_meas, Rng &rng)
    {
        detail::require(var_meas >= 0.0, ErrorKind::invalid_input, "synthesize_measurement: variance must be >= 0");
        if (var_meas == 0.0)
            return phi_true;
        return phi_true + std::sqrt(var_meas) * rng.normal();
    }
}

#endif
