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

// Frame-by-frame simulation of the mutually assisted protocol and its benchmarks.
//
// Each frame, every vehicle's belief is pushed through the kinematic model, a
// per-vehicle PerfModel is built from the prediction, the time allocation is
// optimized, and the echo received in the vehicle's sensing slot updates the
// belief through the Kalman filter. Schemes differ in slot layout and in what the
// refraction phases are designed from:
//
//   proposed      K+1 interleaved slots, phases from the tracked angle
//   no_s_assist   K+1 interleaved slots, phases from the predicted angle
//   no_c_assist   2K time-division slots, phases from the tracked angle
//   no_sc_assist  2K time-division slots, phases from the predicted angle
//   random_phase  K+1 interleaved slots, uniformly random IRS phases
//
// Truth follows the exact straight-line geometry. Measurement noise is drawn from
// a stream keyed by (seed, vehicle, frame) only, so every scheme and every sweep
// point sees the same noise realization.

#ifndef ISAC_PROTOCOL_SIM_HPP
#define ISAC_PROTOCOL_SIM_HPP

#include "isac/channel_geometry.hpp"
#include "isac/closed_form.hpp"
#include "isac/error.hpp"
#include "isac/kinematics.hpp"
#include "isac/mc_oracle.hpp"
#include "isac/random.hpp"
#include "isac/time_allocation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace isac
{
    enum class Scheme
    {
        proposed,
        no_s_assist,
        no_c_assist,
        no_sc_assist,
        random_phase
    };

    inline constexpr std::array<Scheme, 5> all_schemes = {Scheme::proposed, Scheme::no_s_assist, Scheme::no_c_assist,
                                                          Scheme::no_sc_assist, Scheme::random_phase};

    inline const char *to_string(Scheme s)
    {
        switch (s)
        {
        case Scheme::proposed:
            return "proposed";
        case Scheme::no_s_assist:
            return "no_s_assist";
        case Scheme::no_c_assist:
            return "no_c_assist";
        case Scheme::no_sc_assist:
            return "no_sc_assist";
        case Scheme::random_phase:
            return "random_phase";
        }
        return "unknown";
    }

    inline Scheme scheme_from_string(std::string_view name)
    {
        for (Scheme s : all_schemes)
            if (name == to_string(s))
                return s;
        throw Error(ErrorKind::invalid_input, "unknown scheme '" + std::string(name) + "'");
    }

    // Communication phases follow the Kalman-tracked angle.
    inline bool uses_sensing_assist(Scheme s) { return s == Scheme::proposed || s == Scheme::no_c_assist; }

    // Sensing rides on the previous vehicle's data slot.
    inline bool uses_comm_assist(Scheme s) { return s != Scheme::no_c_assist && s != Scheme::no_sc_assist; }

    using Vec3 = std::array<double, 3>;

    struct VehicleSpec
    {
        Vec3 position{-50.0, -20.0, 0.0}; // at t = 0, m
        double speed = 15.0;              // along +x, m/s
    };

    struct ScenarioConfig
    {
        ArrayConfig arrays;
        RadioConstants radio;
        ProcessNoise noise;
        double beta0 = 1e-3; // path gain at 1 m
        double gamma_th = 1e3;
        double epsilon = 1e-3;
        int max_iters = 10'000;
        double dt = 0.1;
        int n_frames = 67;
        Vec3 rsu{0.0, 0.0, 10.0};
        std::vector<VehicleSpec> vehicles{{{-50.0, -20.0, 0.0}, 15.0},
                                          {{-55.0, -20.0, 0.0}, 15.0},
                                          {{-60.0, -20.0, 0.0}, 15.0}};
        double device_distance = 2.0;   // IRS to in-vehicle device, m
        double device_angle = pi / 2;   // device direction seen from the IRS
        std::uint64_t seed = 1;
        Scheme scheme = Scheme::proposed;
        int random_phase_draws = 1000;
        std::optional<std::vector<double>> fixed_eta; // bypasses the optimizer
        std::uint64_t stream_key = 0;                 // mixed into the random-phase stream

        std::size_t K() const { return vehicles.size(); }
        double beta_h() const { return beta0 / (device_distance * device_distance); }
        double duration() const { return dt * n_frames; }

        void validate() const;
    };

    // Angle between the array axis and the RSU-to-vehicle line. The axis points
    // against the direction of travel, so a vehicle approaching from -x sits near 0
    // and one departing towards +x tends to pi.
    inline double compute_true_bearing(const Vec3 &rsu, const Vec3 &vehicle)
    {
        const double dx = vehicle[0] - rsu[0];
        const double dy = vehicle[1] - rsu[1];
        const double dz = vehicle[2] - rsu[2];
        const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        detail::require(r > 0.0 && std::isfinite(r), ErrorKind::invalid_input,
                        "compute_true_bearing: positions must be distinct and finite");
        return std::acos(std::clamp(-dx / r, -1.0, 1.0));
    }

    inline double distance(const Vec3 &a, const Vec3 &b)
    {
        const double dx = a[0] - b[0];
        const double dy = a[1] - b[1];
        const double dz = a[2] - b[2];
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }

    // Exact kinematic truth of vehicle k at frame n (time n * dt).
    inline VehicleState true_state(const ScenarioConfig &cfg, std::size_t k, int n)
    {
        const auto &spec = cfg.vehicles[k];
        Vec3 pos = spec.position;
        pos[0] += spec.speed * cfg.dt * n;
        return {compute_true_bearing(cfg.rsu, pos), distance(cfg.rsu, pos), spec.speed};
    }

    inline void ScenarioConfig::validate() const
    {
        arrays.validate();
        radio.validate();
        auto req = [](bool ok, const char *what) { detail::require(ok, ErrorKind::invalid_input, what); };
        req(!vehicles.empty(), "scenario: at least one vehicle is required");
        req(beta0 > 0.0, "scenario: beta0 must be > 0");
        req(gamma_th >= 0.0 && std::isfinite(gamma_th), "scenario: gamma_th must be >= 0");
        req(epsilon > 0.0, "scenario: epsilon must be > 0");
        req(max_iters >= 1, "scenario: max_iters must be >= 1");
        req(dt > 0.0 && std::isfinite(dt), "scenario: frame duration must be > 0");
        req(n_frames >= 1, "scenario: n_frames must be >= 1");
        req(device_distance > 0.0, "scenario: device distance must be > 0");
        req(device_angle > 0.0 && device_angle < pi, "scenario: device angle must be in (0, pi)");
        req(noise.var_phi > 0.0 && noise.var_d >= 0.0 && noise.var_v >= 0.0,
            "scenario: angle process variance must be > 0 and the others >= 0");
        req(random_phase_draws >= 1, "scenario: random_phase_draws must be >= 1");
        if (fixed_eta)
        {
            const std::size_t slots = uses_comm_assist(scheme) ? K() + 1 : 2 * K();
            req(fixed_eta->size() == slots, "scenario: fixed_eta has the wrong number of slots for the scheme");
            double s = 0.0;
            for (double e : *fixed_eta)
            {
                req(e >= 0.0 && e <= 1.0, "scenario: fixed_eta entries must be in [0, 1]");
                s += e;
            }
            req(std::abs(s - 1.0) <= 1e-9, "scenario: fixed_eta must sum to 1");
        }
        for (std::size_t k = 0; k < K(); ++k)
        {
            req(std::isfinite(vehicles[k].speed), "scenario: vehicle speed must be finite");
            for (int n = 0; n <= n_frames; ++n)
            {
                const auto s = true_state(*this, k, n);
                req(s.phi > angle_guard && s.phi < pi - angle_guard,
                    "scenario: trajectory leaves the bearing range (0.05, pi - 0.05)");
            }
        }
    }

    struct VehicleFrame
    {
        double phi_true = 0.0;
        double phi_pred = 0.0;
        double phi_tracked = 0.0;
        double var_tracked = 0.0;
        double gamma_s = 0.0;
        double rate = 0.0;
    };

    struct FrameResult
    {
        int n = 0;
        std::vector<VehicleFrame> vehicles;
        TimeAllocation allocation;
        double min_rate = 0.0;
        bool feasible = false;
        int solver_iterations = 0;
    };

    // Belief carried between frames.
    struct VehicleBelief
    {
        double phi = pi / 2;
        double d = 20.0;
        double v = 0.0;
    };

    // Per-frame quantities each scheme needs from the vehicles.
    struct FrameModel
    {
        SlotLayout layout;
        std::vector<PerfModel> perf;
        std::vector<double> snr_coef;   // echo SNR at a full-frame sensing slot
        std::vector<double> fixed_eff;  // spectral efficiency when it does not depend on sensing
        Scheme scheme = Scheme::proposed;

        double efficiency(std::size_t k, double assist) const
        {
            if (uses_sensing_assist(scheme))
                return spectral_efficiency(assist, perf[k]);
            return fixed_eff[k];
        }

        double max_gamma() const
        {
            double inv = 0.0;
            for (double c : snr_coef)
                inv += 1.0 / c;
            return 1.0 / inv;
        }
    };

    namespace detail
    {
        enum : std::uint64_t
        {
            stream_measurement = 0x6d656173ULL,
            stream_phase = 0x70686173ULL
        };

        // Random IRS phases: E[|reflect|^2 |v^H b|^2] for the echo and E[log2(1 + gamma_C)]
        // for the data link, over uniform phases and the prediction error.
        inline void random_phase_gains(const ScenarioConfig &cfg, const PerfModel &pm, Rng rng, double &echo_gain,
                                       double &efficiency)
        {
            const int L = cfg.arrays.num_irs_elements;
            const int M = cfg.arrays.num_rx_antennas;
            const double sd = std::sqrt(cfg.noise.var_phi);
            const double link = cfg.radio.P_A * pm.beta_G * pm.beta_h / cfg.radio.sigma_c2;
            std::vector<double> theta(static_cast<std::size_t>(L));
            std::vector<double> echo(static_cast<std::size_t>(cfg.random_phase_draws));
            std::vector<double> logs(echo.size());
            for (std::size_t i = 0; i < echo.size(); ++i)
            {
                const double phi = fold_angle(pm.phi_pred + sd * rng.normal());
                for (auto &t : theta)
                    t = two_pi * rng.uniform();
                echo[i] = reflect_gain(phi, theta) * receive_gain_exact(phi, pm.phi_pred, M);
                for (auto &t : theta)
                    t = two_pi * rng.uniform();
                logs[i] = std::log2(1.0 + link * refract_gain(phi, cfg.device_angle, theta));
            }
            echo_gain = estimate_mean(echo).mean;
            efficiency = estimate_mean(logs).mean;
        }
    }

    // Layout, lower bounds and rate model of one frame given the predicted states.
    inline FrameModel build_frame_model(const ScenarioConfig &cfg, const std::vector<VehicleState> &pred, int n)
    {
        const std::size_t K = cfg.K();
        FrameModel fm;
        fm.scheme = cfg.scheme;
        fm.perf.reserve(K);
        fm.snr_coef.resize(K);
        fm.fixed_eff.assign(K, 0.0);
        const Rng phase_root = Rng(cfg.seed).substream(
            {detail::stream_phase, static_cast<std::uint64_t>(cfg.scheme), cfg.stream_key});
        for (std::size_t k = 0; k < K; ++k)
        {
            fm.perf.push_back(
                make_perf_model(pred[k].phi, pred[k].d, cfg.noise.var_phi, cfg.beta0, cfg.beta_h(), cfg.radio, cfg.arrays));
            const auto &pm = fm.perf.back();
            fm.snr_coef[k] = pm.snr_coef;
            if (cfg.scheme == Scheme::random_phase)
            {
                double echo_gain = 0.0;
                detail::random_phase_gains(cfg, pm, phase_root.substream({static_cast<std::uint64_t>(n), k}), echo_gain,
                                           fm.fixed_eff[k]);
                fm.snr_coef[k] = cfg.radio.W * cfg.radio.P_A * pm.beta_G * pm.beta_G * echo_gain / cfg.radio.sigma_s2;
            }
            else if (!uses_sensing_assist(cfg.scheme))
            {
                fm.fixed_eff[k] = std::log2(1.0 + pm.C_k * h_tilde(pm.phi_pred, pm.var_proc));
            }
        }
        std::vector<double> sense_lower(K);
        for (std::size_t k = 0; k < K; ++k)
            sense_lower[k] = cfg.gamma_th / fm.snr_coef[k];
        if (uses_comm_assist(cfg.scheme))
        {
            sense_lower.push_back(0.0);
            fm.layout = interleaved_layout(std::move(sense_lower));
        }
        else
        {
            fm.layout = time_division_layout(sense_lower);
        }
        return fm;
    }

    // Allocation that equalizes the echo SNRs with no data time; attains max_gamma.
    inline std::vector<double> equalizing_allocation(const FrameModel &fm)
    {
        std::vector<double> eta(fm.layout.num_slots, 0.0);
        double inv = 0.0;
        for (double c : fm.snr_coef)
            inv += 1.0 / c;
        for (std::size_t k = 0; k < fm.layout.users(); ++k)
            eta[fm.layout.sense_slot[k]] = (1.0 / fm.snr_coef[k]) / inv;
        return eta;
    }

    // One frame: predict, allocate, sense and track. Updates `beliefs` in place.
    inline FrameResult run_frame(std::vector<VehicleBelief> &beliefs, const std::vector<VehicleState> &truths,
                                 const ScenarioConfig &cfg, int n)
    {
        const std::size_t K = cfg.K();
        detail::require(beliefs.size() == K && truths.size() == K, ErrorKind::invalid_input,
                        "run_frame: one belief and one truth per vehicle");
        std::vector<VehicleState> pred(K);
        for (std::size_t k = 0; k < K; ++k)
            pred[k] = predict_state({beliefs[k].phi, beliefs[k].d, beliefs[k].v}, cfg.dt, cfg.noise);

        const FrameModel fm = build_frame_model(cfg, pred, n);
        auto eff = [&fm](std::size_t k, double assist) { return fm.efficiency(k, assist); };

        FrameResult out;
        out.n = n;
        const double sum_lower = std::accumulate(fm.layout.lower.begin(), fm.layout.lower.end(), 0.0);
        out.feasible = cfg.gamma_th <= fm.max_gamma() && sum_lower <= 1.0;
        if (cfg.fixed_eta)
        {
            out.allocation.eta = *cfg.fixed_eta;
            for (std::size_t i = 0; i < fm.layout.num_slots; ++i)
                if (out.allocation.eta[i] < fm.layout.lower[i])
                    out.feasible = false;
        }
        else if (out.feasible)
        {
            PolyblockOptions opts;
            opts.epsilon = cfg.epsilon;
            opts.max_iters = cfg.max_iters;
            auto res = solve_layout(fm.layout, eff, opts);
            out.allocation = std::move(res.eta);
            out.solver_iterations = res.iterations;
        }
        else
        {
            out.allocation.eta = equalizing_allocation(fm);
        }

        const Rng meas_root = Rng(cfg.seed).substream(detail::stream_measurement);
        out.vehicles.resize(K);
        out.min_rate = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k)
        {
            auto &vf = out.vehicles[k];
            const double eta_sense = out.allocation[fm.layout.sense_slot[k]];
            const double eta_comm = out.allocation[fm.layout.comm_slot[k]];
            vf.phi_true = truths[k].phi;
            vf.phi_pred = pred[k].phi;
            vf.gamma_s = eta_sense * fm.snr_coef[k];
            if (vf.gamma_s > 0.0)
            {
                const double var_meas = measurement_variance(vf.gamma_s, pred[k].phi, cfg.radio.sigmaR2);
                Rng rng = meas_root.substream({k, static_cast<std::uint64_t>(n)});
                const double meas = synthesize_measurement(truths[k].phi, var_meas, rng);
                const auto kf = kalman_update(pred[k].phi, meas, cfg.noise.var_phi, var_meas);
                vf.phi_tracked = kf.phi_tracked;
                vf.var_tracked = kf.var_tracked;
            }
            else
            {
                vf.phi_tracked = pred[k].phi;
                vf.var_tracked = cfg.noise.var_phi;
            }
            vf.rate = out.feasible && eta_comm > 0.0 ? eta_comm * eff(k, eta_sense) : 0.0;
            out.min_rate = std::min(out.min_rate, vf.rate);

            beliefs[k].phi = std::clamp(vf.phi_tracked, 1e-9, pi - 1e-9);
            beliefs[k].d = pred[k].d;
            beliefs[k].v = pred[k].v;
        }
        if (!out.feasible)
            out.min_rate = 0.0;
        return out;
    }

    inline std::vector<VehicleBelief> initial_beliefs(const ScenarioConfig &cfg)
    {
        std::vector<VehicleBelief> b(cfg.K());
        for (std::size_t k = 0; k < cfg.K(); ++k)
        {
            const auto s = true_state(cfg, k, 0);
            b[k] = {s.phi, s.d, s.v};
        }
        return b;
    }

    // Frames 1..N; beliefs start at the exact frame-0 state.
    inline std::vector<FrameResult> run_trajectory(const ScenarioConfig &cfg)
    {
        cfg.validate();
        auto beliefs = initial_beliefs(cfg);
        std::vector<FrameResult> frames;
        frames.reserve(static_cast<std::size_t>(cfg.n_frames));
        std::vector<VehicleState> truths(cfg.K());
        for (int n = 1; n <= cfg.n_frames; ++n)
        {
            for (std::size_t k = 0; k < cfg.K(); ++k)
                truths[k] = true_state(cfg, k, n);
            frames.push_back(run_frame(beliefs, truths, cfg, n));
        }
        return frames;
    }

    enum class SweepParam
    {
        gamma_th,
        P_A
    };

    inline const char *to_string(SweepParam p) { return p == SweepParam::gamma_th ? "gamma_th" : "P_A"; }

    inline SweepParam sweep_param_from_string(std::string_view name)
    {
        if (name == "gamma_th")
            return SweepParam::gamma_th;
        if (name == "P_A")
            return SweepParam::P_A;
        throw Error(ErrorKind::invalid_input, "unknown sweep parameter '" + std::string(name) + "'");
    }

    struct SweepRow
    {
        Scheme scheme = Scheme::proposed;
        SweepParam param = SweepParam::gamma_th;
        double value = 0.0;
        double mean_min_rate = 0.0;
        double mean_gamma_s = 0.0;
        int frames = 0;
        int feasible_frames = 0;
        std::uint64_t seed = 0;
        double runtime_s = 0.0;
    };

    struct SweepResult
    {
        std::vector<SweepRow> rows; // scheme-major, values ascending
        std::vector<std::string> trend_violations;
    };

    inline SweepRow summarize(const std::vector<FrameResult> &frames)
    {
        SweepRow row;
        row.frames = static_cast<int>(frames.size());
        std::vector<double> rates;
        std::vector<double> gammas;
        for (const auto &f : frames)
        {
            rates.push_back(f.min_rate);
            row.feasible_frames += f.feasible ? 1 : 0;
            for (const auto &v : f.vehicles)
                gammas.push_back(v.gamma_s);
        }
        row.mean_min_rate = estimate_mean(rates).mean;
        row.mean_gamma_s = estimate_mean(gammas).mean;
        return row;
    }

    // Min-rate must be non-increasing in gamma_th and non-decreasing in P_A.
    inline std::vector<std::string> check_sweep_trends(const SweepResult &res, double slack = 1e-9)
    {
        std::vector<std::string> bad;
        for (std::size_t i = 1; i < res.rows.size(); ++i)
        {
            const auto &a = res.rows[i - 1];
            const auto &b = res.rows[i];
            if (a.scheme != b.scheme)
                continue;
            const double delta = b.mean_min_rate - a.mean_min_rate;
            const bool ok = a.param == SweepParam::gamma_th ? delta <= slack : delta >= -slack;
            if (!ok)
                bad.push_back(std::string(to_string(a.scheme)) + ": min-rate moves the wrong way between " +
                              std::to_string(a.value) + " and " + std::to_string(b.value));
        }
        return bad;
    }

    // Every (scheme, value) point runs on its own thread pool slot with its own
    // random-phase stream; rows come back in input order regardless of scheduling.
    inline SweepResult sweep(const ScenarioConfig &base, SweepParam param, const std::vector<double> &values,
                             const std::vector<Scheme> &schemes, unsigned threads = 0)
    {
        detail::require(std::is_sorted(values.begin(), values.end()), ErrorKind::invalid_input,
                        "sweep: values must be sorted ascending");
        SweepResult res;
        res.rows.resize(schemes.size() * values.size());
        if (res.rows.empty())
            return res;

        auto job = [&](std::size_t idx) {
            const Scheme s = schemes[idx / values.size()];
            const double v = values[idx % values.size()];
            ScenarioConfig cfg = base;
            cfg.scheme = s;
            if (param == SweepParam::gamma_th)
                cfg.gamma_th = v;
            else
                cfg.radio.P_A = v;
            cfg.stream_key = splitmix64(bits_of(v) ^ static_cast<std::uint64_t>(param));
            const auto t0 = std::chrono::steady_clock::now();
            SweepRow row = summarize(run_trajectory(cfg));
            row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            row.scheme = s;
            row.param = param;
            row.value = v;
            row.seed = cfg.seed;
            res.rows[idx] = row;
        };

        if (threads == 0)
            threads = std::max(1u, std::thread::hardware_concurrency());
        threads = static_cast<unsigned>(std::min<std::size_t>(threads, res.rows.size()));
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
        {
            pool.emplace_back([&, t]() {
                try
                {
                    for (std::size_t i = next++; i < res.rows.size(); i = next++)
                        job(i);
                }
                catch (...)
                {
                    errors[t] = std::current_exception();
                    next = res.rows.size();
                }
            });
        }
        for (auto &th : pool)
            th.join();
        for (auto &e : errors)
            if (e)
                std::rethrow_exception(e);
        res.trend_violations = check_sweep_trends(res);
        return res;
    }

    // The allocation problem of the first frame, for the single-frame CLI commands.
    inline ProblemP2 first_frame_problem(const ScenarioConfig &cfg)
    {
        cfg.validate();
        ProblemP2 p;
        p.gamma_th = cfg.gamma_th;
        p.radio = cfg.radio;
        p.arrays = cfg.arrays;
        for (const auto &b : initial_beliefs(cfg))
        {
            const auto s = predict_state({b.phi, b.d, b.v}, cfg.dt, cfg.noise);
            p.vehicles.push_back(make_perf_model(s.phi, s.d, cfg.noise.var_phi, cfg.beta0, cfg.beta_h(), cfg.radio,
                                                 cfg.arrays));
        }
        return p;
    }
}

#endif
