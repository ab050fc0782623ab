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

// Per-frame time allocation for the interleaved sensing/communication protocol.
//
// A frame is split into K+1 slots eta_0..eta_K. Slot k-1 illuminates vehicle k
// for sensing (its echo SNR is linear in eta_{k-1}); slot k carries vehicle k's
// data. The max-min rate objective is increasing in every eta, so the problem
//
//     max_eta min_k R_k(eta_k, eta_{k-1})   s.t.  eta >= lower,  sum(eta) = 1
//
// is a monotonic optimization problem and is solved to global epsilon-optimality
// by polyblock outer approximation:
//
//   - start from the single box [lower, upper];
//   - repeatedly take the vertex z with the largest objective (an upper bound),
//     project it radially from `lower` onto sum(eta) = 1 (a feasible point, which
//     may raise the current best value CBV), and replace z by the K+1 vertices
//     z - (z_i - Phi_i) e_i that exclude the box above the projection;
//   - stop when the upper bound is within epsilon (relative) of CBV.
//
// polyblock_maximize() is generic in the objective so the benchmark protocols in
// protocol_sim.hpp reuse it with their own slot layouts.

#ifndef ISAC_TIME_ALLOCATION_HPP
#define ISAC_TIME_ALLOCATION_HPP

#include "isac/channel_geometry.hpp"
#include "isac/closed_form.hpp"
#include "isac/error.hpp"
#include "isac/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace isac
{
    struct TimeAllocation
    {
        std::vector<double> eta;

        std::size_t size() const { return eta.size(); }
        double sum() const { return std::accumulate(eta.begin(), eta.end(), 0.0); }
        double operator[](std::size_t i) const { return eta[i]; }
    };

    // Max-min rate allocation for one frame: K vehicles, K+1 slots.
    struct ProblemP2
    {
        std::vector<PerfModel> vehicles;
        double gamma_th = 1e3;
        RadioConstants radio;
        ArrayConfig arrays;

        std::size_t K() const { return vehicles.size(); }

        void validate() const
        {
            detail::require(!vehicles.empty(), ErrorKind::invalid_input, "ProblemP2: K must be >= 1");
            detail::require(gamma_th >= 0.0, ErrorKind::invalid_input, "ProblemP2: gamma_th must be >= 0");
        }
    };

    struct FeasibilityResult
    {
        double max_gamma = 0.0;
        TimeAllocation eta_star;
        bool feasible = false;
    };

    struct TraceRow
    {
        int iter = 0;
        double cbv = 0.0;
        double upper_bound = 0.0;
        std::size_t vertices = 0;
    };

    struct PolyblockOptions
    {
        double epsilon = 1e-3;
        int max_iters = 10'000;
        std::size_t max_vertices = 1'000'000;
        // Shrink each selected vertex to the smallest box that still holds every
        // feasible point better than the incumbent before projecting it.
        bool reduce_vertices = true;
        // Polish the polyblock incumbent with the exact search in refine_allocation().
        bool refine = true;
    };

    struct PolyblockResult
    {
        TimeAllocation eta;
        double value = 0.0;
        double search_value = 0.0; // CBV at termination, before refinement
        double upper_bound = 0.0;
        bool converged = false;
        int iterations = 0;
        std::vector<TraceRow> trace;
    };

    struct GridResult
    {
        bool feasible = false;
        TimeAllocation eta;
        double value = 0.0;
        std::size_t evaluated = 0;
    };

    // min_k R_k(eta_k, eta_{k-1}). Defined for any eta in [0, 1]^{K+1}, on or off the simplex.
    inline double objective(const ProblemP2 &p, std::span<const double> eta)
    {
        detail::require(eta.size() == p.K() + 1, ErrorKind::invalid_input, "objective: eta must have K+1 entries");
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k <= p.K(); ++k)
            worst = std::min(worst, rate_closed_form(eta[k], eta[k - 1], p.vehicles[k - 1]));
        return worst;
    }

    inline double objective(const ProblemP2 &p, const TimeAllocation &eta) { return objective(p, eta.eta); }

    // Minimum sensing fraction per slot so that every echo SNR reaches gamma_th; the last slot has none.
    inline std::vector<double> eta_lower_bounds(const ProblemP2 &p)
    {
        p.validate();
        std::vector<double> lower(p.K() + 1, 0.0);
        for (std::size_t k = 1; k <= p.K(); ++k)
        {
            const double full = echo_snr_closed_form(1.0, p.vehicles[k - 1], p.radio, p.arrays);
            lower[k - 1] = p.gamma_th / full;
        }
        return lower;
    }

    // upper_k = 1 - sum_{k' != k} lower_k'.
    inline std::vector<double> eta_upper_bounds(std::span<const double> lower)
    {
        const double total = std::accumulate(lower.begin(), lower.end(), 0.0);
        std::vector<double> upper(lower.size());
        for (std::size_t k = 0; k < lower.size(); ++k)
            upper[k] = std::clamp(1.0 - (total - lower[k]), 0.0, 1.0);
        return upper;
    }

    // Largest threshold for which all sensing constraints fit in one frame, and the
    // allocation attaining it: the last slot is empty and all echo SNRs are equal,
    // i.e. eta_{k-1} proportional to 1 / snr_coef_k.
    inline FeasibilityResult feasibility_max_snr(const ProblemP2 &p)
    {
        p.validate();
        const std::size_t K = p.K();
        std::vector<double> inv(K);
        for (std::size_t k = 0; k < K; ++k)
            inv[k] = 1.0 / echo_snr_closed_form(1.0, p.vehicles[k], p.radio, p.arrays);
        const double inv_sum = std::accumulate(inv.begin(), inv.end(), 0.0);

        FeasibilityResult out;
        out.max_gamma = 1.0 / inv_sum;
        out.eta_star.eta.assign(K + 1, 0.0);
        for (std::size_t k = 0; k < K; ++k)
            out.eta_star.eta[k] = inv[k] / inv_sum;
        out.feasible = p.gamma_th <= out.max_gamma;
        return out;
    }

    // Radial projection from `lower` onto sum(eta) = 1.
    inline TimeAllocation project_to_simplex(std::span<const double> eta, std::span<const double> lower)
    {
        detail::require(eta.size() == lower.size(), ErrorKind::invalid_input, "project_to_simplex: size mismatch");
        const double s = std::accumulate(eta.begin(), eta.end(), 0.0);
        const double sl = std::accumulate(lower.begin(), lower.end(), 0.0);
        if (!(s > sl))
            throw Error(ErrorKind::degenerate_projection, "project_to_simplex: sum(eta) must exceed sum(lower)");
        for (std::size_t i = 0; i < eta.size(); ++i)
            detail::require(eta[i] >= lower[i], ErrorKind::invalid_input, "project_to_simplex: eta below lower bound");
        const double scale = (1.0 - sl) / (s - sl);
        TimeAllocation out;
        out.eta.resize(eta.size());
        for (std::size_t i = 0; i < eta.size(); ++i)
            out.eta[i] = (eta[i] - lower[i]) * scale + lower[i];
        return out;
    }

    namespace detail
    {
        struct PolyVertex
        {
            std::vector<double> eta;
            double value = 0.0;
            bool alive = true;
            bool reduced = false; // eta already tightened against reduced_at
            double reduced_at = 0.0;
            std::vector<double> corner; // lower corner found by the last reduction
        };

        // Max-heap order: larger value first, then lexicographically smaller eta.
        struct VertexOrder
        {
            const std::vector<PolyVertex> *pool;
            bool operator()(std::size_t a, std::size_t b) const
            {
                const auto &va = (*pool)[a];
                const auto &vb = (*pool)[b];
                if (va.value != vb.value)
                    return va.value < vb.value;
                return std::lexicographical_compare(vb.eta.begin(), vb.eta.end(), va.eta.begin(), va.eta.end());
            }
        };

        // Tighten the box [lo, z] against incumbent value `gamma`. Any eta <= z with
        // f(eta) > gamma has eta_i >= p_i, where p_i is the smallest coordinate at
        // which f(z with z_i -> p_i) still exceeds gamma; sum(eta) <= 1 then caps
        // z_i <= 1 - sum_{j != i} p_j. Returns false when the box holds no such point.
        template <typename Objective>
        bool reduce_vertex(Objective &f, std::vector<double> &z, std::vector<double> &p, std::span<const double> lo,
                           double gamma)
        {
            const std::size_t n = z.size();
            p.assign(lo.begin(), lo.end());
            std::vector<double> probe = z;
            for (std::size_t i = 0; i < n; ++i)
            {
                probe[i] = lo[i];
                if (f(std::span<const double>(probe)) > gamma)
                {
                    probe[i] = z[i];
                    continue;
                }
                double a = lo[i];
                double b = z[i];
                for (int it = 0; it < 60 && b - a > 1e-14; ++it)
                {
                    const double m = 0.5 * (a + b);
                    probe[i] = m;
                    if (f(std::span<const double>(probe)) > gamma)
                        b = m;
                    else
                        a = m;
                }
                p[i] = a;
                probe[i] = z[i];
            }
            const double psum = std::accumulate(p.begin(), p.end(), 0.0);
            if (psum > 1.0)
                return false;
            for (std::size_t i = 0; i < n; ++i)
                z[i] = std::min(z[i], 1.0 - (psum - p[i]));
            return true;
        }

        inline bool dominates(const std::vector<double> &a, const std::vector<double> &b)
        {
            for (std::size_t i = 0; i < a.size(); ++i)
                if (a[i] < b[i])
                    return false;
            return true;
        }

        // Radial projection from `from` onto sum = 1; `from` must lie on or below the face.
        inline std::vector<double> project_from(const std::vector<double> &z, const std::vector<double> &from)
        {
            const double s = std::accumulate(z.begin(), z.end(), 0.0);
            const double sf = std::accumulate(from.begin(), from.end(), 0.0);
            const double scale = (1.0 - sf) / (s - sf);
            std::vector<double> out(z.size());
            for (std::size_t i = 0; i < z.size(); ++i)
                out[i] = std::clamp((z[i] - from[i]) * scale + from[i], from[i], z[i]);
            return out;
        }
    }

    // Polyblock maximization of an increasing function over {lower <= eta <= upper, sum(eta) = 1}.
    // Requires sum(lower) <= 1.
    // An optional feasible `incumbent` seeds CBV, which lets the vertex reduction
    // prune from the first iteration.
    template <typename Objective>
    PolyblockResult polyblock_maximize(Objective &&f, std::span<const double> lower, std::span<const double> upper,
                                       const PolyblockOptions &opts = {}, std::span<const double> incumbent = {})
    {
        detail::require(lower.size() == upper.size() && !lower.empty(), ErrorKind::invalid_input,
                        "polyblock_maximize: bound size mismatch");
        detail::require(opts.epsilon > 0.0, ErrorKind::invalid_input, "polyblock_maximize: epsilon must be > 0");
        const std::size_t n = lower.size();
        const std::vector<double> lo(lower.begin(), lower.end());
        const double sum_lower = std::accumulate(lo.begin(), lo.end(), 0.0);
        detail::require(sum_lower <= 1.0 + 1e-12, ErrorKind::invalid_input, "polyblock_maximize: sum(lower) > 1");

        PolyblockResult res;
        double cbv = 0.0;
        bool have_best = false;

        auto consider = [&](std::vector<double> point) {
            const double v = f(std::span<const double>(point));
            if (!have_best || v > cbv)
            {
                cbv = v;
                res.eta.eta = std::move(point);
                have_best = true;
            }
        };

        if (!incumbent.empty())
        {
            detail::require(incumbent.size() == n, ErrorKind::invalid_input, "polyblock_maximize: incumbent size");
            consider(std::vector<double>(incumbent.begin(), incumbent.end()));
        }

        // Degenerate slice: lower bounds already fill the frame.
        const double sum_upper = std::accumulate(upper.begin(), upper.end(), 0.0);
        if (sum_upper - sum_lower <= 1e-15)
        {
            consider(lo);
            res.value = cbv;
            res.upper_bound = cbv;
            res.converged = true;
            res.trace.push_back({0, cbv, cbv, 0});
            return res;
        }

        std::vector<detail::PolyVertex> pool;
        detail::VertexOrder order{&pool};
        using Heap = std::priority_queue<std::size_t, std::vector<std::size_t>, detail::VertexOrder>;
        Heap heap(order);
        std::size_t alive = 0;

        auto push_vertex = [&](detail::PolyVertex v) {
            pool.push_back(std::move(v));
            heap.push(pool.size() - 1);
            ++alive;
        };
        auto kill_top = [&]() {
            pool[heap.top()].alive = false;
            heap.pop();
            --alive;
        };
        // Discard dead entries and vertices that cannot beat the incumbent.
        auto settle = [&]() {
            while (!heap.empty() && (!pool[heap.top()].alive || (have_best && pool[heap.top()].value <= cbv)))
            {
                if (pool[heap.top()].alive)
                    kill_top();
                else
                    heap.pop();
            }
        };
        auto current_upper = [&]() {
            settle();
            return heap.empty() ? cbv : std::max(cbv, pool[heap.top()].value);
        };

        {
            detail::PolyVertex v0;
            v0.eta.assign(upper.begin(), upper.end());
            v0.value = f(std::span<const double>(v0.eta));
            push_vertex(std::move(v0));
        }
        res.trace.push_back({0, cbv, current_upper(), alive});

        int r = 0;
        while (r < opts.max_iters)
        {
            const double ub = current_upper();
            // CBV starts at zero, so the relative gap is only tested once two
            // projections have produced an incumbent.
            if (heap.empty() || (r >= 2 && (ub <= cbv || (ub - cbv) <= opts.epsilon * cbv)))
            {
                res.converged = true;
                break;
            }

            const std::size_t top = heap.top();
            std::vector<double> z = pool[top].eta;
            std::vector<double> from = lo;

            if (opts.reduce_vertices && have_best)
            {
                if (pool[top].reduced && pool[top].reduced_at == cbv)
                {
                    from = pool[top].corner;
                }
                else
                {
                    std::vector<double> corner;
                    const std::vector<double> before = z;
                    kill_top();
                    if (!detail::reduce_vertex(f, z, corner, lo, cbv))
                        continue;
                    detail::PolyVertex v;
                    v.value = (z == before) ? pool[top].value : f(std::span<const double>(z));
                    v.eta = std::move(z);
                    v.reduced = true;
                    v.reduced_at = cbv;
                    v.corner = std::move(corner);
                    if (v.value > cbv)
                        push_vertex(std::move(v));
                    continue;
                }
            }

            kill_top();
            ++r;
            const double zsum = std::accumulate(z.begin(), z.end(), 0.0);
            const double fsum = std::accumulate(from.begin(), from.end(), 0.0);

            if (zsum <= 1.0)
            {
                // Vertex already feasible: it is the best point of its own box.
                consider(z);
            }
            else if (zsum - fsum <= 1e-15)
            {
                if (fsum <= 1.0)
                    consider(from);
            }
            else
            {
                const std::vector<double> phi = detail::project_from(z, from);
                consider(phi);
                for (std::size_t i = 0; i < n; ++i)
                {
                    if (!(z[i] - phi[i] > 0.0))
                        continue;
                    std::vector<double> child = z;
                    child[i] = phi[i];
                    bool dominated = false;
                    for (const auto &w : pool)
                    {
                        if (w.alive && detail::dominates(w.eta, child))
                        {
                            dominated = true;
                            break;
                        }
                    }
                    if (dominated)
                        continue;
                    const double v = f(std::span<const double>(child));
                    if (v <= cbv)
                        continue;
                    detail::PolyVertex cv;
                    cv.eta = std::move(child);
                    cv.value = v;
                    push_vertex(std::move(cv));
                }
            }

            if (alive > opts.max_vertices)
                throw Error(ErrorKind::resource_limit,
                            "polyblock_maximize: vertex set exceeded " + std::to_string(opts.max_vertices));

            res.iterations = r;
            res.trace.push_back({r, cbv, current_upper(), alive});

            // Compact the pool once most entries are dead.
            if (pool.size() > 4096 && alive * 4 < pool.size())
            {
                std::vector<detail::PolyVertex> kept;
                kept.reserve(alive);
                for (auto &w : pool)
                    if (w.alive)
                        kept.push_back(std::move(w));
                pool = std::move(kept);
                heap = Heap(order);
                for (std::size_t i = 0; i < pool.size(); ++i)
                    heap.push(i);
            }
        }

        res.value = cbv;
        res.upper_bound = current_upper();
        if (!res.converged && res.upper_bound - cbv <= opts.epsilon * cbv)
            res.converged = true;
        return res;
    }

    // Slot layout of a max-min allocation in which user k earns
    //
    //     eta[comm_slot[k]] * efficiency_k(eta[sense_slot[k]]).
    //
    // A user's sensing slot is either a dedicated slot or the communication slot of
    // an earlier user, which covers both the interleaved protocol and plain time division.
    struct SlotLayout
    {
        std::size_t num_slots = 0;
        std::vector<std::size_t> comm_slot;
        std::vector<std::size_t> sense_slot;
        std::vector<double> lower;

        std::size_t users() const { return comm_slot.size(); }

        void validate() const
        {
            detail::require(users() >= 1 && sense_slot.size() == users() && lower.size() == num_slots,
                            ErrorKind::invalid_input, "SlotLayout: inconsistent sizes");
            std::vector<int> owner(num_slots, -1);
            for (std::size_t k = 0; k < users(); ++k)
            {
                detail::require(comm_slot[k] < num_slots && owner[comm_slot[k]] < 0, ErrorKind::invalid_input,
                                "SlotLayout: communication slots must be distinct and in range");
                owner[comm_slot[k]] = static_cast<int>(k);
            }
            for (std::size_t k = 0; k < users(); ++k)
            {
                const std::size_t s = sense_slot[k];
                detail::require(s < num_slots && s != comm_slot[k], ErrorKind::invalid_input,
                                "SlotLayout: bad sensing slot");
                detail::require(owner[s] < static_cast<int>(k), ErrorKind::invalid_input,
                                "SlotLayout: sensing slot must be dedicated or an earlier user's data slot");
            }
            for (double l : lower)
                detail::require(l >= 0.0 && std::isfinite(l), ErrorKind::invalid_input,
                                "SlotLayout: lower bounds must be finite and >= 0");
        }
    };

    // K+1 slots; vehicle k is sensed in slot k-1 and served in slot k.
    inline SlotLayout interleaved_layout(std::vector<double> lower)
    {
        detail::require(lower.size() >= 2, ErrorKind::invalid_input, "interleaved_layout: need K+1 >= 2 slots");
        SlotLayout lay;
        lay.num_slots = lower.size();
        for (std::size_t k = 1; k < lay.num_slots; ++k)
        {
            lay.comm_slot.push_back(k);
            lay.sense_slot.push_back(k - 1);
        }
        lay.lower = std::move(lower);
        return lay;
    }

    // 2K slots [s_1..s_K, c_1..c_K]; every vehicle has its own sensing slot.
    inline SlotLayout time_division_layout(std::span<const double> sense_lower)
    {
        const std::size_t K = sense_lower.size();
        detail::require(K >= 1, ErrorKind::invalid_input, "time_division_layout: K must be >= 1");
        SlotLayout lay;
        lay.num_slots = 2 * K;
        lay.lower.assign(2 * K, 0.0);
        for (std::size_t k = 0; k < K; ++k)
        {
            lay.sense_slot.push_back(k);
            lay.comm_slot.push_back(K + k);
            lay.lower[k] = sense_lower[k];
        }
        return lay;
    }

    template <typename Efficiency>
    double layout_objective(const SlotLayout &lay, Efficiency &eff, std::span<const double> eta)
    {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < lay.users(); ++k)
        {
            const double own = eta[lay.comm_slot[k]];
            worst = std::min(worst, own == 0.0 ? 0.0 : own * eff(k, eta[lay.sense_slot[k]]));
        }
        return worst;
    }

    namespace detail
    {
        // Smallest allocation reaching a common rate t, given the dedicated-slot values.
        template <typename Efficiency>
        class LayoutFill
        {
          public:
            LayoutFill(const SlotLayout &lay, Efficiency &eff) : lay_(lay), eff_(eff), is_comm_(lay.num_slots, false)
            {
                for (std::size_t s : lay.comm_slot)
                    is_comm_[s] = true;
                for (std::size_t s = 0; s < lay.num_slots; ++s)
                    if (!is_comm_[s])
                        free_.push_back(s);
                sum_lower_ = std::accumulate(lay.lower.begin(), lay.lower.end(), 0.0);
            }

            const std::vector<std::size_t> &free_slots() const { return free_; }

            double range_hi(std::size_t slot) const { return std::max(lay_.lower[slot], 1.0 - (sum_lower_ - lay_.lower[slot])); }

            // Fills eta from the dedicated values x and returns sum(eta) (infinite if t is unreachable).
            double fill(double t, std::span<const double> x, std::vector<double> &eta) const
            {
                eta = lay_.lower;
                for (std::size_t i = 0; i < free_.size(); ++i)
                    eta[free_[i]] = x[i];
                for (std::size_t k = 0; k < lay_.users(); ++k)
                {
                    const double e = eff_(k, eta[lay_.sense_slot[k]]);
                    if (!(e > 0.0))
                        return std::numeric_limits<double>::infinity();
                    eta[lay_.comm_slot[k]] = std::max(lay_.lower[lay_.comm_slot[k]], t / e);
                }
                return std::accumulate(eta.begin(), eta.end(), 0.0);
            }

            // Coordinate-wise minimization of the filled sum over the dedicated values.
            double min_total(double t, std::vector<double> &x) const
            {
                std::vector<double> eta;
                const int sweeps = free_.size() > 1 ? 3 : 1;
                for (int sweep = 0; sweep < sweeps; ++sweep)
                {
                    for (std::size_t i = 0; i < free_.size(); ++i)
                    {
                        auto total_at = [&](double v) {
                            x[i] = v;
                            return fill(t, x, eta);
                        };
                        x[i] = minimize_1d(total_at, lay_.lower[free_[i]], range_hi(free_[i]));
                    }
                }
                return fill(t, x, eta);
            }

          private:
            // Coarse scan, then golden section inside the best bracket.
            template <typename G>
            static double minimize_1d(G &g, double a, double b)
            {
                if (!(b > a))
                    return a;
                constexpr int scan = 32;
                int best = 0;
                double best_val = std::numeric_limits<double>::infinity();
                for (int j = 0; j <= scan; ++j)
                {
                    const double v = g(a + (b - a) * j / scan);
                    if (v < best_val)
                    {
                        best_val = v;
                        best = j;
                    }
                }
                double lo = a + (b - a) * std::max(0, best - 1) / scan;
                double hi = a + (b - a) * std::min(scan, best + 1) / scan;
                const double r = 0.5 * (std::sqrt(5.0) - 1.0);
                double c = hi - r * (hi - lo);
                double d = lo + r * (hi - lo);
                double gc = g(c);
                double gd = g(d);
                for (int it = 0; it < 100 && hi - lo > 1e-15; ++it)
                {
                    if (gc <= gd)
                    {
                        hi = d;
                        d = c;
                        gd = gc;
                        c = hi - r * (hi - lo);
                        gc = g(c);
                    }
                    else
                    {
                        lo = c;
                        c = d;
                        gc = gd;
                        d = lo + r * (hi - lo);
                        gd = g(d);
                    }
                }
                const double mid = 0.5 * (lo + hi);
                const double anchor = a + (b - a) * best / scan;
                return g(mid) <= best_val ? mid : anchor;
            }

            const SlotLayout &lay_;
            Efficiency &eff_;
            std::vector<bool> is_comm_;
            std::vector<std::size_t> free_;
            double sum_lower_ = 0.0;
        };
    }

    struct RefineResult
    {
        std::vector<double> eta;
        double value = 0.0;
        bool improved = false;
    };

    // Exact polish of a feasible allocation. Because each rate is linear in its own
    // data slot, the best allocation for a common rate t is the smallest one reaching
    // t, found by minimizing over the dedicated sensing slots; bisection on t then
    // locates the largest reachable common rate. The start point is returned
    // unchanged unless the polish improves on it.
    template <typename Efficiency>
    RefineResult refine_allocation(const SlotLayout &lay, Efficiency &eff, std::span<const double> start)
    {
        lay.validate();
        detail::require(start.size() == lay.num_slots, ErrorKind::invalid_input, "refine_allocation: size mismatch");
        RefineResult out;
        out.eta.assign(start.begin(), start.end());
        out.value = layout_objective(lay, eff, start);

        const detail::LayoutFill<Efficiency> filler(lay, eff);
        const auto &free = filler.free_slots();
        std::vector<double> x(free.size());
        for (std::size_t i = 0; i < free.size(); ++i)
            x[i] = std::max(start[free[i]], lay.lower[free[i]]);

        std::vector<double> x_lo = x;
        double lo = std::max(0.0, out.value);
        if (filler.min_total(lo, x_lo) > 1.0)
            return out;
        double hi = std::max(lo, 1e-12);
        std::vector<double> x_hi = x_lo;
        for (int it = 0; it < 200; ++it)
        {
            hi *= 2.0;
            x_hi = x_lo;
            if (filler.min_total(hi, x_hi) > 1.0)
                break;
        }
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            std::vector<double> xm = x_lo;
            if (filler.min_total(mid, xm) <= 1.0)
            {
                lo = mid;
                x_lo = std::move(xm);
            }
            else
            {
                hi = mid;
            }
        }

        std::vector<double> eta;
        const double total = filler.fill(lo, x_lo, eta);
        if (!(total <= 1.0))
            return out;
        // Leftover time goes to the last user's data slot, which only raises its rate.
        eta[lay.comm_slot.back()] += 1.0 - total;
        const double value = layout_objective(lay, eff, eta);
        if (value > out.value)
        {
            out.eta = std::move(eta);
            out.value = value;
            out.improved = true;
        }
        return out;
    }

    namespace detail
    {
        // Every user owns a distinct dedicated sensing slot and a data slot, and no slot is left over.
        inline bool is_separable(const SlotLayout &lay)
        {
            if (lay.num_slots != 2 * lay.users())
                return false;
            std::vector<int> uses(lay.num_slots, 0);
            for (std::size_t k = 0; k < lay.users(); ++k)
            {
                ++uses[lay.comm_slot[k]];
                ++uses[lay.sense_slot[k]];
            }
            return std::all_of(uses.begin(), uses.end(), [](int u) { return u == 1; });
        }

        // Best rate of user k from a total share T split between its own sensing and
        // data slots: max over s of (T - s) eff(k, s). Golden section, memoized per user.
        template <typename Efficiency>
        class SplitRate
        {
          public:
            SplitRate(const SlotLayout &lay, Efficiency &eff) : lay_(lay), eff_(eff), memo_(lay.users()) {}

            double rate(std::size_t k, double T, double *s_best = nullptr)
            {
                const double lo_s = lay_.lower[lay_.sense_slot[k]];
                const double hi_s = T - lay_.lower[lay_.comm_slot[k]];
                if (!(hi_s >= lo_s))
                    return 0.0;
                if (s_best == nullptr)
                {
                    auto it = memo_[k].find(bits_of(T));
                    if (it != memo_[k].end())
                        return it->second;
                }
                auto g = [&](double s) { return T - s <= 0.0 ? 0.0 : (T - s) * eff_(k, s); };
                double a = lo_s;
                double b = hi_s;
                const double r = 0.5 * (std::sqrt(5.0) - 1.0);
                double c = b - r * (b - a);
                double d = a + r * (b - a);
                double gc = g(c);
                double gd = g(d);
                for (int it = 0; it < 60 && b - a > 1e-13 * std::max(1.0, T); ++it)
                {
                    if (gc >= gd)
                    {
                        b = d;
                        d = c;
                        gd = gc;
                        c = b - r * (b - a);
                        gc = g(c);
                    }
                    else
                    {
                        a = c;
                        c = d;
                        gc = gd;
                        d = a + r * (b - a);
                        gd = g(d);
                    }
                }
                double s = 0.5 * (a + b);
                double best = g(s);
                if (const double g0 = g(lo_s); g0 >= best)
                {
                    best = g0;
                    s = lo_s;
                }
                if (s_best != nullptr)
                    *s_best = s;
                memo_[k].emplace(bits_of(T), best);
                return best;
            }

          private:
            const SlotLayout &lay_;
            Efficiency &eff_;
            std::vector<std::unordered_map<std::uint64_t, double>> memo_;
        };
    }

    // Polyblock search followed by the exact polish. The caller checks feasibility.
    //
    // When every user has its own sensing and data slots, polyblock runs over the K
    // per-user shares T_k = s_k + c_k instead of all 2K fractions. The objective
    // min_k max_s (T_k - s) eff_k(s) is still increasing in T, and the search stays
    // in K dimensions, where outer approximation converges quickly.
    template <typename Efficiency>
    PolyblockResult solve_layout(const SlotLayout &lay, Efficiency &eff, const PolyblockOptions &opts = {})
    {
        lay.validate();
        const double sum_lower = std::accumulate(lay.lower.begin(), lay.lower.end(), 0.0);
        if (sum_lower > 1.0)
            throw Error(ErrorKind::infeasible_problem, "solve_layout: lower bounds exceed one frame");
        std::vector<double> seed;
        if (opts.refine)
        {
            // Lower corner plus an even share of the slack, polished.
            seed = lay.lower;
            for (auto &e : seed)
                e += (1.0 - sum_lower) / static_cast<double>(seed.size());
            seed = refine_allocation(lay, eff, seed).eta;
        }

        PolyblockResult res;
        if (detail::is_separable(lay))
        {
            const std::size_t K = lay.users();
            detail::SplitRate<Efficiency> split(lay, eff);
            std::vector<double> agg_lower(K);
            std::vector<double> agg_seed;
            for (std::size_t k = 0; k < K; ++k)
            {
                agg_lower[k] = lay.lower[lay.sense_slot[k]] + lay.lower[lay.comm_slot[k]];
                if (!seed.empty())
                    agg_seed.push_back(seed[lay.sense_slot[k]] + seed[lay.comm_slot[k]]);
            }
            auto g = [&](std::span<const double> T) {
                double worst = std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k < K; ++k)
                    worst = std::min(worst, split.rate(k, T[k]));
                return worst;
            };
            const auto upper = eta_upper_bounds(agg_lower);
            res = polyblock_maximize(g, agg_lower, upper, opts, agg_seed);
            std::vector<double> eta(lay.num_slots, 0.0);
            for (std::size_t k = 0; k < K; ++k)
            {
                const double T = res.eta.eta[k];
                double s = lay.lower[lay.sense_slot[k]];
                split.rate(k, T, &s);
                eta[lay.sense_slot[k]] = s;
                eta[lay.comm_slot[k]] = T - s;
            }
            res.eta.eta = std::move(eta);
            res.value = layout_objective(lay, eff, res.eta.eta);
        }
        else
        {
            const auto upper = eta_upper_bounds(lay.lower);
            auto f = [&](std::span<const double> eta) { return layout_objective(lay, eff, eta); };
            res = polyblock_maximize(f, lay.lower, upper, opts, seed);
        }
        res.search_value = res.value;
        if (opts.refine && !res.eta.eta.empty())
        {
            auto ref = refine_allocation(lay, eff, res.eta.eta);
            if (ref.improved)
            {
                res.eta.eta = std::move(ref.eta);
                res.value = ref.value;
            }
        }
        return res;
    }

    // Globally optimal allocation for one frame: polyblock to relative gap epsilon, then
    // the exact polish. Throws InfeasibleError when the sensing thresholds cannot
    // all be met.
    inline PolyblockResult polyblock_solve(const ProblemP2 &p, const PolyblockOptions &opts = {})
    {
        const auto feas = feasibility_max_snr(p);
        const auto lower = eta_lower_bounds(p);
        const double sum_lower = std::accumulate(lower.begin(), lower.end(), 0.0);
        if (!feas.feasible || sum_lower > 1.0)
            throw InfeasibleError(p.gamma_th, feas.max_gamma);
        const auto lay = interleaved_layout(lower);
        auto eff = [&p](std::size_t k, double assist) { return spectral_efficiency(assist, p.vehicles[k]); };
        return solve_layout(lay, eff, opts);
    }

    namespace detail
    {
        template <typename Visit>
        void for_each_composition(std::vector<int> &parts, std::size_t pos, int remaining, Visit &visit)
        {
            if (pos + 1 == parts.size())
            {
                parts[pos] = remaining;
                visit(parts);
                return;
            }
            for (int v = 0; v <= remaining; ++v)
            {
                parts[pos] = v;
                for_each_composition(parts, pos + 1, remaining - v, visit);
            }
        }
    }

    // Exhaustive search over the simplex grid {eta : eta_i = m_i / resolution, sum m_i = resolution}
    // restricted to eta >= lower.
    template <typename Objective>
    GridResult grid_search(Objective &&f, std::span<const double> lower, int resolution)
    {
        detail::require(resolution >= 1, ErrorKind::invalid_input, "grid_search: resolution must be >= 1");
        const std::size_t n = lower.size();
        GridResult best;
        std::vector<int> parts(n, 0);
        std::vector<double> eta(n, 0.0);
        const double step = 1.0 / static_cast<double>(resolution);
        auto visit = [&](const std::vector<int> &m) {
            for (std::size_t i = 0; i < n; ++i)
            {
                eta[i] = m[i] * step;
                if (eta[i] < lower[i])
                    return;
            }
            ++best.evaluated;
            const double v = f(std::span<const double>(eta));
            if (!best.feasible || v > best.value)
            {
                best.feasible = true;
                best.value = v;
                best.eta.eta = eta;
            }
        };
        detail::for_each_composition(parts, 0, resolution, visit);
        return best;
    }

    // Brute-force certificate for small K.
    inline GridResult grid_oracle(const ProblemP2 &p, int resolution)
    {
        detail::require(p.K() <= 3, ErrorKind::invalid_input, "grid_oracle: limited to K <= 3");
        const auto lower = eta_lower_bounds(p);
        return grid_search([&p](std::span<const double> eta) { return objective(p, eta); }, lower, resolution);
    }
}

#endif
