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

#ifndef ISAC_RANDOM_HPP
#define ISAC_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace isac
{
    // Name of the generator recorded in output metadata.
    inline constexpr const char *rng_algorithm = "mt19937_64/splitmix64-seeded/box-muller";

    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    inline std::uint64_t bits_of(double v)
    {
        std::uint64_t b;
        std::memcpy(&b, &v, sizeof b);
        return b;
    }

    // Seedable, splittable random stream.
    //
    // The engine is std::mt19937_64, whose output sequence is fixed by the standard.
    // Uniform and Gaussian variates are derived by hand (53-bit mantissa, Box-Muller)
    // because the std distributions are implementation defined, so a given seed
    // reproduces bit-identical draws on every platform.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

        std::uint64_t seed() const { return seed_; }

        // Independent child stream identified by a tag sequence.
        Rng substream(std::initializer_list<std::uint64_t> tags) const
        {
            std::uint64_t s = splitmix64(seed_ ^ 0x5851f42d4c957f2dULL);
            for (auto t : tags)
                s = splitmix64(s ^ splitmix64(t));
            return Rng(s);
        }

        Rng substream(std::uint64_t tag) const { return substream({tag}); }

        // Uniform on [0, 1).
        double uniform()
        {
            return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        }

        // Uniform on (0, 1].
        double uniform_open_zero() { return 1.0 - uniform(); }

        double normal()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            const double u1 = uniform_open_zero();
            const double u2 = uniform();
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double t = 2.0 * std::numbers::pi * u2;
            spare_ = r * std::sin(t);
            has_spare_ = true;
            return r * std::cos(t);
        }

        double normal(double mean, double stddev) { return mean + stddev * normal(); }

    private:
        std::uint64_t seed_;
        std::mt19937_64 engine_;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };

    // Pairwise (cascade) summation; result does not depend on thread scheduling.
    inline double pairwise_sum(std::span<const double> v)
    {
        if (v.size() <= 16)
        {
            double s = 0.0;
            for (double x : v)
                s += x;
            return s;
        }
        const std::size_t half = v.size() / 2;
        return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
    }

    struct MeanEstimate
    {
        double mean = 0.0;
        double std_error = 0.0;
        std::size_t samples = 0;
    };

    inline MeanEstimate estimate_mean(std::span<const double> samples)
    {
        MeanEstimate est;
        est.samples = samples.size();
        if (samples.empty())
            return est;
        const double n = static_cast<double>(samples.size());
        est.mean = pairwise_sum(samples) / n;
        if (samples.size() > 1)
        {
            std::vector<double> sq(samples.size());
            for (std::size_t i = 0; i < samples.size(); ++i)
                sq[i] = (samples[i] - est.mean) * (samples[i] - est.mean);
            est.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
        }
        return est;
    }
}

#endif
