// Copyright 2026 The fourierqml Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Seeded counter-based random number generator.
 *
 * The i-th raw output of a stream seeded with `s` is `mix(s + i * gamma)`
 * (SplitMix64), so streams are cheap to derive and replay exactly on any
 * platform. Distributions are implemented here rather than taken from
 * <random> because libstdc++/libc++ disagree on their algorithms.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace fourierqml {

class Rng {
  public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : counter_{seed} {}

    /// Independent generator for sub-task `stream` of a run seeded with `seed`.
    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        return Rng{mix(seed ^ mix(stream + kGamma))};
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }
    result_type operator()() { return next_u64(); }

    std::uint64_t next_u64() {
        counter_ += kGamma;
        return mix(counter_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Uniform integer in [0, n). Rejection sampling removes modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = max() - max() % n;
        std::uint64_t v = next_u64();
        while (v >= limit) {
            v = next_u64();
        }
        return v % n;
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t counter_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace fourierqml
