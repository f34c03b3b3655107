// Copyright 2026 The dynpec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace dynpec {

/// SplitMix64 finalizer. Used to derive independent streams from
/// (master seed, instance, shot) tuples.
constexpr uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr uint64_t stream_seed(uint64_t master, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    return mix64(mix64(mix64(master ^ 0x6A09E667F3BCC909ULL) ^ a) ^ mix64(b + 0x3C6EF372FE94F82BULL) ^ c);
}

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator so it can be
/// handed to <random> distributions; seeding is a handful of SplitMix64 steps,
/// which makes per-instance and per-shot streams cheap to create.
class Rng {
   public:
    using result_type = uint64_t;

    explicit Rng(uint64_t seed = 0) { reseed(seed); }

    void reseed(uint64_t seed) {
        for (auto &w : s_) {
            seed += 0x9E3779B97F4A7C15ULL;
            w = mix64(seed);
        }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    uint64_t below(uint64_t bound) {
        // Lemire's multiply-shift; bias is negligible for the tiny bounds used here.
        return static_cast<uint64_t>((static_cast<unsigned __int128>((*this)()) * bound) >> 64);
    }

    /// Number of failures before the first success of a Bernoulli(p) process.
    uint64_t geometric(double p) {
        if (p >= 1.0) return 0;
        double u = uniform();
        double g = std::floor(std::log1p(-u) / std::log1p(-p));
        if (!(g < 1.8e19)) return std::numeric_limits<uint64_t>::max();
        return static_cast<uint64_t>(g);
    }

   private:
    static constexpr uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

}  // namespace dynpec
