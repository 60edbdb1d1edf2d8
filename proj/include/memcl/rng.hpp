/*
 * Copyright 2026 memcl contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace memcl {

/// Deterministic stream-splittable random number generator (xoshiro256++
/// seeded through splitmix64). All simulation randomness flows through this
/// class so that a (seed, config) pair reproduces a run bit-for-bit and
/// substreams (weight init, encoding, evaluation, permutations) can be
/// derived without perturbing each other.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept { reseed(seed); }

    void reseed(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& s : state_) s = splitmix(x);
        has_spare_ = false;
        spare_ = 0.0;
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform float in [0, 1).
    float uniform_float() noexcept { return static_cast<float>(next() >> 40) * 0x1.0p-24f; }

    /// Uniform double in [lo, hi).
    double uniform_in(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Gaussian via Box-Muller; the second deviate of each pair is cached.
    double normal(double mean, double stddev) noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return mean + stddev * spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return mean + stddev * (radius * std::cos(angle));
    }

    /// Uniform integer in [0, bound); exact (rejection sampling), bound >= 1.
    std::uint32_t below(std::uint32_t bound) noexcept {
        std::uint64_t x = next() >> 32;
        std::uint64_t m = x * bound;
        auto low = static_cast<std::uint32_t>(m);
        if (low < bound) {
            const std::uint32_t cutoff = std::uint32_t(-bound) % bound;
            while (low < cutoff) {
                x = next() >> 32;
                m = x * bound;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    /// Independent substream; derived state does not advance this generator.
    Rng derive(std::uint64_t stream) const noexcept {
        const std::uint64_t tag = 0x9E3779B97F4A7C15ULL * (stream + 1);
        return Rng(state_[0] ^ rotl(state_[2], 29) ^ tag);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t v, int k) noexcept {
        return (v << k) | (v >> (64 - k));
    }

    static constexpr std::uint64_t splitmix(std::uint64_t& x) noexcept {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Fisher-Yates shuffle driven by Rng (std::shuffle is not seed-stable
/// across standard library versions).
template <typename T>
void shuffle(std::vector<T>& values, Rng& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto j = rng.below(static_cast<std::uint32_t>(i));
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace memcl
