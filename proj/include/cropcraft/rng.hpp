/* Copyright 2026 The cropcraft Authors
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

#include <array>
#include <cstdint>

namespace cropcraft {

/// SplitMix64 step; used for seed derivation and cheap stable hashing.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives a child seed from (seed, index) with one SplitMix64 pass.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0xA0761D6478BD642FULL + index);
    return splitmix64(s);
}

/// Philox4x32-10 counter-based generator.
///
/// The (seed, stream) pair selects a statistically independent sequence;
/// consuming values advances a 128-bit counter. Because the state is just
/// (key, counter), per-sample streams can be created in any order on any
/// thread and always produce the same values, which is what makes the
/// Monte Carlo results independent of the parallelism degree.
class Philox {
  public:
    Philox(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0, 0} {}

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            block_ = generate(ctr_, key_);
            ++ctr_[2];  // block counter; 2^32 blocks per stream
            if (ctr_[2] == 0) ++ctr_[3];
            pos_ = 0;
        }
        return block_[pos_++];
    }

    std::uint64_t next_u64() {
        std::uint64_t lo = next_u32();
        std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [a, b).
    double uniform(double a, double b) { return a + next_double() * (b - a); }

    /// Uniform double in (a, b]; mirrors next_double's half-open interval.
    double uniform_excl_incl(double a, double b) { return b - next_double() * (b - a); }

    /// Uniform integer in [0, n), n > 0. Multiply-shift; bias is O(n / 2^64).
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// One keyed block; exposed for the known-answer tests.
    static std::array<std::uint32_t, 4> generate(std::array<std::uint32_t, 4> ctr,
                                                 std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * ctr[0];
            std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

  private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 4;
};

}  // namespace cropcraft
