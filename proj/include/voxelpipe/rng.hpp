// Copyright 2026 The voxelpipe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VOXELPIPE_RNG_HPP
#define VOXELPIPE_RNG_HPP

#include <cstdint>

// Deterministic randomness. Partition tables, sampler draws and augmentation
// parameters must be byte-reproducible across platforms and standard-library
// versions, so the generator and the bounded/uniform draws are pinned here
// instead of using <random> distributions (whose output is
// implementation-defined).
namespace vp {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a stream index.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
}

// PCG-XSH-RR 32/64.
class Pcg32 {
public:
    explicit Pcg32(std::uint64_t seed, std::uint64_t sequence = 0xda3e39cb94b95bdbULL) {
        state_ = 0;
        inc_ = (sequence << 1u) | 1u;
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Unbiased draw in [0, bound) via rejection.
    std::uint32_t bounded(std::uint32_t bound) {
        if (bound <= 1) return 0;
        const std::uint32_t threshold = (-bound) % bound;
        for (;;) {
            const std::uint32_t r = next_u32();
            if (r >= threshold) return r % bound;
        }
    }

    std::int64_t bounded_i64(std::int64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t b = static_cast<std::uint64_t>(bound);
        const std::uint64_t threshold = (-b) % b;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return static_cast<std::int64_t>(r % b);
        }
    }

    // 53-bit uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi]; returns lo exactly when the range is collapsed.
    double uniform(double lo, double hi) {
        if (lo == hi) return lo;
        return lo + next_double() * (hi - lo);
    }

    bool coin_flip() { return (next_u32() & 1u) != 0; }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

}  // namespace vp

#endif
