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

#ifndef VOXELPIPE_KERNELS_KERNELS_HPP
#define VOXELPIPE_KERNELS_KERNELS_HPP

#include <cstdint>
#include <span>

// Voxel-array arithmetic kernels.
//
// Every kernel exists in a scalar reference form (kernels::scalar) and, on
// x86-64, an AVX2 form (kernels::avx2). The unqualified entry points dispatch
// at runtime on CPU capability; VOXELPIPE_NO_SIMD=1 or force_isa() pins the
// scalar path. The two paths are equivalence-tested: bit-exact for
// elementwise maps and integer counts, and to accumulation-order tolerance
// for floating reductions (which always accumulate in f64 regardless of
// path).
namespace vp::kernels {

struct Confusion {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;
    std::uint64_t total() const { return tp + fp + fn + tn; }
};

struct DiffMoments {
    double sum_abs = 0.0;     // sum |a-b|
    double sum_signed = 0.0;  // sum (a-b)
    double sum_sq = 0.0;      // sum (a-b)^2
    std::uint64_t count = 0;
};

struct CenteredMoments {
    double m2 = 0.0;  // sum (x-mean)^2
    double m3 = 0.0;  // sum (x-mean)^3
    std::uint64_t count = 0;
};

struct MinMax {
    float min = 0.0f;
    float max = 0.0f;
};

enum class Isa { scalar, avx2 };

// The ISA the unqualified entry points currently dispatch to.
Isa active_isa();
// Override dispatch (tests); Isa::avx2 is ignored when the CPU lacks it.
void force_isa(Isa isa);
bool avx2_available();

namespace scalar {
double sum(std::span<const float> x);
double sum_masked(std::span<const float> x, std::span<const std::uint8_t> mask, std::uint64_t* count);
CenteredMoments centered_moments(std::span<const float> x, double mean);
CenteredMoments centered_moments_masked(std::span<const float> x, std::span<const std::uint8_t> mask,
                                        double mean);
MinMax minmax(std::span<const float> x);
Confusion confusion(std::span<const std::uint8_t> seg, std::span<const std::uint8_t> ref);
DiffMoments diff_moments(std::span<const float> a, std::span<const float> b);
DiffMoments diff_moments_masked(std::span<const float> a, std::span<const float> b,
                                std::span<const std::uint8_t> mask);
void normalize_apply(std::span<const float> in, std::span<float> out, float mean, float inv_std);
void threshold_gt(std::span<const float> in, std::span<std::uint8_t> out, float threshold);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double sum(std::span<const float> x);
double sum_masked(std::span<const float> x, std::span<const std::uint8_t> mask, std::uint64_t* count);
CenteredMoments centered_moments(std::span<const float> x, double mean);
CenteredMoments centered_moments_masked(std::span<const float> x, std::span<const std::uint8_t> mask,
                                        double mean);
MinMax minmax(std::span<const float> x);
Confusion confusion(std::span<const std::uint8_t> seg, std::span<const std::uint8_t> ref);
DiffMoments diff_moments(std::span<const float> a, std::span<const float> b);
DiffMoments diff_moments_masked(std::span<const float> a, std::span<const float> b,
                                std::span<const std::uint8_t> mask);
void normalize_apply(std::span<const float> in, std::span<float> out, float mean, float inv_std);
void threshold_gt(std::span<const float> in, std::span<std::uint8_t> out, float threshold);
}  // namespace avx2
#endif

// Runtime-dispatched entry points.
double sum(std::span<const float> x);
double sum_masked(std::span<const float> x, std::span<const std::uint8_t> mask, std::uint64_t* count);
CenteredMoments centered_moments(std::span<const float> x, double mean);
CenteredMoments centered_moments_masked(std::span<const float> x, std::span<const std::uint8_t> mask,
                                        double mean);
MinMax minmax(std::span<const float> x);
Confusion confusion(std::span<const std::uint8_t> seg, std::span<const std::uint8_t> ref);
DiffMoments diff_moments(std::span<const float> a, std::span<const float> b);
DiffMoments diff_moments_masked(std::span<const float> a, std::span<const float> b,
                                std::span<const std::uint8_t> mask);
void normalize_apply(std::span<const float> in, std::span<float> out, float mean, float inv_std);
void threshold_gt(std::span<const float> in, std::span<std::uint8_t> out, float threshold);

}  // namespace vp::kernels

#endif
