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

#include <atomic>
#include <cstdlib>

#include "voxelpipe/kernels/kernels.hpp"

namespace vp::kernels {

namespace {

bool detect_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    if (std::getenv("VOXELPIPE_NO_SIMD") != nullptr) return false;
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

std::atomic<Isa>& isa_state() {
    static std::atomic<Isa> isa{detect_avx2() ? Isa::avx2 : Isa::scalar};
    return isa;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Isa active_isa() { return isa_state().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (isa == Isa::avx2 && !avx2_available()) isa = Isa::scalar;
    isa_state().store(isa, std::memory_order_relaxed);
}

#if defined(__x86_64__) || defined(_M_X64)
#define VP_DISPATCH(fn, ...) \
    return active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define VP_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

double sum(std::span<const float> x) { VP_DISPATCH(sum, x); }

double sum_masked(std::span<const float> x, std::span<const std::uint8_t> mask, std::uint64_t* count) {
    VP_DISPATCH(sum_masked, x, mask, count);
}

CenteredMoments centered_moments(std::span<const float> x, double mean) {
    VP_DISPATCH(centered_moments, x, mean);
}

CenteredMoments centered_moments_masked(std::span<const float> x, std::span<const std::uint8_t> mask,
                                        double mean) {
    VP_DISPATCH(centered_moments_masked, x, mask, mean);
}

MinMax minmax(std::span<const float> x) { VP_DISPATCH(minmax, x); }

Confusion confusion(std::span<const std::uint8_t> seg, std::span<const std::uint8_t> ref) {
    VP_DISPATCH(confusion, seg, ref);
}

DiffMoments diff_moments(std::span<const float> a, std::span<const float> b) {
    VP_DISPATCH(diff_moments, a, b);
}

DiffMoments diff_moments_masked(std::span<const float> a, std::span<const float> b,
                                std::span<const std::uint8_t> mask) {
    VP_DISPATCH(diff_moments_masked, a, b, mask);
}

void normalize_apply(std::span<const float> in, std::span<float> out, float mean, float inv_std) {
    VP_DISPATCH(normalize_apply, in, out, mean, inv_std);
}

void threshold_gt(std::span<const float> in, std::span<std::uint8_t> out, float threshold) {
    VP_DISPATCH(threshold_gt, in, out, threshold);
}

#undef VP_DISPATCH

}  // namespace vp::kernels
