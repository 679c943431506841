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

#include <cmath>
#include <limits>

#include "voxelpipe/kernels/kernels.hpp"

// Reference kernels. Plain loops, f64 accumulation; the SIMD variants are
// validated against these.
namespace vp::kernels::scalar {

double sum(std::span<const float> x) {
    double acc = 0.0;
    for (const float v : x) acc += static_cast<double>(v);
    return acc;
}

double sum_masked(std::span<const float> x, std::span<const std::uint8_t> mask, std::uint64_t* count) {
    double acc = 0.0;
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (mask[i] != 0) {
            acc += static_cast<double>(x[i]);
            ++n;
        }
    }
    if (count != nullptr) *count = n;
    return acc;
}

CenteredMoments centered_moments(std::span<const float> x, double mean) {
    CenteredMoments m;
    for (const float v : x) {
        const double d = static_cast<double>(v) - mean;
        const double d2 = d * d;
        m.m2 += d2;
        m.m3 += d2 * d;
    }
    m.count = x.size();
    return m;
}

CenteredMoments centered_moments_masked(std::span<const float> x, std::span<const std::uint8_t> mask,
                                        double mean) {
    CenteredMoments m;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (mask[i] != 0) {
            const double d = static_cast<double>(x[i]) - mean;
            const double d2 = d * d;
            m.m2 += d2;
            m.m3 += d2 * d;
            ++m.count;
        }
    }
    return m;
}

MinMax minmax(std::span<const float> x) {
    MinMax r{std::numeric_limits<float>::max(), std::numeric_limits<float>::lowest()};
    for (const float v : x) {
        if (v < r.min) r.min = v;
        if (v > r.max) r.max = v;
    }
    return r;
}

Confusion confusion(std::span<const std::uint8_t> seg, std::span<const std::uint8_t> ref) {
    Confusion c;
    for (std::size_t i = 0; i < seg.size(); ++i) {
        const bool s = seg[i] != 0;
        const bool r = ref[i] != 0;
        c.tp += static_cast<std::uint64_t>(s && r);
        c.fp += static_cast<std::uint64_t>(s && !r);
        c.fn += static_cast<std::uint64_t>(!s && r);
    }
    c.tn = seg.size() - c.tp - c.fp - c.fn;
    return c;
}

DiffMoments diff_moments(std::span<const float> a, std::span<const float> b) {
    DiffMoments m;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        m.sum_abs += std::abs(d);
        m.sum_signed += d;
        m.sum_sq += d * d;
    }
    m.count = a.size();
    return m;
}

DiffMoments diff_moments_masked(std::span<const float> a, std::span<const float> b,
                                std::span<const std::uint8_t> mask) {
    DiffMoments m;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (mask[i] != 0) {
            const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
            m.sum_abs += std::abs(d);
            m.sum_signed += d;
            m.sum_sq += d * d;
            ++m.count;
        }
    }
    return m;
}

void normalize_apply(std::span<const float> in, std::span<float> out, float mean, float inv_std) {
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = (in[i] - mean) * inv_std;
    }
}

void threshold_gt(std::span<const float> in, std::span<std::uint8_t> out, float threshold) {
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = in[i] > threshold ? 1 : 0;
    }
}

}  // namespace vp::kernels::scalar
