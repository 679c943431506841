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

// AVX2 kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be reached through the runtime dispatcher.
//
// Reductions widen each float lane to f64 before accumulating, so the only
// difference from the scalar reference is summation order. Elementwise maps
// (normalize_apply, threshold_gt) use the same per-lane operations as the
// scalar path and are bit-exact against it; FMA contraction is deliberately
// not used there.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "voxelpipe/kernels/kernels.hpp"

namespace vp::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s2 = _mm_add_pd(lo, hi);
    const __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
    return _mm_cvtsd_f64(s1);
}

// 8 mask bytes -> two 4-lane f64 multiplier vectors (1.0 where nonzero).
inline void mask_to_pd(const std::uint8_t* m, __m256d& lo, __m256d& hi) {
    const __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(m));
    const __m128i zero = _mm_setzero_si128();
    const __m128i words = _mm_unpacklo_epi8(bytes, zero);
    const __m128i d0 = _mm_unpacklo_epi16(words, zero);
    const __m128i d1 = _mm_unpackhi_epi16(words, zero);
    const __m128i one = _mm_set1_epi32(1);
    const __m128i b0 = _mm_min_epu32(d0, one);  // clamp any nonzero byte to 1
    const __m128i b1 = _mm_min_epu32(d1, one);
    lo = _mm256_cvtepi32_pd(b0);
    hi = _mm256_cvtepi32_pd(b1);
}

}  // namespace

double sum(std::span<const float> x) {
    const std::size_t n = x.size();
    const float* p = x.data();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 v = _mm256_loadu_ps(p + i);
        acc0 = _mm256_add_pd(acc0, _mm256_cvtps_pd(_mm256_castps256_ps128(v)));
        acc1 = _mm256_add_pd(acc1, _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1)));
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += static_cast<double>(p[i]);
    return acc;
}

double sum_masked(std::span<const float> x, std::span<const std::uint8_t> mask, std::uint64_t* count) {
    const std::size_t n = x.size();
    const float* p = x.data();
    const std::uint8_t* m = mask.data();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::uint64_t cnt = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d w0, w1;
        mask_to_pd(m + i, w0, w1);
        const __m256 v = _mm256_loadu_ps(p + i);
        const __m256d v0 = _mm256_cvtps_pd(_mm256_castps256_ps128(v));
        const __m256d v1 = _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1));
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(v0, w0));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(v1, w1));
        for (int k = 0; k < 8; ++k) cnt += (m[i + k] != 0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        if (m[i] != 0) {
            acc += static_cast<double>(p[i]);
            ++cnt;
        }
    }
    if (count != nullptr) *count = cnt;
    return acc;
}

CenteredMoments centered_moments(std::span<const float> x, double mean) {
    const std::size_t n = x.size();
    const float* p = x.data();
    const __m256d mu = _mm256_set1_pd(mean);
    __m256d m2a = _mm256_setzero_pd();
    __m256d m3a = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 v = _mm256_loadu_ps(p + i);
        const __m256d d0 = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(v)), mu);
        const __m256d d1 = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(v, 1)), mu);
        const __m256d d0sq = _mm256_mul_pd(d0, d0);
        const __m256d d1sq = _mm256_mul_pd(d1, d1);
        m2a = _mm256_add_pd(m2a, _mm256_add_pd(d0sq, d1sq));
        m3a = _mm256_add_pd(m3a, _mm256_add_pd(_mm256_mul_pd(d0sq, d0), _mm256_mul_pd(d1sq, d1)));
    }
    CenteredMoments m;
    m.m2 = hsum(m2a);
    m.m3 = hsum(m3a);
    for (; i < n; ++i) {
        const double d = static_cast<double>(p[i]) - mean;
        const double d2 = d * d;
        m.m2 += d2;
        m.m3 += d2 * d;
    }
    m.count = n;
    return m;
}

CenteredMoments centered_moments_masked(std::span<const float> x, std::span<const std::uint8_t> mask,
                                        double mean) {
    const std::size_t n = x.size();
    const float* p = x.data();
    const std::uint8_t* m = mask.data();
    const __m256d mu = _mm256_set1_pd(mean);
    __m256d m2a = _mm256_setzero_pd();
    __m256d m3a = _mm256_setzero_pd();
    std::uint64_t cnt = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d w0, w1;
        mask_to_pd(m + i, w0, w1);
        const __m256 v = _mm256_loadu_ps(p + i);
        const __m256d d0 =
            _mm256_mul_pd(_mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(v)), mu), w0);
        const __m256d d1 =
            _mm256_mul_pd(_mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(v, 1)), mu), w1);
        const __m256d d0sq = _mm256_mul_pd(d0, d0);
        const __m256d d1sq = _mm256_mul_pd(d1, d1);
        m2a = _mm256_add_pd(m2a, _mm256_add_pd(d0sq, d1sq));
        m3a = _mm256_add_pd(m3a, _mm256_add_pd(_mm256_mul_pd(d0sq, d0), _mm256_mul_pd(d1sq, d1)));
        for (int k = 0; k < 8; ++k) cnt += (m[i + k] != 0);
    }
    CenteredMoments r;
    r.m2 = hsum(m2a);
    r.m3 = hsum(m3a);
    for (; i < n; ++i) {
        if (m[i] != 0) {
            const double d = static_cast<double>(p[i]) - mean;
            const double d2 = d * d;
            r.m2 += d2;
            r.m3 += d2 * d;
            ++cnt;
        }
    }
    r.count = cnt;
    return r;
}

MinMax minmax(std::span<const float> x) {
    const std::size_t n = x.size();
    const float* p = x.data();
    MinMax r{std::numeric_limits<float>::max(), std::numeric_limits<float>::lowest()};
    std::size_t i = 0;
    if (n >= 8) {
        __m256 vmin = _mm256_loadu_ps(p);
        __m256 vmax = vmin;
        for (i = 8; i + 8 <= n; i += 8) {
            const __m256 v = _mm256_loadu_ps(p + i);
            vmin = _mm256_min_ps(vmin, v);
            vmax = _mm256_max_ps(vmax, v);
        }
        alignas(32) float tmp[8];
        _mm256_store_ps(tmp, vmin);
        for (float t : tmp) r.min = t < r.min ? t : r.min;
        _mm256_store_ps(tmp, vmax);
        for (float t : tmp) r.max = t > r.max ? t : r.max;
    }
    for (; i < n; ++i) {
        if (p[i] < r.min) r.min = p[i];
        if (p[i] > r.max) r.max = p[i];
    }
    return r;
}

Confusion confusion(std::span<const std::uint8_t> seg, std::span<const std::uint8_t> ref) {
    const std::size_t n = seg.size();
    const std::uint8_t* s = seg.data();
    const std::uint8_t* r = ref.data();
    Confusion c;
    const __m256i zero = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i vs = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(s + i));
        const __m256i vr = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(r + i));
        const auto ms0 = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(vs, zero)));
        const auto mr0 = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(vr, zero)));
        c.tp += static_cast<std::uint64_t>(__builtin_popcount(~ms0 & ~mr0));
        c.fp += static_cast<std::uint64_t>(__builtin_popcount(~ms0 & mr0));
        c.fn += static_cast<std::uint64_t>(__builtin_popcount(ms0 & ~mr0));
    }
    for (; i < n; ++i) {
        const bool sv = s[i] != 0;
        const bool rv = r[i] != 0;
        c.tp += static_cast<std::uint64_t>(sv && rv);
        c.fp += static_cast<std::uint64_t>(sv && !rv);
        c.fn += static_cast<std::uint64_t>(!sv && rv);
    }
    c.tn = n - c.tp - c.fp - c.fn;
    return c;
}

DiffMoments diff_moments(std::span<const float> a, std::span<const float> b) {
    const std::size_t n = a.size();
    const float* pa = a.data();
    const float* pb = b.data();
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d sabs = _mm256_setzero_pd();
    __m256d ssig = _mm256_setzero_pd();
    __m256d ssq = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 va = _mm256_loadu_ps(pa + i);
        const __m256 vb = _mm256_loadu_ps(pb + i);
        const __m256d d0 = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(va)),
                                         _mm256_cvtps_pd(_mm256_castps256_ps128(vb)));
        const __m256d d1 = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(va, 1)),
                                         _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1)));
        sabs = _mm256_add_pd(sabs, _mm256_add_pd(_mm256_andnot_pd(signmask, d0),
                                                 _mm256_andnot_pd(signmask, d1)));
        ssig = _mm256_add_pd(ssig, _mm256_add_pd(d0, d1));
        ssq = _mm256_add_pd(ssq, _mm256_add_pd(_mm256_mul_pd(d0, d0), _mm256_mul_pd(d1, d1)));
    }
    DiffMoments m;
    m.sum_abs = hsum(sabs);
    m.sum_signed = hsum(ssig);
    m.sum_sq = hsum(ssq);
    for (; i < n; ++i) {
        const double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
        m.sum_abs += std::abs(d);
        m.sum_signed += d;
        m.sum_sq += d * d;
    }
    m.count = n;
    return m;
}

DiffMoments diff_moments_masked(std::span<const float> a, std::span<const float> b,
                                std::span<const std::uint8_t> mask) {
    const std::size_t n = a.size();
    const float* pa = a.data();
    const float* pb = b.data();
    const std::uint8_t* pm = mask.data();
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d sabs = _mm256_setzero_pd();
    __m256d ssig = _mm256_setzero_pd();
    __m256d ssq = _mm256_setzero_pd();
    std::uint64_t cnt = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d w0, w1;
        mask_to_pd(pm + i, w0, w1);
        const __m256 va = _mm256_loadu_ps(pa + i);
        const __m256 vb = _mm256_loadu_ps(pb + i);
        const __m256d d0 = _mm256_mul_pd(_mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(va)),
                                                       _mm256_cvtps_pd(_mm256_castps256_ps128(vb))),
                                         w0);
        const __m256d d1 = _mm256_mul_pd(_mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(va, 1)),
                                                       _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1))),
                                         w1);
        sabs = _mm256_add_pd(sabs, _mm256_add_pd(_mm256_andnot_pd(signmask, d0),
                                                 _mm256_andnot_pd(signmask, d1)));
        ssig = _mm256_add_pd(ssig, _mm256_add_pd(d0, d1));
        ssq = _mm256_add_pd(ssq, _mm256_add_pd(_mm256_mul_pd(d0, d0), _mm256_mul_pd(d1, d1)));
        for (int k = 0; k < 8; ++k) cnt += (pm[i + k] != 0);
    }
    DiffMoments m;
    m.sum_abs = hsum(sabs);
    m.sum_signed = hsum(ssig);
    m.sum_sq = hsum(ssq);
    for (; i < n; ++i) {
        if (pm[i] != 0) {
            const double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
            m.sum_abs += std::abs(d);
            m.sum_signed += d;
            m.sum_sq += d * d;
            ++cnt;
        }
    }
    m.count = cnt;
    return m;
}

void normalize_apply(std::span<const float> in, std::span<float> out, float mean, float inv_std) {
    const std::size_t n = in.size();
    const float* p = in.data();
    float* q = out.data();
    const __m256 mu = _mm256_set1_ps(mean);
    const __m256 inv = _mm256_set1_ps(inv_std);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        _mm256_storeu_ps(q + i, _mm256_mul_ps(_mm256_sub_ps(_mm256_loadu_ps(p + i), mu), inv));
    }
    for (; i < n; ++i) q[i] = (p[i] - mean) * inv_std;
}

void threshold_gt(std::span<const float> in, std::span<std::uint8_t> out, float threshold) {
    const std::size_t n = in.size();
    const float* p = in.data();
    std::uint8_t* q = out.data();
    const __m256 t = _mm256_set1_ps(threshold);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const auto bits = static_cast<std::uint32_t>(
            _mm256_movemask_ps(_mm256_cmp_ps(_mm256_loadu_ps(p + i), t, _CMP_GT_OQ)));
        for (int k = 0; k < 8; ++k) q[i + k] = (bits >> k) & 1u;
    }
    for (; i < n; ++i) q[i] = p[i] > threshold ? 1 : 0;
}

}  // namespace vp::kernels::avx2

#endif  // x86_64
