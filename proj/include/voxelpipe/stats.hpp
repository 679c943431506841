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

#ifndef VOXELPIPE_STATS_HPP
#define VOXELPIPE_STATS_HPP

#include <cmath>
#include <span>

#include "voxelpipe/errors.hpp"

namespace vp {

// Percentile by linear interpolation between order statistics:
// rank h = (n-1)*p/100, result = v[floor(h)] + frac(h)*(v[floor(h)+1] - v[floor(h)]).
// `sorted` must be ascending and nonempty. This definition is shared by
// histogram landmarks, intensity quartiles and the 95th-percentile Hausdorff
// distance so all percentile-based quantities agree.
template <typename T>
double percentile_linear(std::span<const T> sorted, double p) {
    if (sorted.empty()) raise(Errc::precondition_violation, "percentile of empty data");
    if (sorted.size() == 1) return static_cast<double>(sorted[0]);
    if (p <= 0.0) return static_cast<double>(sorted.front());
    if (p >= 100.0) return static_cast<double>(sorted.back());
    const double h = static_cast<double>(sorted.size() - 1) * (p / 100.0);
    const auto lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    const double a = static_cast<double>(sorted[lo]);
    if (frac == 0.0) return a;
    const double b = static_cast<double>(sorted[lo + 1]);
    return a + frac * (b - a);
}

}  // namespace vp

#endif
