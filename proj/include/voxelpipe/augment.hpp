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

#ifndef VOXELPIPE_AUGMENT_HPP
#define VOXELPIPE_AUGMENT_HPP

#include <array>
#include <cstdint>

#include "voxelpipe/rng.hpp"
#include "voxelpipe/volume.hpp"

namespace vp {

// Random spatial augmentation: per-sample axis flips, Euler rotations and an
// isotropic scaling, composed into one voxel-space affine about the volume
// centre and applied through the shared resampler.
struct AugmentSpec {
    std::array<bool, 3> flip_axes{false, false, false};  // eligible axes, each flipped with p=0.5
    std::array<double, 2> rotation_range_deg{-10.0, 10.0};
    std::array<double, 2> scale_range_pct{-10.0, 10.0};  // factor = 1 + pct/100
    std::uint64_t seed = 0;
    // Rotation/scaling in world millimetres instead of voxel units; flips
    // stay voxel-aligned. Meaningful for anisotropic grids.
    bool world_space = false;
};

struct SampledTransform {
    std::array<bool, 3> flips{false, false, false};
    std::array<double, 3> euler_deg{0, 0, 0};
    double scale = 1.0;
    // Maps output voxel coordinates to input sampling coordinates
    // (pull-back); built about the centre of the given volume shape.
    Affine44 composed;
    bool is_identity = false;
};

// Draw order is pinned (enabled flips x,y,z; then three angles; then scale)
// so a given rng state always produces the same transform. Collapsed ranges
// and no eligible flips produce an exact identity.
SampledTransform sample_transform(const AugmentSpec& spec, Pcg32& rng, Index3 shape,
                                  const Affine44* volume_affine = nullptr);

// resample(v, t.composed, v.shape, interp, pad = per-volume min intensity).
Volume apply_transform(const Volume& v, const SampledTransform& t, Interp interp);

}  // namespace vp

#endif
