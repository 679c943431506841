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

#ifndef VOXELPIPE_NORMALIZE_HPP
#define VOXELPIPE_NORMALIZE_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voxelpipe/volume.hpp"

namespace vp {

// Foreground selection for intensity statistics: everything, or voxels
// strictly above the per-volume minimum (excludes background padding).
enum class FgMask { none, above_min };

inline const std::vector<double>& default_landmark_percentiles() {
    static const std::vector<double> p{1, 10, 20, 30, 40, 50, 60, 70, 80, 90, 99};
    return p;
}

// Dataset-trained percentile landmarks mapped onto a standard [0,100] scale.
struct HistogramModel {
    std::string source_name;
    std::vector<double> percentiles;     // ascending, in (0,100)
    std::vector<double> standard_scale;  // strictly increasing, same length
};

// Whitening: out = (v - mean) / sample_std, statistics over the mask
// (or all voxels). The transform is applied to every voxel. Degenerate
// input (sample std < 1e-8, or a single-voxel mask) yields an all-zero
// volume and a warning in the run log. Output dtype is f32 (f64 stays f64).
Volume meanvar_normalize(const Volume& v, const Volume* mask = nullptr);
Volume meanvar_normalize_fg(const Volume& v, FgMask fg);

// Intensity landmarks of one volume at the given percentiles over the
// foreground, linear-interpolated percentile definition.
std::vector<double> volume_landmarks(const Volume& v, std::span<const double> percentiles, FgMask fg);

// Trains the standard scale: each volume's landmarks are mapped affinely so
// its first landmark hits 0 and its last hits 100, then averaged per
// landmark across volumes; ties are repaired to strictly increasing with
// 1e-6 spacing.
HistogramModel train_histogram_model(std::span<const Volume> volumes,
                                     std::span<const double> percentiles, FgMask fg,
                                     const std::string& source_name);

// Piecewise-linear map sending the volume's own landmarks onto the model's
// standard scale; values beyond the end landmarks extrapolate along the end
// segments. Strictly monotone, so voxel rank order is preserved. Output f32.
Volume apply_histogram_model(const Volume& v, const HistogramModel& model, FgMask fg);

// Model file: one line per source, "<source> <percentile>:<value> ...".
void save_histogram_models(std::span<const HistogramModel> models, const std::filesystem::path& path);
std::vector<HistogramModel> load_histogram_models(const std::filesystem::path& path);

}  // namespace vp

#endif
