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

#include "voxelpipe/normalize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "voxelpipe/kernels/kernels.hpp"
#include "voxelpipe/log.hpp"
#include "voxelpipe/stats.hpp"

namespace vp {

namespace {

// Expands a spatial mask volume (nonzero = selected) to one byte per element
// of `v` (mask applies to every channel).
std::vector<std::uint8_t> mask_bytes_from_volume(const Volume& v, const Volume& mask) {
    if (!mask.same_spatial_shape(v)) {
        raise(Errc::shape_mismatch, "mask spatial shape differs from volume");
    }
    if (mask.channels() != 1) raise(Errc::precondition_violation, "mask must have one channel");
    const std::size_t nvox = static_cast<std::size_t>(v.nvox());
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(v.nelem()));
    std::vector<std::uint8_t> spatial(nvox);
    visit_dtype(mask.dtype(), [&]<typename T>() {
        const std::span<const T> src = mask.view<T>();
        for (std::size_t i = 0; i < nvox; ++i) spatial[i] = src[i] != T{} ? 1 : 0;
    });
    for (std::int64_t c = 0; c < v.channels(); ++c) {
        std::memcpy(bytes.data() + static_cast<std::size_t>(c) * nvox, spatial.data(), nvox);
    }
    return bytes;
}

std::vector<std::uint8_t> fg_mask_bytes(const Volume& f32, FgMask fg) {
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(f32.nelem()));
    if (fg == FgMask::none) {
        std::fill(bytes.begin(), bytes.end(), std::uint8_t{1});
    } else {
        const float lo = kernels::minmax(f32.view<float>()).min;
        kernels::threshold_gt(f32.view<float>(), bytes, lo);
    }
    return bytes;
}

Volume whiten(const Volume& v, const std::vector<std::uint8_t>& mask_bytes) {
    const Volume f32 = v.dtype() == Dtype::f64 ? v : v.as_f32();

    std::uint64_t n = 0;
    double mean = 0.0;
    double sample_var = 0.0;
    if (f32.dtype() == Dtype::f64) {
        // f64 volumes keep full precision through a plain two-pass.
        const std::span<const double> x = f32.view<double>();
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (mask_bytes[i]) {
                s += x[i];
                ++n;
            }
        }
        if (n == 0) raise(Errc::empty_mask, "normalization mask selects no voxels");
        mean = s / static_cast<double>(n);
        double m2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (mask_bytes[i]) {
                const double d = x[i] - mean;
                m2 += d * d;
            }
        }
        sample_var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    } else {
        const std::span<const float> x = f32.view<float>();
        const double s = kernels::sum_masked(x, mask_bytes, &n);
        if (n == 0) raise(Errc::empty_mask, "normalization mask selects no voxels");
        mean = s / static_cast<double>(n);
        const kernels::CenteredMoments m = kernels::centered_moments_masked(x, mask_bytes, mean);
        sample_var = n > 1 ? m.m2 / static_cast<double>(n - 1) : 0.0;
    }

    const double sigma = std::sqrt(sample_var);
    Volume out(v.shape(), v.channels(), f32.dtype(), v.affine());
    if (sigma < 1e-8) {
        log::warn("meanvar_normalize: degenerate input (std " + std::to_string(sigma) +
                  "), output forced to zero");
        return out;  // zero-filled
    }
    if (f32.dtype() == Dtype::f64) {
        const std::span<const double> x = f32.view<double>();
        const std::span<double> y = out.view<double>();
        const double inv = 1.0 / sigma;
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = (x[i] - mean) * inv;
    } else {
        kernels::normalize_apply(f32.view<float>(), out.view<float>(), static_cast<float>(mean),
                                 static_cast<float>(1.0 / sigma));
    }
    return out;
}

}  // namespace

Volume meanvar_normalize(const Volume& v, const Volume* mask) {
    if (mask == nullptr) {
        std::vector<std::uint8_t> all(static_cast<std::size_t>(v.nelem()), 1);
        return whiten(v, all);
    }
    return whiten(v, mask_bytes_from_volume(v, *mask));
}

Volume meanvar_normalize_fg(const Volume& v, FgMask fg) {
    const Volume f32 = v.dtype() == Dtype::f64 ? v : v.as_f32();
    std::vector<std::uint8_t> bytes;
    if (f32.dtype() == Dtype::f64) {
        bytes.resize(static_cast<std::size_t>(v.nelem()));
        const std::span<const double> x = f32.view<double>();
        if (fg == FgMask::none) {
            std::fill(bytes.begin(), bytes.end(), std::uint8_t{1});
        } else {
            double lo = x[0];
            for (const double t : x) lo = std::min(lo, t);
            for (std::size_t i = 0; i < x.size(); ++i) bytes[i] = x[i] > lo ? 1 : 0;
        }
    } else {
        bytes = fg_mask_bytes(f32, fg);
    }
    bool any = false;
    for (const auto b : bytes) {
        if (b) {
            any = true;
            break;
        }
    }
    if (!any) {
        // A constant volume has no voxel above its minimum; that is the
        // degenerate case, not an empty-mask error.
        log::warn("meanvar_normalize: constant input, output forced to zero");
        return Volume(v.shape(), v.channels(), f32.dtype(), v.affine());
    }
    return whiten(v, bytes);
}

std::vector<double> volume_landmarks(const Volume& v, std::span<const double> percentiles, FgMask fg) {
    for (std::size_t i = 0; i < percentiles.size(); ++i) {
        if (percentiles[i] <= 0.0 || percentiles[i] >= 100.0 ||
            (i > 0 && percentiles[i] <= percentiles[i - 1])) {
            raise(Errc::precondition_violation, "landmark percentiles must be ascending in (0,100)");
        }
    }
    if (percentiles.size() < 2) {
        raise(Errc::precondition_violation, "need at least two landmark percentiles");
    }
    const Volume f32 = v.as_f32();
    const std::span<const float> x = f32.view<float>();
    std::vector<float> values;
    values.reserve(x.size());
    if (fg == FgMask::above_min) {
        const float lo = kernels::minmax(x).min;
        for (const float t : x) {
            if (t > lo) values.push_back(t);
        }
    } else {
        values.assign(x.begin(), x.end());
    }
    if (values.empty()) {
        raise(Errc::degenerate_histogram, "volume has fewer than two distinct intensities");
    }
    std::sort(values.begin(), values.end());
    std::vector<double> landmarks(percentiles.size());
    for (std::size_t i = 0; i < percentiles.size(); ++i) {
        landmarks[i] = percentile_linear<float>(values, percentiles[i]);
    }
    if (!(landmarks.back() > landmarks.front())) {
        raise(Errc::degenerate_histogram, "intensity landmarks span zero range");
    }
    return landmarks;
}

namespace {

void repair_strictly_increasing(std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] <= v[i - 1]) v[i] = v[i - 1] + 1e-6;
    }
}

}  // namespace

HistogramModel train_histogram_model(std::span<const Volume> volumes,
                                     std::span<const double> percentiles, FgMask fg,
                                     const std::string& source_name) {
    if (volumes.empty()) raise(Errc::precondition_violation, "no training volumes");
    HistogramModel model;
    model.source_name = source_name;
    model.percentiles.assign(percentiles.begin(), percentiles.end());
    model.standard_scale.assign(percentiles.size(), 0.0);

    for (const Volume& v : volumes) {
        const std::vector<double> lm = volume_landmarks(v, percentiles, fg);
        const double lo = lm.front();
        const double span = lm.back() - lo;
        for (std::size_t i = 0; i < lm.size(); ++i) {
            model.standard_scale[i] += (lm[i] - lo) * (100.0 / span);
        }
    }
    for (double& s : model.standard_scale) s /= static_cast<double>(volumes.size());
    repair_strictly_increasing(model.standard_scale);
    return model;
}

Volume apply_histogram_model(const Volume& v, const HistogramModel& model, FgMask fg) {
    if (model.percentiles.size() != model.standard_scale.size() || model.percentiles.size() < 2) {
        raise(Errc::precondition_violation, "histogram model is not trained");
    }
    std::vector<double> knots = volume_landmarks(v, model.percentiles, fg);
    repair_strictly_increasing(knots);
    const std::vector<double>& scale = model.standard_scale;
    const std::size_t k = knots.size();

    std::vector<double> slopes(k - 1);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        slopes[i] = (scale[i + 1] - scale[i]) / (knots[i + 1] - knots[i]);
    }

    const Volume f32 = v.as_f32();
    Volume out(v.shape(), v.channels(), Dtype::f32, v.affine());
    const std::span<const float> x = f32.view<float>();
    const std::span<float> y = out.view<float>();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = x[i];
        std::size_t seg;
        if (t <= knots.front()) {
            seg = 0;  // extrapolate along the first segment
        } else if (t >= knots.back()) {
            seg = k - 2;  // extrapolate along the last segment
        } else {
            seg = static_cast<std::size_t>(
                      std::upper_bound(knots.begin(), knots.end(), t) - knots.begin()) -
                  1;
        }
        y[i] = static_cast<float>(scale[seg] + (t - knots[seg]) * slopes[seg]);
    }
    return out;
}

void save_histogram_models(std::span<const HistogramModel> models, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot open for writing: " + path.string());
    char buf[64];
    const auto fmt = [&buf](double value) {
        const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
        return std::string(buf, end);
    };
    for (const HistogramModel& m : models) {
        out << m.source_name;
        for (std::size_t i = 0; i < m.percentiles.size(); ++i) {
            out << ' ' << fmt(m.percentiles[i]) << ':' << fmt(m.standard_scale[i]);
        }
        out << '\n';
    }
    if (!out) raise(Errc::io_error, "failed writing " + path.string());
}

std::vector<HistogramModel> load_histogram_models(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open " + path.string());
    std::vector<HistogramModel> models;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        HistogramModel m;
        ss >> m.source_name;
        std::string pair;
        while (ss >> pair) {
            const std::size_t colon = pair.find(':');
            if (colon == std::string::npos) {
                raise(Errc::io_error, path.string() + ": malformed landmark '" + pair + "'");
            }
            m.percentiles.push_back(std::stod(pair.substr(0, colon)));
            m.standard_scale.push_back(std::stod(pair.substr(colon + 1)));
        }
        if (m.percentiles.size() < 2) {
            raise(Errc::io_error, path.string() + ": model line with fewer than two landmarks");
        }
        models.push_back(std::move(m));
    }
    return models;
}

}  // namespace vp
