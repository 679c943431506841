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

#ifndef VOXELPIPE_VOLUME_HPP
#define VOXELPIPE_VOLUME_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "voxelpipe/errors.hpp"

namespace vp {

// Voxel arrays are [x, y, z, channel] with x fastest in memory (the NIfTI
// data layout). Coordinates follow the column-vector convention:
// world = affine * [i, j, k, 1]^T, in millimetres.

using Index3 = std::array<std::int64_t, 3>;
using Vec3 = std::array<double, 3>;

enum class Dtype : std::uint8_t { u8, i16, i32, f32, f64 };

std::size_t dtype_size(Dtype dt);
const char* dtype_name(Dtype dt);

enum class Interp { nearest, trilinear };

// Row-major 4x4 homogeneous transform.
struct Affine44 {
    std::array<double, 16> m{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};

    static Affine44 identity() { return Affine44{}; }
    static Affine44 scaling(double sx, double sy, double sz);
    static Affine44 translation(double tx, double ty, double tz);
    static Affine44 rotation_x(double radians);
    static Affine44 rotation_y(double radians);
    static Affine44 rotation_z(double radians);

    double at(int r, int c) const { return m[static_cast<std::size_t>(r) * 4 + static_cast<std::size_t>(c)]; }
    double& at(int r, int c) { return m[static_cast<std::size_t>(r) * 4 + static_cast<std::size_t>(c)]; }

    Affine44 operator*(const Affine44& o) const;
    bool operator==(const Affine44& o) const = default;

    Vec3 apply(const Vec3& p) const;

    // Gauss-Jordan with partial pivoting; throws AffineSingular.
    Affine44 inverse() const;

    // Determinant of the upper-left 3x3 block.
    double det3() const;
    // Euclidean norms of the first three columns (3x3 block): voxel spacing.
    Vec3 column_norms() const;
    bool has_affine_last_row(double tol = 0.0) const;
    bool almost_equal(const Affine44& o, double tol) const;
};

class Volume {
public:
    // Zero-filled volume. Validates: spatial dims >= 1, channels >= 1,
    // affine last row (0,0,0,1) and |det3| > 0.
    Volume(Index3 shape, std::int64_t channels, Dtype dtype, const Affine44& affine);

    const Index3& shape() const { return shape_; }
    std::int64_t channels() const { return channels_; }
    Dtype dtype() const { return dtype_; }
    const Affine44& affine() const { return affine_; }
    Vec3 spacing() const { return affine_.column_norms(); }

    std::int64_t nvox() const { return shape_[0] * shape_[1] * shape_[2]; }
    std::int64_t nelem() const { return nvox() * channels_; }

    std::size_t index(std::int64_t x, std::int64_t y, std::int64_t z, std::int64_t c = 0) const {
        return static_cast<std::size_t>(x + shape_[0] * (y + shape_[1] * (z + shape_[2] * c)));
    }

    template <typename T>
    std::span<T> view() {
        check_view_type<T>();
        return {reinterpret_cast<T*>(data_.data()), static_cast<std::size_t>(nelem())};
    }

    template <typename T>
    std::span<const T> view() const {
        check_view_type<T>();
        return {reinterpret_cast<const T*>(data_.data()), static_cast<std::size_t>(nelem())};
    }

    std::byte* raw() { return data_.data(); }
    const std::byte* raw() const { return data_.data(); }
    std::size_t raw_size() const { return data_.size(); }

    // Element access through the dtype switch; convenient, not fast.
    double get(std::int64_t x, std::int64_t y, std::int64_t z, std::int64_t c = 0) const;
    void set(std::int64_t x, std::int64_t y, std::int64_t z, std::int64_t c, double value);
    double get_linear(std::size_t i) const;
    void set_linear(std::size_t i, double value);

    // Copy converted to f32 (no intensity scaling).
    Volume as_f32() const;
    Volume with_dtype(Dtype dt) const;

    double min_value() const;
    double max_value() const;

    bool same_spatial_shape(const Volume& o) const { return shape_ == o.shape_; }

private:
    template <typename T>
    void check_view_type() const;

    Index3 shape_;
    std::int64_t channels_;
    Dtype dtype_;
    Affine44 affine_;
    std::vector<std::byte> data_;
};

// Casts an f64 sample to the storage dtype: floats cast directly, integers
// round half-to-even and clamp to the dtype range.
template <typename T>
T cast_voxel(double v);

// Applies a compile-time functor to the dtype's value type:
// visit_dtype(dt, [&]<typename T>() { ... });
template <typename F>
decltype(auto) visit_dtype(Dtype dt, F&& f) {
    switch (dt) {
        case Dtype::u8: return f.template operator()<std::uint8_t>();
        case Dtype::i16: return f.template operator()<std::int16_t>();
        case Dtype::i32: return f.template operator()<std::int32_t>();
        case Dtype::f32: return f.template operator()<float>();
        case Dtype::f64: return f.template operator()<double>();
    }
    raise(Errc::unsupported_datatype, "bad dtype enum");
}

Vec3 voxel_to_world(const Volume& v, const Vec3& voxel);
Vec3 world_to_voxel(const Volume& v, const Vec3& world);

enum class PadMode { edge_replicate, constant };

// Symmetric pad: shape grows by 2*border per axis; original voxels keep
// their world coordinates (affine translated by -border).
Volume pad(const Volume& v, Index3 border, PadMode mode, double constant_value = 0.0);
// General form with independent low/high margins.
Volume pad_asym(const Volume& v, Index3 lo, Index3 hi, PadMode mode, double constant_value = 0.0);

// Output voxel at index i takes the interpolated value of v at t*i
// (t maps output voxel coordinates to input voxel coordinates).
// Out-of-bounds reads yield pad_value. Output affine = v.affine * t.
// All interpolation arithmetic is f64; the result is cast to v's dtype.
Volume resample(const Volume& v, const Affine44& t, Index3 out_shape, Interp interp, double pad_value);
// Same, with pad_value defaulted to the per-volume minimum intensity.
Volume resample(const Volume& v, const Affine44& t, Index3 out_shape, Interp interp);

}  // namespace vp

#endif
