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

#include "voxelpipe/volume.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <string>

#include "voxelpipe/kernels/kernels.hpp"

namespace vp {

std::size_t dtype_size(Dtype dt) {
    switch (dt) {
        case Dtype::u8: return 1;
        case Dtype::i16: return 2;
        case Dtype::i32: return 4;
        case Dtype::f32: return 4;
        case Dtype::f64: return 8;
    }
    raise(Errc::unsupported_datatype, "bad dtype enum");
}

const char* dtype_name(Dtype dt) {
    switch (dt) {
        case Dtype::u8: return "u8";
        case Dtype::i16: return "i16";
        case Dtype::i32: return "i32";
        case Dtype::f32: return "f32";
        case Dtype::f64: return "f64";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Affine44

Affine44 Affine44::scaling(double sx, double sy, double sz) {
    Affine44 a;
    a.at(0, 0) = sx;
    a.at(1, 1) = sy;
    a.at(2, 2) = sz;
    return a;
}

Affine44 Affine44::translation(double tx, double ty, double tz) {
    Affine44 a;
    a.at(0, 3) = tx;
    a.at(1, 3) = ty;
    a.at(2, 3) = tz;
    return a;
}

Affine44 Affine44::rotation_x(double r) {
    Affine44 a;
    const double c = std::cos(r), s = std::sin(r);
    a.at(1, 1) = c;
    a.at(1, 2) = -s;
    a.at(2, 1) = s;
    a.at(2, 2) = c;
    return a;
}

Affine44 Affine44::rotation_y(double r) {
    Affine44 a;
    const double c = std::cos(r), s = std::sin(r);
    a.at(0, 0) = c;
    a.at(0, 2) = s;
    a.at(2, 0) = -s;
    a.at(2, 2) = c;
    return a;
}

Affine44 Affine44::rotation_z(double r) {
    Affine44 a;
    const double c = std::cos(r), s = std::sin(r);
    a.at(0, 0) = c;
    a.at(0, 1) = -s;
    a.at(1, 0) = s;
    a.at(1, 1) = c;
    return a;
}

Affine44 Affine44::operator*(const Affine44& o) const {
    Affine44 r;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += at(i, k) * o.at(k, j);
            r.at(i, j) = acc;
        }
    }
    return r;
}

Vec3 Affine44::apply(const Vec3& p) const {
    Vec3 r;
    for (int i = 0; i < 3; ++i) {
        r[static_cast<std::size_t>(i)] =
            at(i, 0) * p[0] + at(i, 1) * p[1] + at(i, 2) * p[2] + at(i, 3);
    }
    return r;
}

Affine44 Affine44::inverse() const {
    // Augmented Gauss-Jordan.
    double a[4][8];
    double max_abs = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            a[i][j] = at(i, j);
            max_abs = std::max(max_abs, std::abs(a[i][j]));
            a[i][j + 4] = (i == j) ? 1.0 : 0.0;
        }
    }
    if (max_abs == 0.0) raise(Errc::affine_singular, "zero matrix");
    const double eps = 1e-13 * max_abs;
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) <= eps) raise(Errc::affine_singular, "singular 4x4 transform");
        if (pivot != col) {
            for (int j = 0; j < 8; ++j) std::swap(a[pivot][j], a[col][j]);
        }
        const double inv_p = 1.0 / a[col][col];
        for (int j = 0; j < 8; ++j) a[col][j] *= inv_p;
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            if (f == 0.0) continue;
            for (int j = 0; j < 8; ++j) a[r][j] -= f * a[col][j];
        }
    }
    Affine44 inv;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) inv.at(i, j) = a[i][j + 4];
    }
    return inv;
}

double Affine44::det3() const {
    return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
           at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
           at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
}

Vec3 Affine44::column_norms() const {
    Vec3 r;
    for (int j = 0; j < 3; ++j) {
        r[static_cast<std::size_t>(j)] =
            std::sqrt(at(0, j) * at(0, j) + at(1, j) * at(1, j) + at(2, j) * at(2, j));
    }
    return r;
}

bool Affine44::has_affine_last_row(double tol) const {
    return std::abs(at(3, 0)) <= tol && std::abs(at(3, 1)) <= tol && std::abs(at(3, 2)) <= tol &&
           std::abs(at(3, 3) - 1.0) <= tol;
}

bool Affine44::almost_equal(const Affine44& o, double tol) const {
    for (std::size_t i = 0; i < 16; ++i) {
        if (std::abs(m[i] - o.m[i]) > tol) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Volume

Volume::Volume(Index3 shape, std::int64_t channels, Dtype dtype, const Affine44& affine)
    : shape_(shape), channels_(channels), dtype_(dtype), affine_(affine) {
    for (int i = 0; i < 3; ++i) {
        if (shape_[static_cast<std::size_t>(i)] < 1) {
            raise(Errc::unsupported_geometry, "spatial dimension " + std::to_string(i) + " < 1");
        }
    }
    if (channels_ < 1) raise(Errc::unsupported_geometry, "channel dimension < 1");
    if (!affine_.has_affine_last_row(1e-9)) {
        raise(Errc::unsupported_geometry, "affine last row must be (0,0,0,1)");
    }
    if (std::abs(affine_.det3()) <= 0.0) raise(Errc::affine_singular, "volume affine has zero determinant");
    data_.resize(static_cast<std::size_t>(nelem()) * dtype_size(dtype_));
}

template <typename T>
void Volume::check_view_type() const {
    const bool ok = visit_dtype(dtype_, [&]<typename U>() { return std::is_same_v<T, U>; });
    if (!ok) {
        raise(Errc::unsupported_datatype,
              std::string("view type does not match volume dtype ") + dtype_name(dtype_));
    }
}

template void Volume::check_view_type<std::uint8_t>() const;
template void Volume::check_view_type<std::int16_t>() const;
template void Volume::check_view_type<std::int32_t>() const;
template void Volume::check_view_type<float>() const;
template void Volume::check_view_type<double>() const;

double Volume::get_linear(std::size_t i) const {
    return visit_dtype(dtype_, [&]<typename T>() {
        return static_cast<double>(reinterpret_cast<const T*>(data_.data())[i]);
    });
}

void Volume::set_linear(std::size_t i, double value) {
    visit_dtype(dtype_, [&]<typename T>() {
        reinterpret_cast<T*>(data_.data())[i] = cast_voxel<T>(value);
    });
}

double Volume::get(std::int64_t x, std::int64_t y, std::int64_t z, std::int64_t c) const {
    return get_linear(index(x, y, z, c));
}

void Volume::set(std::int64_t x, std::int64_t y, std::int64_t z, std::int64_t c, double value) {
    set_linear(index(x, y, z, c), value);
}

Volume Volume::as_f32() const { return with_dtype(Dtype::f32); }

Volume Volume::with_dtype(Dtype dt) const {
    if (dt == dtype_) return *this;
    Volume out(shape_, channels_, dt, affine_);
    visit_dtype(dtype_, [&]<typename S>() {
        const S* src = reinterpret_cast<const S*>(data_.data());
        visit_dtype(dt, [&]<typename D>() {
            D* dst = reinterpret_cast<D*>(out.raw());
            const std::size_t n = static_cast<std::size_t>(nelem());
            for (std::size_t i = 0; i < n; ++i) dst[i] = cast_voxel<D>(static_cast<double>(src[i]));
        });
    });
    return out;
}

double Volume::min_value() const {
    if (dtype_ == Dtype::f32) return kernels::minmax(view<float>()).min;
    double m = std::numeric_limits<double>::max();
    const std::size_t n = static_cast<std::size_t>(nelem());
    visit_dtype(dtype_, [&]<typename T>() {
        const T* p = reinterpret_cast<const T*>(data_.data());
        for (std::size_t i = 0; i < n; ++i) m = std::min(m, static_cast<double>(p[i]));
    });
    return m;
}

double Volume::max_value() const {
    if (dtype_ == Dtype::f32) return kernels::minmax(view<float>()).max;
    double m = std::numeric_limits<double>::lowest();
    const std::size_t n = static_cast<std::size_t>(nelem());
    visit_dtype(dtype_, [&]<typename T>() {
        const T* p = reinterpret_cast<const T*>(data_.data());
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, static_cast<double>(p[i]));
    });
    return m;
}

template <typename T>
T cast_voxel(double v) {
    if constexpr (std::is_floating_point_v<T>) {
        return static_cast<T>(v);
    } else {
        constexpr double lo = static_cast<double>(std::numeric_limits<T>::min());
        constexpr double hi = static_cast<double>(std::numeric_limits<T>::max());
        // nearbyint under the default FP environment rounds half to even.
        return static_cast<T>(std::nearbyint(std::clamp(v, lo, hi)));
    }
}

template std::uint8_t cast_voxel<std::uint8_t>(double);
template std::int16_t cast_voxel<std::int16_t>(double);
template std::int32_t cast_voxel<std::int32_t>(double);
template float cast_voxel<float>(double);
template double cast_voxel<double>(double);

// ---------------------------------------------------------------------------
// Coordinate ops

Vec3 voxel_to_world(const Volume& v, const Vec3& voxel) { return v.affine().apply(voxel); }

Vec3 world_to_voxel(const Volume& v, const Vec3& world) { return v.affine().inverse().apply(world); }

// ---------------------------------------------------------------------------
// Pad

Volume pad_asym(const Volume& v, Index3 lo, Index3 hi, PadMode mode, double constant_value) {
    for (int i = 0; i < 3; ++i) {
        const auto s = static_cast<std::size_t>(i);
        if (lo[s] < 0 || hi[s] < 0) raise(Errc::precondition_violation, "negative pad border");
    }
    const Index3 in_shape = v.shape();
    const Index3 out_shape{in_shape[0] + lo[0] + hi[0], in_shape[1] + lo[1] + hi[1],
                           in_shape[2] + lo[2] + hi[2]};
    const Affine44 out_affine =
        v.affine() * Affine44::translation(-static_cast<double>(lo[0]), -static_cast<double>(lo[1]),
                                           -static_cast<double>(lo[2]));
    Volume out(out_shape, v.channels(), v.dtype(), out_affine);
    visit_dtype(v.dtype(), [&]<typename T>() {
        const std::span<const T> src = v.view<T>();
        const std::span<T> dst = out.view<T>();
        const T cval = cast_voxel<T>(constant_value);
        for (std::int64_t c = 0; c < v.channels(); ++c) {
            for (std::int64_t z = 0; z < out_shape[2]; ++z) {
                const std::int64_t sz = z - lo[2];
                for (std::int64_t y = 0; y < out_shape[1]; ++y) {
                    const std::int64_t sy = y - lo[1];
                    for (std::int64_t x = 0; x < out_shape[0]; ++x) {
                        const std::int64_t sx = x - lo[0];
                        T value;
                        if (mode == PadMode::edge_replicate) {
                            value = src[v.index(std::clamp<std::int64_t>(sx, 0, in_shape[0] - 1),
                                                std::clamp<std::int64_t>(sy, 0, in_shape[1] - 1),
                                                std::clamp<std::int64_t>(sz, 0, in_shape[2] - 1), c)];
                        } else if (sx >= 0 && sx < in_shape[0] && sy >= 0 && sy < in_shape[1] &&
                                   sz >= 0 && sz < in_shape[2]) {
                            value = src[v.index(sx, sy, sz, c)];
                        } else {
                            value = cval;
                        }
                        dst[out.index(x, y, z, c)] = value;
                    }
                }
            }
        }
    });
    return out;
}

Volume pad(const Volume& v, Index3 border, PadMode mode, double constant_value) {
    return pad_asym(v, border, border, mode, constant_value);
}

// ---------------------------------------------------------------------------
// Resample

namespace {

template <typename T>
void resample_typed(const Volume& in, const Affine44& t, Volume& out, Interp interp, double padv) {
    const std::span<const T> src = in.view<T>();
    const std::span<T> dst = out.view<T>();
    const Index3 in_shape = in.shape();
    const Index3 out_shape = out.shape();
    const std::int64_t channels = in.channels();

    const auto in_bounds = [&](std::int64_t x, std::int64_t y, std::int64_t z) {
        return x >= 0 && x < in_shape[0] && y >= 0 && y < in_shape[1] && z >= 0 && z < in_shape[2];
    };

    for (std::int64_t z = 0; z < out_shape[2]; ++z) {
        for (std::int64_t y = 0; y < out_shape[1]; ++y) {
            for (std::int64_t x = 0; x < out_shape[0]; ++x) {
                const double fx = static_cast<double>(x);
                const double fy = static_cast<double>(y);
                const double fz = static_cast<double>(z);
                const double px = t.at(0, 0) * fx + t.at(0, 1) * fy + t.at(0, 2) * fz + t.at(0, 3);
                const double py = t.at(1, 0) * fx + t.at(1, 1) * fy + t.at(1, 2) * fz + t.at(1, 3);
                const double pz = t.at(2, 0) * fx + t.at(2, 1) * fy + t.at(2, 2) * fz + t.at(2, 3);

                if (interp == Interp::nearest) {
                    const std::int64_t nx = static_cast<std::int64_t>(std::floor(px + 0.5));
                    const std::int64_t ny = static_cast<std::int64_t>(std::floor(py + 0.5));
                    const std::int64_t nz = static_cast<std::int64_t>(std::floor(pz + 0.5));
                    const bool inside = in_bounds(nx, ny, nz);
                    for (std::int64_t c = 0; c < channels; ++c) {
                        dst[out.index(x, y, z, c)] =
                            inside ? src[in.index(nx, ny, nz, c)] : cast_voxel<T>(padv);
                    }
                } else {
                    const double xf = std::floor(px);
                    const double yf = std::floor(py);
                    const double zf = std::floor(pz);
                    const std::int64_t x0 = static_cast<std::int64_t>(xf);
                    const std::int64_t y0 = static_cast<std::int64_t>(yf);
                    const std::int64_t z0 = static_cast<std::int64_t>(zf);
                    const double wx1 = px - xf, wx0 = 1.0 - wx1;
                    const double wy1 = py - yf, wy0 = 1.0 - wy1;
                    const double wz1 = pz - zf, wz0 = 1.0 - wz1;
                    const double wx[2] = {wx0, wx1};
                    const double wy[2] = {wy0, wy1};
                    const double wz[2] = {wz0, wz1};
                    for (std::int64_t c = 0; c < channels; ++c) {
                        double acc = 0.0;
                        for (int dz = 0; dz < 2; ++dz) {
                            if (wz[dz] == 0.0) continue;
                            for (int dy = 0; dy < 2; ++dy) {
                                if (wy[dy] == 0.0) continue;
                                for (int dx = 0; dx < 2; ++dx) {
                                    const double w = wx[dx] * wy[dy] * wz[dz];
                                    if (w == 0.0) continue;
                                    const std::int64_t cx = x0 + dx;
                                    const std::int64_t cy = y0 + dy;
                                    const std::int64_t cz = z0 + dz;
                                    const double value =
                                        in_bounds(cx, cy, cz)
                                            ? static_cast<double>(src[in.index(cx, cy, cz, c)])
                                            : padv;
                                    acc += w * value;
                                }
                            }
                        }
                        dst[out.index(x, y, z, c)] = cast_voxel<T>(acc);
                    }
                }
            }
        }
    }
}

}  // namespace

Volume resample(const Volume& v, const Affine44& t, Index3 out_shape, Interp interp, double pad_value) {
    if (!t.has_affine_last_row(1e-9)) {
        raise(Errc::precondition_violation, "resample transform last row must be (0,0,0,1)");
    }
    if (std::abs(t.det3()) <= 0.0) raise(Errc::affine_singular, "resample transform is singular");
    for (int i = 0; i < 3; ++i) {
        if (out_shape[static_cast<std::size_t>(i)] < 1) {
            raise(Errc::precondition_violation, "resample output shape must be positive");
        }
    }
    Volume out(out_shape, v.channels(), v.dtype(), v.affine() * t);
    visit_dtype(v.dtype(), [&]<typename T>() { resample_typed<T>(v, t, out, interp, pad_value); });
    return out;
}

Volume resample(const Volume& v, const Affine44& t, Index3 out_shape, Interp interp) {
    return resample(v, t, out_shape, interp, v.min_value());
}

}  // namespace vp
