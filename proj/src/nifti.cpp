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

#include "voxelpipe/nifti.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

namespace vp {

namespace {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// raw file + gzip container helpers

std::vector<std::byte> read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open " + path.string());
    in.seekg(0, std::ios::end);
    const std::streamoff size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<std::byte> bytes(static_cast<std::size_t>(size));
    if (size > 0) in.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!in) raise(Errc::io_error, "failed reading " + path.string());
    return bytes;
}

void write_file_bytes(const fs::path& path, const std::vector<std::byte>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) raise(Errc::io_error, "failed writing " + path.string());
}

bool is_gzip(const std::vector<std::byte>& bytes) {
    return bytes.size() >= 2 && std::to_integer<std::uint8_t>(bytes[0]) == 0x1F &&
           std::to_integer<std::uint8_t>(bytes[1]) == 0x8B;
}

std::vector<std::byte> gzip_decompress(const std::vector<std::byte>& in) {
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) raise(Errc::io_error, "inflateInit2 failed");
    std::vector<std::byte> out;
    out.reserve(in.size() * 4);
    std::byte buffer[1 << 16];
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<std::byte*>(in.data()));
    zs.avail_in = static_cast<uInt>(in.size());
    int rc = Z_OK;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buffer);
        zs.avail_out = sizeof(buffer);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            raise(Errc::truncated_file, "corrupt gzip stream");
        }
        out.insert(out.end(), buffer, buffer + (sizeof(buffer) - zs.avail_out));
    } while (rc != Z_STREAM_END && (zs.avail_in > 0 || zs.avail_out == 0));
    inflateEnd(&zs);
    if (rc != Z_STREAM_END) raise(Errc::truncated_file, "truncated gzip stream");
    return out;
}

// zlib's default gzip header carries mtime 0, keeping outputs byte-stable
// across runs.
std::vector<std::byte> gzip_compress(const std::vector<std::byte>& in) {
    z_stream zs{};
    if (deflateInit2(&zs, 6, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
        raise(Errc::io_error, "deflateInit2 failed");
    }
    std::vector<std::byte> out;
    std::byte buffer[1 << 16];
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<std::byte*>(in.data()));
    zs.avail_in = static_cast<uInt>(in.size());
    int rc = Z_OK;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buffer);
        zs.avail_out = sizeof(buffer);
        rc = deflate(&zs, Z_FINISH);
        out.insert(out.end(), buffer, buffer + (sizeof(buffer) - zs.avail_out));
    } while (rc != Z_STREAM_END);
    deflateEnd(&zs);
    return out;
}

// ---------------------------------------------------------------------------
// byte swapping

void swap_bytes(void* p, std::size_t size) {
    auto* b = static_cast<std::uint8_t*>(p);
    for (std::size_t i = 0; i < size / 2; ++i) std::swap(b[i], b[size - 1 - i]);
}

template <typename T>
void swap_field(T& v) {
    swap_bytes(&v, sizeof(T));
}

void swap_header(NiftiHeader& h) {
    swap_field(h.sizeof_hdr);
    swap_field(h.extents);
    swap_field(h.session_error);
    for (auto& d : h.dim) swap_field(d);
    swap_field(h.intent_p1);
    swap_field(h.intent_p2);
    swap_field(h.intent_p3);
    swap_field(h.intent_code);
    swap_field(h.datatype);
    swap_field(h.bitpix);
    swap_field(h.slice_start);
    for (auto& p : h.pixdim) swap_field(p);
    swap_field(h.vox_offset);
    swap_field(h.scl_slope);
    swap_field(h.scl_inter);
    swap_field(h.slice_end);
    swap_field(h.cal_max);
    swap_field(h.cal_min);
    swap_field(h.slice_duration);
    swap_field(h.toffset);
    swap_field(h.glmax);
    swap_field(h.glmin);
    swap_field(h.qform_code);
    swap_field(h.sform_code);
    swap_field(h.quatern_b);
    swap_field(h.quatern_c);
    swap_field(h.quatern_d);
    swap_field(h.qoffset_x);
    swap_field(h.qoffset_y);
    swap_field(h.qoffset_z);
    for (auto& f : h.srow_x) swap_field(f);
    for (auto& f : h.srow_y) swap_field(f);
    for (auto& f : h.srow_z) swap_field(f);
}

bool magic_is(const NiftiHeader& h, const char* m) { return std::memcmp(h.magic, m, 4) == 0; }

// ---------------------------------------------------------------------------

struct ParsedDims {
    Index3 shape;
    std::int64_t channels;
};

ParsedDims parse_dims(const NiftiHeader& h) {
    const int ndim = h.dim[0];
    if (ndim < 1 || ndim > 7) {
        raise(Errc::unsupported_geometry, "dim[0] out of range: " + std::to_string(ndim));
    }
    auto used = [&](int i) -> std::int64_t {
        if (i > ndim) return 1;
        if (h.dim[i] < 1) {
            raise(Errc::unsupported_geometry,
                  "dim[" + std::to_string(i) + "] = " + std::to_string(h.dim[i]));
        }
        return h.dim[i];
    };
    ParsedDims d{{used(1), used(2), used(3)}, 1};
    if (ndim <= 3) {
        d.channels = 1;
    } else if (ndim == 4) {
        d.channels = used(4);
    } else if (ndim == 5) {
        // dim[5] > 1 with dim[4] == 1 carries the per-voxel channels.
        if (used(4) != 1) {
            raise(Errc::unsupported_geometry, "time series volumes (dim[4] > 1) not supported");
        }
        d.channels = used(5);
    } else {
        raise(Errc::unsupported_geometry, "more than 5 used dimensions");
    }
    return d;
}

Affine44 affine_from_header(const NiftiHeader& h) {
    if (h.sform_code > 0) {
        Affine44 a;
        for (int j = 0; j < 4; ++j) {
            a.at(0, j) = h.srow_x[j];
            a.at(1, j) = h.srow_y[j];
            a.at(2, j) = h.srow_z[j];
        }
        return a;
    }
    if (h.qform_code > 0) return qform_to_affine(h);
    Affine44 a;
    for (int i = 0; i < 3; ++i) {
        const float p = h.pixdim[i + 1];
        a.at(i, i) = p > 0.0f ? static_cast<double>(p) : 1.0;
    }
    return a;
}

fs::path sibling_with_extension(const fs::path& path, const char* ext) {
    fs::path p = path;
    if (p.extension() == ".gz") p.replace_extension();
    p.replace_extension(ext);
    return p;
}

}  // namespace

std::int16_t nifti_type_code(Dtype dt) {
    switch (dt) {
        case Dtype::u8: return kNiftiTypeU8;
        case Dtype::i16: return kNiftiTypeI16;
        case Dtype::i32: return kNiftiTypeI32;
        case Dtype::f32: return kNiftiTypeF32;
        case Dtype::f64: return kNiftiTypeF64;
    }
    raise(Errc::unsupported_datatype, "bad dtype enum");
}

Dtype dtype_from_nifti_code(std::int16_t code) {
    switch (code) {
        case kNiftiTypeU8: return Dtype::u8;
        case kNiftiTypeI16: return Dtype::i16;
        case kNiftiTypeI32: return Dtype::i32;
        case kNiftiTypeF32: return Dtype::f32;
        case kNiftiTypeF64: return Dtype::f64;
        default:
            raise(Errc::unsupported_datatype, "NIfTI datatype code " + std::to_string(code));
    }
}

Affine44 qform_to_affine(const NiftiHeader& h) {
    const double b = h.quatern_b;
    const double c = h.quatern_c;
    const double d = h.quatern_d;
    const double a_sq = 1.0 - (b * b + c * c + d * d);
    if (a_sq < -1e-5) {
        raise(Errc::malformed_quaternion, "quaternion norm exceeds 1 by more than 1e-5");
    }
    const double a = std::sqrt(std::max(0.0, a_sq));

    double rot[3][3] = {
        {a * a + b * b - c * c - d * d, 2 * b * c - 2 * a * d, 2 * b * d + 2 * a * c},
        {2 * b * c + 2 * a * d, a * a + c * c - b * b - d * d, 2 * c * d - 2 * a * b},
        {2 * b * d - 2 * a * c, 2 * c * d + 2 * a * b, a * a + d * d - b * b - c * c},
    };

    // qfac = pixdim[0]; 0 is treated as +1 per the format's convention.
    const double qfac = h.pixdim[0] < 0.0f ? -1.0 : 1.0;
    const double sx = h.pixdim[1] > 0.0f ? h.pixdim[1] : 1.0;
    const double sy = h.pixdim[2] > 0.0f ? h.pixdim[2] : 1.0;
    const double sz = (h.pixdim[3] > 0.0f ? h.pixdim[3] : 1.0) * qfac;

    Affine44 out;
    for (int i = 0; i < 3; ++i) {
        out.at(i, 0) = rot[i][0] * sx;
        out.at(i, 1) = rot[i][1] * sy;
        out.at(i, 2) = rot[i][2] * sz;
    }
    out.at(0, 3) = h.qoffset_x;
    out.at(1, 3) = h.qoffset_y;
    out.at(2, 3) = h.qoffset_z;
    return out;
}

NiftiReadResult read_nifti(const fs::path& path) {
    if (!fs::exists(path)) raise(Errc::io_error, "no such file: " + path.string());
    std::vector<std::byte> bytes = read_file_bytes(path);
    if (is_gzip(bytes)) bytes = gzip_decompress(bytes);

    if (bytes.size() < sizeof(NiftiHeader)) {
        raise(Errc::truncated_file, path.string() + ": shorter than a NIfTI-1 header");
    }
    NiftiHeader h;
    std::memcpy(&h, bytes.data(), sizeof(h));
    bool swapped = false;
    if (h.sizeof_hdr != 348) {
        swap_header(h);
        swapped = true;
        if (h.sizeof_hdr != 348) {
            raise(Errc::unrecognized_format, path.string() + ": sizeof_hdr is not 348 in either byte order");
        }
    }
    const bool single_file = magic_is(h, "n+1");
    if (!single_file && !magic_is(h, "ni1")) {
        raise(Errc::unrecognized_format, path.string() + ": bad magic");
    }

    const Dtype dtype = dtype_from_nifti_code(h.datatype);
    const ParsedDims dims = parse_dims(h);
    const std::size_t esize = dtype_size(dtype);
    const std::size_t nelem = static_cast<std::size_t>(dims.shape[0]) *
                              static_cast<std::size_t>(dims.shape[1]) *
                              static_cast<std::size_t>(dims.shape[2]) *
                              static_cast<std::size_t>(dims.channels);
    const std::size_t nbytes = nelem * esize;

    // Locate the data section: in-file for "n+1", sibling .img for "ni1".
    std::vector<std::byte> img_bytes;
    const std::vector<std::byte>* data_source = &bytes;
    std::size_t offset = 0;
    if (single_file) {
        offset = static_cast<std::size_t>(std::max(352.0f, h.vox_offset));
    } else {
        const fs::path img = sibling_with_extension(path, ".img");
        const fs::path img_gz = img.string() + ".gz";
        if (fs::exists(img)) {
            img_bytes = read_file_bytes(img);
        } else if (fs::exists(img_gz)) {
            img_bytes = read_file_bytes(img_gz);
        } else {
            raise(Errc::io_error, path.string() + ": header/data pair is missing its .img file");
        }
        if (is_gzip(img_bytes)) img_bytes = gzip_decompress(img_bytes);
        data_source = &img_bytes;
        offset = static_cast<std::size_t>(std::max(0.0f, h.vox_offset));
    }
    if (data_source->size() < offset + nbytes) {
        raise(Errc::truncated_file,
              path.string() + ": data section has " +
                  std::to_string(data_source->size() > offset ? data_source->size() - offset : 0) +
                  " bytes, expected " + std::to_string(nbytes));
    }

    Volume volume(dims.shape, dims.channels, dtype, affine_from_header(h));
    std::memcpy(volume.raw(), data_source->data() + offset, nbytes);
    if (swapped && esize > 1) {
        std::byte* p = volume.raw();
        for (std::size_t i = 0; i < nelem; ++i) swap_bytes(p + i * esize, esize);
    }

    // Intensity scaling. Scaled values are materialized as f32 unless the
    // transform is the identity.
    const float slope = h.scl_slope;
    const float inter = h.scl_inter;
    if (slope != 0.0f && !(slope == 1.0f && inter == 0.0f)) {
        Volume scaled(dims.shape, dims.channels, Dtype::f32, volume.affine());
        std::span<float> dst = scaled.view<float>();
        visit_dtype(dtype, [&]<typename T>() {
            const std::span<const T> src = volume.view<T>();
            for (std::size_t i = 0; i < src.size(); ++i) {
                dst[i] = static_cast<float>(static_cast<double>(src[i]) * slope + inter);
            }
        });
        volume = std::move(scaled);
    }
    return NiftiReadResult{std::move(volume), h, swapped};
}

void write_nifti(const Volume& v, const NiftiHeader& header_template, const fs::path& path) {
    NiftiHeader h = header_template;
    h.sizeof_hdr = 348;
    h.regular = 'r';
    std::memcpy(h.magic, "n+1", 4);
    h.datatype = nifti_type_code(v.dtype());
    h.bitpix = static_cast<std::int16_t>(dtype_size(v.dtype()) * 8);
    h.vox_offset = 352;
    h.scl_slope = 1;
    h.scl_inter = 0;

    const Index3& shape = v.shape();
    if (v.channels() == 1) {
        h.dim[0] = 3;
        h.dim[1] = static_cast<std::int16_t>(shape[0]);
        h.dim[2] = static_cast<std::int16_t>(shape[1]);
        h.dim[3] = static_cast<std::int16_t>(shape[2]);
        h.dim[4] = h.dim[5] = h.dim[6] = h.dim[7] = 1;
    } else {
        h.dim[0] = 5;
        h.dim[1] = static_cast<std::int16_t>(shape[0]);
        h.dim[2] = static_cast<std::int16_t>(shape[1]);
        h.dim[3] = static_cast<std::int16_t>(shape[2]);
        h.dim[4] = 1;
        h.dim[5] = static_cast<std::int16_t>(v.channels());
        h.dim[6] = h.dim[7] = 1;
    }

    const Vec3 spacing = v.spacing();
    h.pixdim[0] = 1;
    for (int i = 0; i < 3; ++i) h.pixdim[i + 1] = static_cast<float>(spacing[static_cast<std::size_t>(i)]);

    h.sform_code = 1;
    h.qform_code = 0;
    const Affine44& a = v.affine();
    for (int j = 0; j < 4; ++j) {
        h.srow_x[j] = static_cast<float>(a.at(0, j));
        h.srow_y[j] = static_cast<float>(a.at(1, j));
        h.srow_z[j] = static_cast<float>(a.at(2, j));
    }

    if constexpr (std::endian::native != std::endian::little) swap_header(h);

    std::vector<std::byte> bytes(352 + v.raw_size());
    std::memcpy(bytes.data(), &h, sizeof(h));
    std::memset(bytes.data() + sizeof(h), 0, 4);  // empty extension flag
    std::memcpy(bytes.data() + 352, v.raw(), v.raw_size());
    if constexpr (std::endian::native != std::endian::little) {
        const std::size_t esize = dtype_size(v.dtype());
        if (esize > 1) {
            std::byte* p = bytes.data() + 352;
            for (std::size_t i = 0; i < static_cast<std::size_t>(v.nelem()); ++i) {
                swap_bytes(p + i * esize, esize);
            }
        }
    }

    const std::string name = path.string();
    if (name.size() > 3 && name.compare(name.size() - 3, 3, ".gz") == 0) {
        bytes = gzip_compress(bytes);
    }
    write_file_bytes(path, bytes);
}

void write_nifti(const Volume& v, const fs::path& path) { write_nifti(v, NiftiHeader{}, path); }

}  // namespace vp
