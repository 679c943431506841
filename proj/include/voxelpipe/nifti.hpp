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

#ifndef VOXELPIPE_NIFTI_HPP
#define VOXELPIPE_NIFTI_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "voxelpipe/volume.hpp"

namespace vp {

// NIfTI-1 header, bit-exact 348-byte wire layout.
#pragma pack(push, 1)
struct NiftiHeader {
    std::int32_t sizeof_hdr = 348;
    char data_type[10] = {};
    char db_name[18] = {};
    std::int32_t extents = 0;
    std::int16_t session_error = 0;
    char regular = 'r';
    char dim_info = 0;
    std::int16_t dim[8] = {3, 1, 1, 1, 1, 1, 1, 1};
    float intent_p1 = 0;
    float intent_p2 = 0;
    float intent_p3 = 0;
    std::int16_t intent_code = 0;
    std::int16_t datatype = 0;
    std::int16_t bitpix = 0;
    std::int16_t slice_start = 0;
    float pixdim[8] = {1, 1, 1, 1, 1, 1, 1, 1};
    float vox_offset = 352;
    float scl_slope = 1;
    float scl_inter = 0;
    std::int16_t slice_end = 0;
    char slice_code = 0;
    char xyzt_units = 2;  // millimetres
    float cal_max = 0;
    float cal_min = 0;
    float slice_duration = 0;
    float toffset = 0;
    std::int32_t glmax = 0;
    std::int32_t glmin = 0;
    char descrip[80] = {};
    char aux_file[24] = {};
    std::int16_t qform_code = 0;
    std::int16_t sform_code = 0;
    float quatern_b = 0;
    float quatern_c = 0;
    float quatern_d = 0;
    float qoffset_x = 0;
    float qoffset_y = 0;
    float qoffset_z = 0;
    float srow_x[4] = {};
    float srow_y[4] = {};
    float srow_z[4] = {};
    char intent_name[16] = {};
    char magic[4] = {'n', '+', '1', '\0'};
};
#pragma pack(pop)
static_assert(sizeof(NiftiHeader) == 348, "NIfTI-1 header must be 348 bytes");

// NIfTI datatype codes supported here.
inline constexpr std::int16_t kNiftiTypeU8 = 2;
inline constexpr std::int16_t kNiftiTypeI16 = 4;
inline constexpr std::int16_t kNiftiTypeI32 = 8;
inline constexpr std::int16_t kNiftiTypeF32 = 16;
inline constexpr std::int16_t kNiftiTypeF64 = 64;

std::int16_t nifti_type_code(Dtype dt);
Dtype dtype_from_nifti_code(std::int16_t code);  // throws UnsupportedDatatype

struct NiftiReadResult {
    Volume volume;
    NiftiHeader header;  // native byte order after any swap
    bool byte_swapped = false;
};

// Reads .nii / .nii.gz (gzip detected by the 1F 8B magic, not the name) and
// .hdr/.img pairs (magic "ni1"). Voxel values are raw*scl_slope + scl_inter
// when scl_slope != 0; scaled data is materialized as f32 unless
// slope==1, inter==0, in which case the native dtype is preserved.
// Affine precedence: sform (sform_code>0), else qform (qform_code>0),
// else diag(pixdim).
NiftiReadResult read_nifti(const std::filesystem::path& path);

// Quaternion-method voxel-to-world affine from qform fields.
// a = sqrt(max(0, 1-b^2-c^2-d^2)); 1-b^2-c^2-d^2 < -1e-5 is MalformedQuaternion.
Affine44 qform_to_affine(const NiftiHeader& h);

// Writes a single-file NIfTI-1 (gzipped when the name ends in .gz).
// Data-dependent fields (dim, datatype, bitpix, pixdim, vox_offset, sform,
// scl_slope=1/scl_inter=0, magic) are derived from the volume; remaining
// metadata is taken from the template header.
void write_nifti(const Volume& v, const NiftiHeader& header_template, const std::filesystem::path& path);
void write_nifti(const Volume& v, const std::filesystem::path& path);

}  // namespace vp

#endif
