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

#ifndef VOXELPIPE_ERRORS_HPP
#define VOXELPIPE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vp {

enum class Errc {
    // geometry / volume
    affine_singular,
    shape_mismatch,
    unsupported_geometry,
    // nifti
    unrecognized_format,
    unsupported_datatype,
    truncated_file,
    malformed_quaternion,
    io_error,
    // dataset
    missing_modality,
    ambiguous_match,
    manifest_path_missing,
    manifest_malformed,
    duplicate_subject,
    empty_dataset,
    // normalization
    empty_mask,
    degenerate_histogram,
    // sampling / aggregation
    invalid_weight_map,
    unexpected_window,
    incomplete_coverage,
    // config
    unknown_config_key,
    config_type_error,
    duplicate_config_key,
    unknown_action,
    // generic contract violation
    precondition_violation,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace vp

#endif
