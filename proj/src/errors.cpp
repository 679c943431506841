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

#include "voxelpipe/errors.hpp"

namespace vp {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::affine_singular: return "AffineSingular";
        case Errc::shape_mismatch: return "ShapeMismatch";
        case Errc::unsupported_geometry: return "UnsupportedGeometry";
        case Errc::unrecognized_format: return "UnrecognizedFormat";
        case Errc::unsupported_datatype: return "UnsupportedDatatype";
        case Errc::truncated_file: return "TruncatedFile";
        case Errc::malformed_quaternion: return "MalformedQuaternion";
        case Errc::io_error: return "IoError";
        case Errc::missing_modality: return "MissingModality";
        case Errc::ambiguous_match: return "AmbiguousMatch";
        case Errc::manifest_path_missing: return "ManifestPathMissing";
        case Errc::manifest_malformed: return "ManifestMalformed";
        case Errc::duplicate_subject: return "DuplicateSubject";
        case Errc::empty_dataset: return "EmptyDataset";
        case Errc::empty_mask: return "EmptyMask";
        case Errc::degenerate_histogram: return "DegenerateHistogram";
        case Errc::invalid_weight_map: return "InvalidWeightMap";
        case Errc::unexpected_window: return "UnexpectedWindow";
        case Errc::incomplete_coverage: return "IncompleteCoverage";
        case Errc::unknown_config_key: return "UnknownConfigKey";
        case Errc::config_type_error: return "ConfigTypeError";
        case Errc::duplicate_config_key: return "DuplicateConfigKey";
        case Errc::unknown_action: return "UnknownAction";
        case Errc::precondition_violation: return "PreconditionViolation";
    }
    return "UnknownError";
}

}  // namespace vp
