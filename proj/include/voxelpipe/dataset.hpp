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

#ifndef VOXELPIPE_DATASET_HPP
#define VOXELPIPE_DATASET_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "voxelpipe/volume.hpp"

namespace vp {

// One named input stream of a dataset ("image", "label", "weight", ...).
struct SourceSpec {
    std::string name;
    std::filesystem::path path_to_search;
    std::vector<std::string> filename_contains;
    std::vector<std::string> filename_not_contains;
    Interp interp = Interp::trilinear;
};

// A subject bound to one file per configured source.
struct SubjectRecord {
    std::string subject_id;
    std::map<std::string, std::filesystem::path> paths;
};

enum class Split { training, validation, inference };

const char* split_name(Split s);
Split split_from_name(const std::string& name);

struct PartitionTable {
    struct Row {
        std::string subject_id;
        Split split;
    };
    std::vector<Row> rows;  // sorted by subject_id
    std::uint64_t seed = 0;
    std::array<double, 3> ratios{1, 0, 0};

    std::vector<std::string> subjects_in(Split s) const;
};

// Derives the subject id from a filename: strip the known extensions
// (.nii, .nii.gz, .csv), remove every occurrence of each matched substring,
// then trim trailing '-', '_', '.' separators.
std::string subject_id_from_filename(const std::string& filename,
                                     const std::vector<std::string>& contains);

// Scans each source's directory (non-recursive) for volume files matching
// the substring filters and groups them by subject id, sorted by id.
// A subject present in one source but not another is MissingModality; two
// files in one source with the same id is AmbiguousMatch.
std::vector<SubjectRecord> discover_subjects(const std::vector<SourceSpec>& specs);

// CSV manifest: header row "subject_id,<source>,<source>,...", one subject
// per row, paths checked for existence (relative paths resolve against the
// CSV's directory). Records keep row order.
std::vector<SubjectRecord> load_manifest(const std::filesystem::path& csv_path);
// Source names declared by the manifest header.
std::vector<std::string> manifest_source_names(const std::filesystem::path& csv_path);

// Deterministic split: Fisher-Yates shuffle under PCG32(seed), counts
// floor(n*ratio) with the remainder assigned to training.
PartitionTable partition(const std::vector<SubjectRecord>& subjects, std::array<double, 3> ratios,
                         std::uint64_t seed);

void save_partition_csv(const PartitionTable& table, const std::filesystem::path& path);
PartitionTable load_partition_csv(const std::filesystem::path& path);

}  // namespace vp

#endif
