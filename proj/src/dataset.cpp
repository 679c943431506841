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

#include "voxelpipe/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "voxelpipe/rng.hpp"

namespace vp {

namespace fs = std::filesystem;

namespace {

const char* kVolumeExtensions[] = {".nii.gz", ".nii"};
const char* kStripExtensions[] = {".nii.gz", ".nii", ".csv"};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool has_volume_extension(const std::string& name) {
    for (const char* ext : kVolumeExtensions) {
        if (ends_with(name, ext)) return true;
    }
    return false;
}

void erase_all(std::string& s, const std::string& sub) {
    if (sub.empty()) return;
    std::size_t pos = 0;
    while ((pos = s.find(sub, pos)) != std::string::npos) s.erase(pos, sub.size());
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> read_csv_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace

const char* split_name(Split s) {
    switch (s) {
        case Split::training: return "training";
        case Split::validation: return "validation";
        case Split::inference: return "inference";
    }
    return "?";
}

Split split_from_name(const std::string& name) {
    if (name == "training") return Split::training;
    if (name == "validation") return Split::validation;
    if (name == "inference") return Split::inference;
    raise(Errc::precondition_violation, "unknown split name: " + name);
}

std::vector<std::string> PartitionTable::subjects_in(Split s) const {
    std::vector<std::string> out;
    for (const Row& r : rows) {
        if (r.split == s) out.push_back(r.subject_id);
    }
    return out;
}

std::string subject_id_from_filename(const std::string& filename,
                                     const std::vector<std::string>& contains) {
    std::string id = filename;
    for (const char* ext : kStripExtensions) {
        if (ends_with(id, ext)) {
            id.resize(id.size() - std::string(ext).size());
            break;
        }
    }
    for (const std::string& sub : contains) erase_all(id, sub);
    while (!id.empty() && (id.back() == '-' || id.back() == '_' || id.back() == '.')) id.pop_back();
    return id;
}

std::vector<SubjectRecord> discover_subjects(const std::vector<SourceSpec>& specs) {
    if (specs.empty()) raise(Errc::precondition_violation, "no sources configured");

    // Per source: id -> filename, detecting id collisions within a source.
    std::map<std::string, std::map<std::string, fs::path>> by_source;
    for (const SourceSpec& spec : specs) {
        if (!fs::is_directory(spec.path_to_search)) {
            raise(Errc::io_error,
                  "source '" + spec.name + "': not a directory: " + spec.path_to_search.string());
        }
        auto& matched = by_source[spec.name];
        for (const auto& entry : fs::directory_iterator(spec.path_to_search)) {
            if (!entry.is_regular_file()) continue;
            const std::string name = entry.path().filename().string();
            if (!has_volume_extension(name)) continue;
            const bool all_present = std::all_of(
                spec.filename_contains.begin(), spec.filename_contains.end(),
                [&](const std::string& s) { return name.find(s) != std::string::npos; });
            if (!all_present) continue;
            const bool any_excluded = std::any_of(
                spec.filename_not_contains.begin(), spec.filename_not_contains.end(),
                [&](const std::string& s) { return name.find(s) != std::string::npos; });
            if (any_excluded) continue;
            const std::string id = subject_id_from_filename(name, spec.filename_contains);
            auto [it, inserted] = matched.emplace(id, entry.path());
            if (!inserted) {
                raise(Errc::ambiguous_match, "source '" + spec.name + "': files '" +
                                                 it->second.filename().string() + "' and '" + name +
                                                 "' both map to subject '" + id + "'");
            }
        }
    }

    std::set<std::string> all_ids;
    for (const auto& [source, matched] : by_source) {
        for (const auto& [id, p] : matched) all_ids.insert(id);
    }
    std::vector<SubjectRecord> records;
    for (const std::string& id : all_ids) {
        SubjectRecord rec;
        rec.subject_id = id;
        for (const SourceSpec& spec : specs) {
            const auto& matched = by_source[spec.name];
            const auto it = matched.find(id);
            if (it == matched.end()) {
                raise(Errc::missing_modality,
                      "subject '" + id + "' has no file in source '" + spec.name + "'");
            }
            rec.paths[spec.name] = it->second;
        }
        records.push_back(std::move(rec));
    }
    return records;  // std::set iteration is already sorted
}

std::vector<std::string> manifest_source_names(const fs::path& csv_path) {
    const auto lines = read_csv_lines(csv_path);
    if (lines.empty()) raise(Errc::manifest_malformed, csv_path.string() + ": empty manifest");
    auto header = split_csv_line(lines[0]);
    if (header.size() < 2 || trim(header[0]) != "subject_id") {
        raise(Errc::manifest_malformed,
              csv_path.string() + ": header must be 'subject_id,<source>,...'");
    }
    std::vector<std::string> names;
    for (std::size_t i = 1; i < header.size(); ++i) {
        const std::string n = trim(header[i]);
        if (n.empty()) raise(Errc::manifest_malformed, csv_path.string() + ": empty source column name");
        names.push_back(n);
    }
    return names;
}

std::vector<SubjectRecord> load_manifest(const fs::path& csv_path) {
    const std::vector<std::string> sources = manifest_source_names(csv_path);
    const auto lines = read_csv_lines(csv_path);
    const fs::path base = csv_path.parent_path();

    std::vector<SubjectRecord> records;
    std::set<std::string> seen;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        const auto cells = split_csv_line(lines[row]);
        if (cells.size() != sources.size() + 1) {
            raise(Errc::manifest_malformed, csv_path.string() + ": row " + std::to_string(row) +
                                                " has " + std::to_string(cells.size()) +
                                                " cells, expected " + std::to_string(sources.size() + 1));
        }
        SubjectRecord rec;
        rec.subject_id = trim(cells[0]);
        if (rec.subject_id.empty()) {
            raise(Errc::manifest_malformed, csv_path.string() + ": row " + std::to_string(row) +
                                                " has an empty subject_id");
        }
        if (!seen.insert(rec.subject_id).second) {
            raise(Errc::duplicate_subject, "manifest lists subject '" + rec.subject_id + "' twice");
        }
        for (std::size_t i = 0; i < sources.size(); ++i) {
            const std::string cell = trim(cells[i + 1]);
            if (cell.empty()) {
                raise(Errc::manifest_path_missing, "row " + std::to_string(row) + ", column '" +
                                                       sources[i] + "': empty path");
            }
            fs::path p(cell);
            if (p.is_relative()) p = base / p;
            if (!fs::exists(p)) {
                raise(Errc::manifest_path_missing, "row " + std::to_string(row) + ", column '" +
                                                       sources[i] + "': no such file: " + p.string());
            }
            rec.paths[sources[i]] = p;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

PartitionTable partition(const std::vector<SubjectRecord>& subjects, std::array<double, 3> ratios,
                         std::uint64_t seed) {
    if (subjects.empty()) raise(Errc::empty_dataset, "cannot partition zero subjects");
    double sum = 0.0;
    for (const double r : ratios) {
        if (r < 0.0) raise(Errc::precondition_violation, "partition ratios must be non-negative");
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        raise(Errc::precondition_violation, "partition ratios must sum to 1");
    }

    std::vector<std::string> ids;
    ids.reserve(subjects.size());
    for (const SubjectRecord& s : subjects) ids.push_back(s.subject_id);

    Pcg32 rng(seed);
    for (std::size_t i = ids.size() - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.bounded(static_cast<std::uint32_t>(i + 1)));
        std::swap(ids[i], ids[j]);
    }

    const auto n = static_cast<double>(ids.size());
    // The 1e-9 nudge keeps floor(n*ratio) stable against decimal ratios that
    // round just below their exact value (0.6 etc.).
    std::size_t n_train = static_cast<std::size_t>(std::floor(n * ratios[0] + 1e-9));
    const std::size_t n_val = static_cast<std::size_t>(std::floor(n * ratios[1] + 1e-9));
    const std::size_t n_inf = static_cast<std::size_t>(std::floor(n * ratios[2] + 1e-9));
    n_train += ids.size() - (n_train + n_val + n_inf);

    PartitionTable table;
    table.seed = seed;
    table.ratios = ratios;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        Split s = Split::training;
        if (i >= n_train && i < n_train + n_val) s = Split::validation;
        if (i >= n_train + n_val) s = Split::inference;
        table.rows.push_back({ids[i], s});
    }
    std::sort(table.rows.begin(), table.rows.end(),
              [](const PartitionTable::Row& a, const PartitionTable::Row& b) {
                  return a.subject_id < b.subject_id;
              });
    return table;
}

void save_partition_csv(const PartitionTable& table, const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot open for writing: " + path.string());
    out << "subject_id,split\n";
    for (const PartitionTable::Row& r : table.rows) {
        out << r.subject_id << ',' << split_name(r.split) << '\n';
    }
    if (!out) raise(Errc::io_error, "failed writing " + path.string());
}

PartitionTable load_partition_csv(const fs::path& path) {
    const auto lines = read_csv_lines(path);
    if (lines.empty() || trim(lines[0]) != "subject_id,split") {
        raise(Errc::manifest_malformed, path.string() + ": expected 'subject_id,split' header");
    }
    PartitionTable table;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv_line(lines[i]);
        if (cells.size() != 2) {
            raise(Errc::manifest_malformed, path.string() + ": malformed row " + std::to_string(i));
        }
        table.rows.push_back({trim(cells[0]), split_from_name(trim(cells[1]))});
    }
    return table;
}

}  // namespace vp
