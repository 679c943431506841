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

#ifndef VOXELPIPE_LOG_HPP
#define VOXELPIPE_LOG_HPP

#include <chrono>
#include <string>
#include <vector>

// Run log: timestamped lines to stderr, gated by VOXELPIPE_LOG (debug|info|warn),
// plus an in-memory record of info/warn/error entries so degenerate-input
// warnings raised deep in the pipeline are observable by callers and tests.
namespace vp::log {

enum class Level { debug = 0, info = 1, warn = 2, error = 3 };

struct Record {
    Level level;
    std::chrono::system_clock::time_point time;
    std::string message;
};

void set_threshold(Level level);
Level threshold();

void write(Level level, const std::string& message);

inline void debug(const std::string& m) { write(Level::debug, m); }
inline void info(const std::string& m) { write(Level::info, m); }
inline void warn(const std::string& m) { write(Level::warn, m); }
inline void error(const std::string& m) { write(Level::error, m); }

// Snapshot of the retained records (most recent last).
std::vector<Record> records();
void clear_records();

// True if any retained warn/error record contains `needle`.
bool has_warning_containing(const std::string& needle);

}  // namespace vp::log

#endif
