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

#include "voxelpipe/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <deque>
#include <mutex>

namespace vp::log {

namespace {

constexpr std::size_t kMaxRecords = 4096;

struct State {
    std::mutex mutex;
    Level threshold = Level::info;
    bool threshold_initialized = false;
    std::deque<Record> records;
};

State& state() {
    static State s;
    return s;
}

Level threshold_from_env() {
    const char* env = std::getenv("VOXELPIPE_LOG");
    if (env == nullptr) return Level::info;
    if (std::strcmp(env, "debug") == 0) return Level::debug;
    if (std::strcmp(env, "warn") == 0) return Level::warn;
    return Level::info;
}

const char* level_tag(Level level) {
    switch (level) {
        case Level::debug: return "DEBUG";
        case Level::info: return "INFO";
        case Level::warn: return "WARN";
        case Level::error: return "ERROR";
    }
    return "?";
}

}  // namespace

void set_threshold(Level level) {
    State& s = state();
    std::lock_guard lock(s.mutex);
    s.threshold = level;
    s.threshold_initialized = true;
}

Level threshold() {
    State& s = state();
    std::lock_guard lock(s.mutex);
    if (!s.threshold_initialized) {
        s.threshold = threshold_from_env();
        s.threshold_initialized = true;
    }
    return s.threshold;
}

void write(Level level, const std::string& message) {
    const Level gate = threshold();
    State& s = state();
    std::lock_guard lock(s.mutex);
    const auto now = std::chrono::system_clock::now();
    if (level >= Level::info) {
        s.records.push_back(Record{level, now, message});
        if (s.records.size() > kMaxRecords) s.records.pop_front();
    }
    if (level >= gate) {
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        std::tm tm_buf{};
        localtime_r(&t, &tm_buf);
        char stamp[32];
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%d %H:%M:%S", &tm_buf);
        std::fprintf(stderr, "%s %-5s %s\n", stamp, level_tag(level), message.c_str());
    }
}

std::vector<Record> records() {
    State& s = state();
    std::lock_guard lock(s.mutex);
    return std::vector<Record>(s.records.begin(), s.records.end());
}

void clear_records() {
    State& s = state();
    std::lock_guard lock(s.mutex);
    s.records.clear();
}

bool has_warning_containing(const std::string& needle) {
    State& s = state();
    std::lock_guard lock(s.mutex);
    for (const Record& r : s.records) {
        if (r.level >= Level::warn && r.message.find(needle) != std::string::npos) return true;
    }
    return false;
}

}  // namespace vp::log
