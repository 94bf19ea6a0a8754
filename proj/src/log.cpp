//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "rainsense/log.hpp"

#include <cstdlib>
#include <cstring>

namespace rainsense {

LogLevel log_threshold() {
    static LogLevel cached = [] {
        const char* env = std::getenv("RAINSENSE_LOG");
        if (env == nullptr) {
            return LogLevel::warn;
        }
        if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
        if (std::strcmp(env, "info") == 0) return LogLevel::info;
        if (std::strcmp(env, "warn") == 0) return LogLevel::warn;
        if (std::strcmp(env, "error") == 0) return LogLevel::error;
        if (std::strcmp(env, "off") == 0) return LogLevel::off;
        return LogLevel::warn;
    }();
    return cached;
}

void log_message(LogLevel level, const std::string& msg) {
    if (level < log_threshold()) {
        return;
    }
    static const char* names[] = {"debug", "info", "warn", "error"};
    std::fprintf(stderr, "[%s] %s\n", names[static_cast<int>(level)], msg.c_str());
}

} // namespace rainsense
