//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RAINSENSE_LOG_HPP
#define RAINSENSE_LOG_HPP

#include <cstdio>
#include <string>

namespace rainsense {

enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

// Threshold comes from the RAINSENSE_LOG environment variable
// (debug|info|warn|error|off); default is warn.
LogLevel log_threshold();

void log_message(LogLevel level, const std::string& msg);

inline void log_debug(const std::string& msg) { log_message(LogLevel::debug, msg); }
inline void log_info(const std::string& msg) { log_message(LogLevel::info, msg); }
inline void log_warn(const std::string& msg) { log_message(LogLevel::warn, msg); }
inline void log_error(const std::string& msg) { log_message(LogLevel::error, msg); }

} // namespace rainsense

#endif // RAINSENSE_LOG_HPP
