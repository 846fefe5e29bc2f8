// Copyright 2026 The ldsc Authors. All Rights Reserved.
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

#pragma once

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>

namespace ldsc::log {

enum class Level { kError = 0, kInfo = 1, kDebug = 2 };

// Verbosity comes from LDSC_LOG={error,info,debug}; default is info.
inline Level threshold() {
  static const Level level = [] {
    const char* env = std::getenv("LDSC_LOG");
    if (env == nullptr) return Level::kInfo;
    const std::string_view v(env);
    if (v == "error") return Level::kError;
    if (v == "debug") return Level::kDebug;
    return Level::kInfo;
  }();
  return level;
}

template <class... Args>
void write(Level level, std::string_view tag, const Args&... args) {
  if (static_cast<int>(level) > static_cast<int>(threshold())) return;
  std::ostringstream os;
  os << "[" << tag << "] ";
  (os << ... << args);
  os << '\n';
  std::cerr << os.str();
}

template <class... Args>
void error(const Args&... args) {
  write(Level::kError, "error", args...);
}
template <class... Args>
void warn(const Args&... args) {
  write(Level::kInfo, "warn", args...);
}
template <class... Args>
void info(const Args&... args) {
  write(Level::kInfo, "info", args...);
}
template <class... Args>
void debug(const Args&... args) {
  write(Level::kDebug, "debug", args...);
}

}  // namespace ldsc::log
