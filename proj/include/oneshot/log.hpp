#pragma once

// Minimal stderr logging. The level comes from ONESHOT_LOG = error | info | debug
// (default error).

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>
#include <string_view>

namespace oneshot::log {

enum class Level { error = 0, info = 1, debug = 2 };

inline Level parse_level(std::string_view s) {
  if (s == "debug") return Level::debug;
  if (s == "info") return Level::info;
  return Level::error;
}

inline Level level() {
  static const Level lvl = [] {
    const char* env = std::getenv("ONESHOT_LOG");
    return env ? parse_level(env) : Level::error;
  }();
  return lvl;
}

inline void write(Level at, std::string_view tag, const std::string& msg) {
  if (static_cast<int>(at) > static_cast<int>(level())) return;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[" << tag << "] " << msg << '\n';
}

inline void error(const std::string& msg) { write(Level::error, "error", msg); }
inline void info(const std::string& msg) { write(Level::info, "info", msg); }
inline void debug(const std::string& msg) { write(Level::debug, "debug", msg); }

}  // namespace oneshot::log
