#include "ferrovolt/log.hpp"

#include <iostream>

#include "ferrovolt/error.hpp"

namespace ferrovolt {

namespace {
LogLevel g_level = LogLevel::Info;

void emit(LogLevel level, const char* tag, const std::string& msg) {
  if (static_cast<int>(level) < static_cast<int>(g_level)) return;
  std::cerr << tag << msg << "\n";
}
}  // namespace

void set_log_level(LogLevel level) { g_level = level; }
LogLevel log_level() { return g_level; }

LogLevel parse_log_level(const std::string& name) {
  if (name == "debug") return LogLevel::Debug;
  if (name == "info") return LogLevel::Info;
  if (name == "warning" || name == "warn") return LogLevel::Warning;
  if (name == "error") return LogLevel::Error;
  if (name == "quiet") return LogLevel::Quiet;
  throw ConfigError("unknown log level '" + name + "' (expected debug|info|warning|error|quiet)");
}

void log_debug(const std::string& msg) { emit(LogLevel::Debug, "[debug] ", msg); }
void log_info(const std::string& msg) { emit(LogLevel::Info, "", msg); }
void log_warning(const std::string& msg) { emit(LogLevel::Warning, "warning: ", msg); }
void log_error(const std::string& msg) { emit(LogLevel::Error, "error: ", msg); }

}  // namespace ferrovolt
