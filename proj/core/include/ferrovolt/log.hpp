#pragma once

#include <string>

namespace ferrovolt {

enum class LogLevel { Debug = 0, Info = 1, Warning = 2, Error = 3, Quiet = 4 };

void set_log_level(LogLevel level);
LogLevel log_level();

// Parses "debug" | "info" | "warning" | "error" | "quiet"; throws ConfigError otherwise.
LogLevel parse_log_level(const std::string& name);

void log_debug(const std::string& msg);
void log_info(const std::string& msg);
void log_warning(const std::string& msg);
void log_error(const std::string& msg);

}  // namespace ferrovolt
