#include "ferrovolt/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ferrovolt/error.hpp"

namespace ferrovolt {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool valid_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

void check_key(const std::string& key, const std::string& where) {
  if (key.empty()) throw ConfigError(where + ": empty key");
  for (char c : key) {
    if (!valid_key_char(c)) {
      throw ConfigError(where + ": invalid character '" + std::string(1, c) + "' in key '" + key +
                        "'");
    }
  }
}

}  // namespace

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError(what + ": expected a number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (end == t.c_str() || *end != '\0' || errno == ERANGE || v < -2147483647L ||
      v > 2147483647L) {
    throw ConfigError(what + ": expected an integer, got '" + text + "'");
  }
  return static_cast<int>(v);
}

bool parse_bool(const std::string& text, const std::string& what) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "true" || t == "on" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "off" || t == "no" || t == "0") return false;
  throw ConfigError(what + ": expected a boolean, got '" + text + "'");
}

Vec3 parse_vec3(const std::string& text, const std::string& what) {
  std::istringstream in(trim(text));
  Vec3 v;
  std::string extra;
  if (!(in >> v.x >> v.y >> v.z) || (in >> extra)) {
    throw ConfigError(what + ": expected three numbers, got '" + text + "'");
  }
  return v;
}

ConfigDict ConfigDict::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

ConfigDict ConfigDict::parse(const std::string& text, const std::string& label) {
  ConfigDict d;
  d.label_ = label;

  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = label + ":" + std::to_string(lineNo);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      check_key(section, where);
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    check_key(key, where);
    if (!section.empty()) key = section + "." + key;

    auto [it, inserted] = d.values_.emplace(key, value);
    if (!inserted) {
      throw ConfigError(where + ": duplicate key '" + key + "' (first set on line " +
                        std::to_string(d.lines_[key]) + ")");
    }
    d.lines_[key] = lineNo;
  }
  return d;
}

void ConfigDict::apply_override(const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string key = trim(assignment.substr(0, eq));
  check_key(key, "override");
  values_[key] = trim(assignment.substr(eq + 1));
  lines_[key] = 0;
}

bool ConfigDict::has(const std::string& key) const { return values_.count(key) != 0; }

std::string ConfigDict::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(label_ + ": missing required key '" + key + "'");
  consumed_.insert(key);
  return it->second;
}

std::string ConfigDict::get_string(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  return raw(key);
}

std::string ConfigDict::require_string(const std::string& key) const { return raw(key); }

double ConfigDict::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  return parse_double(raw(key), label_ + ": key '" + key + "'");
}

double ConfigDict::require_double(const std::string& key) const {
  return parse_double(raw(key), label_ + ": key '" + key + "'");
}

int ConfigDict::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  return parse_int(raw(key), label_ + ": key '" + key + "'");
}

bool ConfigDict::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  return parse_bool(raw(key), label_ + ": key '" + key + "'");
}

Vec3 ConfigDict::get_vec3(const std::string& key, const Vec3& fallback) const {
  if (!has(key)) return fallback;
  return parse_vec3(raw(key), label_ + ": key '" + key + "'");
}

Vec3 ConfigDict::require_vec3(const std::string& key) const {
  return parse_vec3(raw(key), label_ + ": key '" + key + "'");
}

std::vector<std::string> ConfigDict::sections_with_prefix(const std::string& prefix) const {
  std::set<std::string> names;
  for (const auto& [key, value] : values_) {
    if (key.size() <= prefix.size() || key.compare(0, prefix.size(), prefix) != 0) continue;
    const size_t dot = key.find('.', prefix.size());
    if (dot == std::string::npos) continue;  // "<prefix>x" without ".rest" is not a section
    names.insert(key.substr(prefix.size(), dot - prefix.size()));
  }
  return {names.begin(), names.end()};
}

std::vector<std::string> ConfigDict::keys_in_section(const std::string& section) const {
  const std::string prefix = section + ".";
  std::vector<std::string> out;
  for (const auto& [key, value] : values_) {
    if (key.size() > prefix.size() && key.compare(0, prefix.size(), prefix) == 0) {
      out.push_back(key.substr(prefix.size()));
    }
  }
  return out;
}

void ConfigDict::reject_unconsumed() const {
  std::vector<std::string> unknown;
  for (const auto& [key, value] : values_) {
    if (!consumed_.count(key)) unknown.push_back(key);
  }
  if (unknown.empty()) return;
  std::string msg = label_ + ": unknown key";
  if (unknown.size() > 1) msg += "s";
  msg += ":";
  for (const auto& k : unknown) msg += " '" + k + "'";
  throw ConfigError(msg);
}

}  // namespace ferrovolt
