#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ferrovolt/vec.hpp"

namespace ferrovolt {

// Flat key-value store parsed from an INI-style case file.  Section headers
// prefix the keys inside them, so
//
//   [region.magnet]
//   mu_r = 1.0
//
// defines the key "region.magnet.mu_r".  Values keep their raw text; typed
// accessors parse on demand and record the key as consumed.  After a driver
// has read everything it understands, reject_unconsumed() turns leftover keys
// into a hard error, which catches misspelled options.
class ConfigDict {
 public:
  ConfigDict() = default;

  // Parses `path`.  '#' and ';' start comments.  Duplicate keys in one file
  // are an error; use --set overrides to change values from the command line.
  static ConfigDict load(const std::string& path);

  // Parses in-memory text; `label` appears in error messages.
  static ConfigDict parse(const std::string& text, const std::string& label = "<config>");

  // Applies a "key=value" override, replacing any existing value.
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  double require_double(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  Vec3 get_vec3(const std::string& key, const Vec3& fallback) const;
  Vec3 require_vec3(const std::string& key) const;

  // Sorted section names appearing as "<prefix><name>.<rest>", e.g.
  // sections_with_prefix("region.") -> {"air", "magnet"}.  Does not mark
  // anything consumed.
  std::vector<std::string> sections_with_prefix(const std::string& prefix) const;

  // Sorted keys directly under "<section>.", with the prefix stripped.
  std::vector<std::string> keys_in_section(const std::string& section) const;

  // Throws ConfigError listing every key never touched by an accessor.
  void reject_unconsumed() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::string raw(const std::string& key) const;  // marks consumed; throws if absent

  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;  // key -> line number for error messages
  std::string label_;
  mutable std::set<std::string> consumed_;
};

double parse_double(const std::string& text, const std::string& what);
int parse_int(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);
Vec3 parse_vec3(const std::string& text, const std::string& what);

}  // namespace ferrovolt
