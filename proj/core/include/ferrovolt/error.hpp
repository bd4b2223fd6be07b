#pragma once

#include <stdexcept>
#include <string>

namespace ferrovolt {

// Mesh topology/geometry violations (bad connectivity, negative volumes,
// unpaired interface faces, unknown patches, ...).
class MeshError : public std::runtime_error {
 public:
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

// Case configuration problems: unknown keys, missing sections, values out of
// range.  Maps to the usage/config exit code in the CLI.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// File-level problems: unreadable, unparseable, unsupported format version.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ferrovolt
