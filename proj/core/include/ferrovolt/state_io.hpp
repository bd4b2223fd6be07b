// Plain-text persistence of the solution state (A, B, interface K) so that
// sampling and export can run as separate commands after a solve, plus the
// key=value run summary.
#pragma once

#include <string>

#include "ferrovolt/magnetostatics.hpp"
#include "ferrovolt/mesh.hpp"

namespace ferrovolt {

// Round-trip exact (printed with enough digits to reproduce the double).
void save_state(const MultiRegionMesh& mesh, const SolveState& state, const std::string& path);

// Loads into a state created for the same mesh; region names, cell counts and
// interface pair counts must match or IoError is thrown.
void load_state(const MultiRegionMesh& mesh, SolveState& state, const std::string& path);

struct RunSummary {
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  double finalResidual = 0.0;
  double wallSeconds = 0.0;
  std::string failure;
  GaugeReport gauge;
};

void write_summary(const RunSummary& s, const std::string& path);

}  // namespace ferrovolt
