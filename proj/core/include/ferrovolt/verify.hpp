// Built-in verification cases: a magnetized cylinder, a current-carrying
// wire, and a permeable cylinder in a uniform applied field, each meshed by
// the in-process generator and compared against the closed-form solution.
// The CLI verify command and the acceptance tests share these runners.
#pragma once

#include <string>
#include <vector>

#include "ferrovolt/analytic.hpp"
#include "ferrovolt/case_setup.hpp"

namespace ferrovolt {

struct OracleRun {
  std::string name;
  CaseSetup setup;
  AnalyticCase analytic;
  SolveState state;
  OuterIterationReport report;
  double wallSeconds = 0.0;
};

std::vector<std::string> oracle_case_names();

// hSurface is the target edge length next to the disc; the generated outer
// boundary is coarser by the perimeter ratio.  Cases use a disc of radius
// 0.0375 m centered in a 1 m box, so the boundary sits beyond 13 radii.
CaseSetup build_oracle_case(const std::string& name, double hSurface);

AnalyticCase oracle_analytic(const std::string& name);

// Builds and solves.  Divergence is reported, not thrown.
OracleRun run_oracle_case(const std::string& name, double hSurface);

// Max relative B error against the analytic interior field, over disc cells
// whose centroid is more than marginWidths local cell widths away from the
// interface.  Only meaningful for the two uniform-interior cases.
double interior_max_rel_error(const OracleRun& run, double marginWidths = 2.0);

// Volume-weighted relative L2 error of B_theta over cells with centroid
// radius in [rLo, rHi].
double btheta_rel_l2(const OracleRun& run, double rLo, double rHi);

// Largest one-sided A jump across the interface, relative to max |A|.
double a_jump_rel(const OracleRun& run);

struct VerifyResult {
  std::string name;
  bool pass = false;
  bool solved = false;
  double metric = 0.0;
  double tolerance = 0.0;
  std::vector<std::string> detail;  // human-readable lines for the report
};

// Runs one case at its default resolution and checks its headline tolerance.
VerifyResult verify_case(const std::string& name);

}  // namespace ferrovolt
