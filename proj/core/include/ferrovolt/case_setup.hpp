// Turns a parsed case config into a runnable setup: mesh (generated in-process
// or loaded from a file), per-region materials, a boundary condition for every
// patch, solver controls, sample paths, and output options.
//
// The config grammar is INI with dotted keys:
//
//   [mesh]                 source = generate | file, plus generator keys
//   [mesh.body.NAME]       embedded body of the generated mesh
//   [region.NAME]          mu_r, M, J for mesh region NAME
//   [boundary.PATCH]       type = fixedValue | zeroGradient, value, linear_*
//   [solver]               outer/inner iteration controls
//   [sample.NAME]          line sample: p0, p1, n, field
//   [output]               directory, vtk, iteration_log
//
// Every plain boundary patch must be covered by exactly one [boundary.*]
// section; interface and front/back patches are assigned automatically.
// Unknown keys anywhere are a hard error.
#pragma once

#include <string>
#include <vector>

#include "ferrovolt/config.hpp"
#include "ferrovolt/fields.hpp"
#include "ferrovolt/magnetostatics.hpp"
#include "ferrovolt/mesh.hpp"
#include "ferrovolt/mesh_gen.hpp"

namespace ferrovolt {

struct SampleSpec {
  std::string name;
  Vec3 p0, p1;
  int n = 100;
  std::string field = "B";  // "A" or "B"
};

struct OutputSpec {
  std::string directory = "out";  // relative to the case directory
  bool vtk = true;
  bool iterationLog = true;
};

struct CaseSetup {
  MultiRegionMesh mesh;
  std::vector<MaterialSpec> materials;              // per region
  std::vector<std::vector<BoundaryCondition>> bcs;  // [region][patch]
  OuterIterationControl control;
  std::vector<SampleSpec> samples;
  OutputSpec output;
};

// Reads the generator keys of [mesh].  Exposed separately for tests.
GenSpec gen_spec_from_config(ConfigDict& cfg);

// Builds the full setup and then rejects unconsumed keys.  baseDir anchors
// relative mesh paths.
CaseSetup case_from_config(ConfigDict& cfg, const std::string& baseDir);

// Parses <caseDir>/config.ini, applies "key=value" overrides, builds the case.
CaseSetup load_case(const std::string& caseDir,
                    const std::vector<std::string>& overrides = {});

// All-defaults boundary table: planar-excluded and interface patches are
// tagged as such, everything else zero-gradient.  Callers overwrite entries
// for the patches they pin.
std::vector<std::vector<BoundaryCondition>> default_bcs(const MultiRegionMesh& mesh);

}  // namespace ferrovolt
