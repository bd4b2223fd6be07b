// Post-processing over a (possibly unsolved) solution state: cell-centroid
// line sampling, interface jump diagnostics, and export to legacy VTK ASCII
// and CSV.  Everything here is read-only with respect to the solution.
#pragma once

#include <string>
#include <vector>

#include "ferrovolt/case_setup.hpp"
#include "ferrovolt/magnetostatics.hpp"
#include "ferrovolt/mesh.hpp"

namespace ferrovolt {

struct SampleRow {
  double s = 0.0;  // arc length from p0
  Vec3 x;
  bool present = false;  // false when the point lies outside every region
  Vec3 value;            // containing cell's centroid value
};

struct SampleTable {
  std::string field;  // "A" or "B"
  std::vector<SampleRow> rows;
};

// n uniformly spaced points on [p0, p1], each carrying the value of the cell
// that contains it (piecewise-constant sampling; no interpolation).  Points
// outside the mesh are marked absent.
SampleTable sample_line(const MultiRegionMesh& mesh, const SolveState& state,
                        const SampleSpec& spec);

// Locates the cell containing x; returns false if no region contains it.
// Convex cells only: the test is against all face planes with a relative
// tolerance, and the first match in region/cell order wins.
bool locate_cell(const MultiRegionMesh& mesh, const Vec3& x, int& region, int& cell);

struct JumpRow {
  Vec3 centroid;
  double area = 0.0;
  double dBn = 0.0;     // (B_B - B_A) . e_n, one-sided extrapolated
  Vec3 dBt;             // tangential jump vector
  double residual = 0.0;  // |dB - mu0 K x e_n| against the stored K
};

struct JumpReport {
  std::vector<JumpRow> rows;  // pairs of every interface, in order
  double maxAbsDBn = 0.0;
  double l2DBn = 0.0;  // area-weighted RMS
  double maxTangJump = 0.0;
  double l2TangJump = 0.0;
  double maxResidual = 0.0;
  double l2Residual = 0.0;
  double maxMu0K = 0.0;  // scale reference, mu0 max |K|
};

// Evaluates the jump conditions dB.e_n = 0 and dB = mu0 K x e_n on every
// interface pair, with B extrapolated one-sided from both cells.
JumpReport interface_jump_report(const MultiRegionMesh& mesh, const SolveState& state);

// Legacy VTK ASCII unstructured-grid export: one file per region named
// <stem>_<region>.vtk plus a combined <stem>.vtk with a region index array.
// Cell data: A, B, M, J, chi.  Throws IoError on unwritable paths.
void write_vtk(const MultiRegionMesh& mesh, const SolveState& state, const std::string& stem);

// CSV with header s,x,y,z,<field>_x,<field>_y,<field>_z; absent points leave
// the value columns empty.  LF line endings, '.' decimal separator.
void write_csv_samples(const SampleTable& table, const std::string& path);

}  // namespace ferrovolt
