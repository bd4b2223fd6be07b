#pragma once

// Built-in mesh generation for the planar cases.
//
// Two generator families:
//  - Cartesian: axis-aligned grid with lines snapped to every rectangular
//    body edge.  Fully orthogonal; bodies must be rectangles.
//  - Body-fitted: the domain is cut into full-height strips, one body per
//    strip, and each strip is meshed as an O-grid between the body surface
//    and the strip rectangle, with scaled rings plus a centre fan inside the
//    body.  Strip edges reuse identical node sets on both sides, so the
//    assembled mesh is conformal.
//
// Both families support quad or triangle cells and a seeded jitter of nodes
// interior to one region, which turns an orthogonal mesh into a controlled
// non-orthogonal variant of the same case.

#include <string>
#include <vector>

#include "ferrovolt/mesh.hpp"
#include "ferrovolt/mesh_builder.hpp"

namespace ferrovolt {

struct GenBody {
  std::string region;
  bool isDisc = true;
  Vec3 center;         // z ignored
  double radius = 0.0; // disc
  double hw = 0.0;     // rect half-width
  double hh = 0.0;     // rect half-height
};

struct GenSpec {
  enum class Kind { BodyFitted, Cartesian };
  enum class Split { Auto, X, Y };

  Kind kind = Kind::BodyFitted;
  double x0 = -0.5, y0 = -0.5, x1 = 0.5, y1 = 0.5;
  std::string background = "air";
  std::string outerPatch = "outer";
  std::vector<GenBody> bodies;
  double h = 0.05;         // target node spacing on the outer boundary
  Split split = Split::Auto;
  bool triangles = false;
  double jitter = 0.0;     // fraction of the shortest incident edge
  unsigned seed = 1;
  double thickness = 1.0;
};

// Planar cell soup before extrusion; exposed for inspection in tests.
PlanarMesh generate_planar(const GenSpec& spec);

// generate_planar + extrusion into unit-thickness prisms.
MultiRegionMesh generate_mesh(const GenSpec& spec);

// Single-region 3D hex block with six active patches named xmin..zmax.
// jitterFrac displaces interior points by a fraction of the smallest grid
// step; used to exercise the operators on genuinely non-orthogonal 3D cells.
MultiRegionMesh hex_box(int nx, int ny, int nz, const Vec3& lo, const Vec3& hi,
                        double jitterFrac = 0.0, unsigned seed = 1);

}  // namespace ferrovolt
