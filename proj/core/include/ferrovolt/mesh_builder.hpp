#pragma once

// Builds a MultiRegionMesh from a planar cell soup by extruding every 2D
// element into a unit-thickness prism (z in [-t/2, +t/2]).  Shared edges
// between elements of the same region become internal faces; edges shared
// across regions become interface face pairs; remaining edges must carry a
// patch tag.  Front/back prism faces land in a planar-excluded patch named
// "frontAndBack".

#include <string>
#include <vector>

#include "ferrovolt/mesh.hpp"

namespace ferrovolt {

struct PlanarMesh {
  std::vector<Vec3> points;  // z ignored

  struct Elem {
    std::vector<int> verts;  // CCW polygon
    std::string region;
  };
  std::vector<Elem> elems;

  struct TaggedEdge {
    int v0 = -1;
    int v1 = -1;
    std::string patch;
  };
  std::vector<TaggedEdge> taggedEdges;
};

// Extrudes, detects interfaces, builds geometry and validates.  Throws
// MeshError on untagged boundary edges, conflicting tags, or geometry
// violations.
MultiRegionMesh extrude_planar(const PlanarMesh& planar, double thickness = 1.0);

}  // namespace ferrovolt
