#pragma once

#include <iosfwd>
#include <string>

#include "ferrovolt/mesh.hpp"

namespace ferrovolt {

// Native plain-text polyhedral format: a global POINTS section followed by
// one REGION block per material region (FACES with owner/neighbour, CELLS
// count, PATCHES with name/start/count and an optional "excluded" flag).
// Interfaces are detected geometrically on load.  See README for the full
// grammar.
MultiRegionMesh load_internal(const std::string& path);
MultiRegionMesh read_internal(std::istream& in, const std::string& label);
void write_internal(const MultiRegionMesh& mesh, const std::string& path);

// Gmsh MSH ASCII reader, versions 2.2 and 4.1.  Physical surfaces map to
// regions, physical curves to boundary patches; 2D elements are extruded to
// unit-thickness prisms.  Volume elements, binary files and higher-order
// elements are rejected.
MultiRegionMesh load_gmsh(const std::string& path);

// Dispatches on extension: ".msh" -> gmsh, anything else -> internal.
MultiRegionMesh load_mesh(const std::string& path);

}  // namespace ferrovolt
