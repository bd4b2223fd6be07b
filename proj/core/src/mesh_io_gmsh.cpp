// Gmsh MSH ASCII parsing for planar multi-region cases.  Supports the two
// format generations in common circulation (legacy 2.2 and 4.1).  All 2D
// elements become prism cells via extrude_planar; physical surface names tag
// regions, physical curve names tag boundary/interface patches.

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ferrovolt/error.hpp"
#include "ferrovolt/mesh_builder.hpp"
#include "ferrovolt/mesh_io.hpp"

namespace ferrovolt {

namespace {

struct Physical {
  int dim = -1;
  std::string name;
};

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw IoError(path + ": " + msg);
}

std::string line_or_fail(std::istream& in, const std::string& path, const char* what) {
  std::string line;
  if (!std::getline(in, line)) fail(path, std::string("unexpected end of file in ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void skip_to_section_end(std::istream& in, const std::string& path, const std::string& section) {
  std::string line;
  const std::string end = "$End" + section;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == end) return;
  }
  fail(path, "missing " + end);
}

std::map<int, Physical> parse_physical_names(std::istream& in, const std::string& path) {
  std::map<int, Physical> result;
  std::istringstream hdr(line_or_fail(in, path, "$PhysicalNames"));
  int count = 0;
  hdr >> count;
  for (int i = 0; i < count; ++i) {
    std::istringstream ls(line_or_fail(in, path, "$PhysicalNames"));
    Physical ph;
    int tag = 0;
    ls >> ph.dim >> tag;
    std::string rest;
    std::getline(ls, rest);
    const auto q0 = rest.find('"');
    const auto q1 = rest.rfind('"');
    if (q0 == std::string::npos || q1 <= q0) fail(path, "malformed physical name entry");
    ph.name = rest.substr(q0 + 1, q1 - q0 - 1);
    result[tag] = ph;
  }
  skip_to_section_end(in, path, "PhysicalNames");
  return result;
}

std::string physical_name(const std::map<int, Physical>& names, int tag, int dim) {
  auto it = names.find(tag);
  if (it != names.end() && it->second.dim == dim && !it->second.name.empty())
    return it->second.name;
  std::ostringstream os;
  os << (dim == 2 ? "region_" : "physical_") << tag;
  return os.str();
}

// Nodes arrive with arbitrary ids; compact them and check planarity.
class NodeTable {
 public:
  int add(const std::string& path, long id, double x, double y, double z) {
    if (ids_.count(id)) fail(path, "duplicate node id " + std::to_string(id));
    const int idx = static_cast<int>(points_.size());
    ids_[id] = idx;
    points_.push_back({x, y, z});
    zMin_ = std::min(zMin_, z);
    zMax_ = std::max(zMax_, z);
    return idx;
  }
  int lookup(const std::string& path, long id) const {
    auto it = ids_.find(id);
    if (it == ids_.end()) fail(path, "element references unknown node " + std::to_string(id));
    return it->second;
  }
  void check_planar(const std::string& path) const {
    if (points_.empty()) fail(path, "mesh has no nodes");
    if (zMax_ - zMin_ > 1e-9 * (1.0 + std::abs(zMax_)))
      fail(path, "nodes are not coplanar; only planar 2D meshes are supported");
  }
  std::vector<Vec3> take() { return std::move(points_); }

 private:
  std::map<long, int> ids_;
  std::vector<Vec3> points_;
  double zMin_ = 1e300;
  double zMax_ = -1e300;
};

int element_node_count(int type) {
  switch (type) {
    case 1: return 2;   // line
    case 2: return 3;   // triangle
    case 3: return 4;   // quad
    case 15: return 1;  // point
    default: return -1;
  }
}

bool is_volume_type(int type) {
  return type == 4 || type == 5 || type == 6 || type == 7;  // tet/hex/prism/pyramid
}

MultiRegionMesh finish(const std::string& path, NodeTable& nodes, PlanarMesh& planar) {
  nodes.check_planar(path);
  planar.points = nodes.take();
  if (planar.elems.empty()) fail(path, "mesh contains no 2D elements");
  try {
    return extrude_planar(planar);
  } catch (const MeshError& e) {
    throw MeshError(path + ": " + e.what());
  }
}

MultiRegionMesh load_gmsh_v2(std::istream& in, const std::string& path) {
  NodeTable nodes;
  PlanarMesh planar;
  std::map<int, Physical> physicals;

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "$PhysicalNames") {
      physicals = parse_physical_names(in, path);
    } else if (line == "$Nodes") {
      std::istringstream hdr(line_or_fail(in, path, "$Nodes"));
      long count = 0;
      hdr >> count;
      for (long i = 0; i < count; ++i) {
        std::istringstream ls(line_or_fail(in, path, "$Nodes"));
        long id;
        double x, y, z;
        if (!(ls >> id >> x >> y >> z)) fail(path, "malformed node line");
        nodes.add(path, id, x, y, z);
      }
      skip_to_section_end(in, path, "Nodes");
    } else if (line == "$Elements") {
      std::istringstream hdr(line_or_fail(in, path, "$Elements"));
      long count = 0;
      hdr >> count;
      for (long i = 0; i < count; ++i) {
        std::istringstream ls(line_or_fail(in, path, "$Elements"));
        long id;
        int type, ntags;
        if (!(ls >> id >> type >> ntags)) fail(path, "malformed element line");
        if (is_volume_type(type))
          fail(path, "element " + std::to_string(id) + " is a volume element (not supported)");
        const int nNodes = element_node_count(type);
        if (nNodes < 0)
          fail(path, "element " + std::to_string(id) + " has unsupported type " +
                         std::to_string(type));
        std::vector<int> tags(ntags);
        for (int t = 0; t < ntags; ++t)
          if (!(ls >> tags[t])) fail(path, "malformed element tags");
        std::vector<int> vs(nNodes);
        for (int n = 0; n < nNodes; ++n) {
          long nid;
          if (!(ls >> nid)) fail(path, "malformed element node list");
          vs[n] = nodes.lookup(path, nid);
        }
        if (type == 15) continue;
        if (ntags < 1 || tags[0] == 0)
          fail(path, "element " + std::to_string(id) + " has no physical tag");
        if (type == 1) {
          planar.taggedEdges.push_back({vs[0], vs[1], physical_name(physicals, tags[0], 1)});
        } else {
          planar.elems.push_back({vs, physical_name(physicals, tags[0], 2)});
        }
      }
      skip_to_section_end(in, path, "Elements");
    } else if (!line.empty() && line[0] == '$' && line.rfind("$End", 0) != 0) {
      skip_to_section_end(in, path, line.substr(1));
    }
  }
  return finish(path, nodes, planar);
}

MultiRegionMesh load_gmsh_v4(std::istream& in, const std::string& path) {
  NodeTable nodes;
  PlanarMesh planar;
  std::map<int, Physical> physicals;
  // (dim, entity tag) -> physical tag; 0 when the entity carries none.
  std::map<std::pair<int, int>, int> entityPhysical;

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "$PhysicalNames") {
      physicals = parse_physical_names(in, path);
    } else if (line == "$Entities") {
      std::istringstream hdr(line_or_fail(in, path, "$Entities"));
      long nPoints, nCurves, nSurfaces, nVolumes;
      if (!(hdr >> nPoints >> nCurves >> nSurfaces >> nVolumes))
        fail(path, "malformed $Entities header");
      for (long i = 0; i < nPoints; ++i) {
        std::istringstream ls(line_or_fail(in, path, "$Entities"));
        int tag;
        double x, y, z;
        long nphys;
        ls >> tag >> x >> y >> z >> nphys;
        // point physicals unused
      }
      auto read_extended = [&](int dim, long n) {
        for (long i = 0; i < n; ++i) {
          std::istringstream ls(line_or_fail(in, path, "$Entities"));
          int tag;
          double bb;
          ls >> tag;
          for (int b = 0; b < 6; ++b) ls >> bb;
          long nphys = 0;
          ls >> nphys;
          int phys = 0;
          for (long p = 0; p < nphys; ++p) {
            int t;
            ls >> t;
            if (p == 0) phys = t;
          }
          if (nphys > 1)
            fail(path, "entity of dim " + std::to_string(dim) + " tag " + std::to_string(tag) +
                           " carries multiple physical tags");
          entityPhysical[{dim, tag}] = phys;
        }
      };
      read_extended(1, nCurves);
      read_extended(2, nSurfaces);
      read_extended(3, nVolumes);
      skip_to_section_end(in, path, "Entities");
    } else if (line == "$Nodes") {
      std::istringstream hdr(line_or_fail(in, path, "$Nodes"));
      long nBlocks, nNodes, minTag, maxTag;
      if (!(hdr >> nBlocks >> nNodes >> minTag >> maxTag)) fail(path, "malformed $Nodes header");
      for (long b = 0; b < nBlocks; ++b) {
        std::istringstream bs(line_or_fail(in, path, "$Nodes"));
        int dim, tag, parametric;
        long inBlock;
        if (!(bs >> dim >> tag >> parametric >> inBlock)) fail(path, "malformed node block");
        std::vector<long> ids(inBlock);
        for (long i = 0; i < inBlock; ++i) {
          std::istringstream ls(line_or_fail(in, path, "$Nodes"));
          if (!(ls >> ids[i])) fail(path, "malformed node tag");
        }
        for (long i = 0; i < inBlock; ++i) {
          std::istringstream ls(line_or_fail(in, path, "$Nodes"));
          double x, y, z;
          if (!(ls >> x >> y >> z)) fail(path, "malformed node coordinates");
          nodes.add(path, ids[i], x, y, z);
        }
      }
      skip_to_section_end(in, path, "Nodes");
    } else if (line == "$Elements") {
      std::istringstream hdr(line_or_fail(in, path, "$Elements"));
      long nBlocks, nElems, minTag, maxTag;
      if (!(hdr >> nBlocks >> nElems >> minTag >> maxTag))
        fail(path, "malformed $Elements header");
      for (long b = 0; b < nBlocks; ++b) {
        std::istringstream bs(line_or_fail(in, path, "$Elements"));
        int dim, tag, type;
        long inBlock;
        if (!(bs >> dim >> tag >> type >> inBlock)) fail(path, "malformed element block");
        if (dim == 3)
          fail(path, "entity tag " + std::to_string(tag) +
                         ": volume elements are not supported");
        const int nNodes = element_node_count(type);
        if (nNodes < 0 && dim >= 1)
          fail(path, "unsupported element type " + std::to_string(type));
        const int phys = entityPhysical.count({dim, tag}) ? entityPhysical[{dim, tag}] : 0;
        for (long i = 0; i < inBlock; ++i) {
          std::istringstream ls(line_or_fail(in, path, "$Elements"));
          long id;
          if (!(ls >> id)) fail(path, "malformed element line");
          std::vector<int> vs(std::max(nNodes, 0));
          for (int n = 0; n < nNodes; ++n) {
            long nid;
            if (!(ls >> nid)) fail(path, "malformed element node list");
            vs[n] = nodes.lookup(path, nid);
          }
          if (dim == 0) continue;
          if (dim == 1) {
            if (phys != 0)
              planar.taggedEdges.push_back({vs[0], vs[1], physical_name(physicals, phys, 1)});
            continue;
          }
          if (phys == 0)
            fail(path, "element " + std::to_string(id) +
                           " lies on surface entity " + std::to_string(tag) +
                           " which has no physical tag");
          planar.elems.push_back({vs, physical_name(physicals, phys, 2)});
        }
      }
      skip_to_section_end(in, path, "Elements");
    } else if (!line.empty() && line[0] == '$' && line.rfind("$End", 0) != 0) {
      skip_to_section_end(in, path, line.substr(1));
    }
  }
  return finish(path, nodes, planar);
}

}  // namespace

MultiRegionMesh load_gmsh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file '" + path + "'");

  std::string line = line_or_fail(in, path, "header");
  if (line != "$MeshFormat") fail(path, "not a Gmsh MSH file (missing $MeshFormat)");
  std::istringstream hdr(line_or_fail(in, path, "header"));
  double version = 0.0;
  int fileType = 0, dataSize = 0;
  if (!(hdr >> version >> fileType >> dataSize)) fail(path, "malformed $MeshFormat");
  if (fileType != 0) fail(path, "binary MSH files are not supported");
  skip_to_section_end(in, path, "MeshFormat");

  if (version >= 2.199 && version < 2.3) return load_gmsh_v2(in, path);
  if (version >= 4.099 && version < 4.2) return load_gmsh_v4(in, path);
  std::ostringstream os;
  os << "unsupported MSH version " << version << " (expected 2.2 or 4.1)";
  fail(path, os.str());
}

}  // namespace ferrovolt
