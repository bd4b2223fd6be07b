#include "ferrovolt/mesh_builder.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "ferrovolt/error.hpp"
#include "ferrovolt/log.hpp"

namespace ferrovolt {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

double signed_area(const std::vector<Vec3>& pts, const std::vector<int>& verts) {
  double a = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const Vec3& p = pts[verts[i]];
    const Vec3& q = pts[verts[(i + 1) % verts.size()]];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

}  // namespace

MultiRegionMesh extrude_planar(const PlanarMesh& planar, double thickness) {
  if (!(thickness > 0.0)) throw MeshError("extrusion thickness must be positive");

  MultiRegionMesh mesh;

  // Regions in order of first appearance.
  std::map<std::string, int> regionIdx;
  std::vector<std::vector<int>> regionElems;  // global elem ids per region
  for (std::size_t e = 0; e < planar.elems.size(); ++e) {
    const auto& el = planar.elems[e];
    if (el.verts.size() < 3) throw MeshError("planar element with fewer than 3 vertices");
    auto [it, inserted] = regionIdx.try_emplace(el.region, static_cast<int>(mesh.regions.size()));
    if (inserted) {
      mesh.regions.emplace_back();
      mesh.regions.back().name = el.region;
      regionElems.emplace_back();
    }
    regionElems[it->second].push_back(static_cast<int>(e));
  }
  if (mesh.regions.empty()) throw MeshError("planar mesh has no elements");

  // Normalize winding to CCW so extruded side faces point outward of their owner.
  std::vector<std::vector<int>> elemVerts(planar.elems.size());
  for (std::size_t e = 0; e < planar.elems.size(); ++e) {
    elemVerts[e] = planar.elems[e].verts;
    if (signed_area(planar.points, elemVerts[e]) < 0.0)
      std::reverse(elemVerts[e].begin(), elemVerts[e].end());
  }

  // Global 3D points: 2D point i becomes bottom 2*i and top 2*i+1.
  mesh.points.resize(planar.points.size() * 2);
  for (std::size_t i = 0; i < planar.points.size(); ++i) {
    const Vec3& p = planar.points[i];
    mesh.points[2 * i] = {p.x, p.y, -0.5 * thickness};
    mesh.points[2 * i + 1] = {p.x, p.y, +0.5 * thickness};
  }

  // Edge incidence over all elements.
  struct EdgeUse {
    int elem;
    int a, b;  // directed as traversed by the element (CCW)
  };
  std::map<EdgeKey, std::vector<EdgeUse>> edges;
  for (std::size_t e = 0; e < planar.elems.size(); ++e) {
    const auto& vs = elemVerts[e];
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const int a = vs[i];
      const int b = vs[(i + 1) % vs.size()];
      edges[edge_key(a, b)].push_back({static_cast<int>(e), a, b});
    }
  }

  std::map<EdgeKey, std::string> tagOf;
  for (const auto& te : planar.taggedEdges) {
    const auto key = edge_key(te.v0, te.v1);
    auto [it, inserted] = tagOf.try_emplace(key, te.patch);
    if (!inserted && it->second != te.patch) {
      std::ostringstream os;
      os << "edge (" << te.v0 << "," << te.v1 << ") tagged both '" << it->second << "' and '"
         << te.patch << "'";
      throw MeshError(os.str());
    }
  }

  // Region-local cell ids.
  std::vector<int> localCell(planar.elems.size(), -1);
  std::vector<int> regionOf(planar.elems.size(), -1);
  for (std::size_t r = 0; r < regionElems.size(); ++r)
    for (std::size_t c = 0; c < regionElems[r].size(); ++c) {
      localCell[regionElems[r][c]] = static_cast<int>(c);
      regionOf[regionElems[r][c]] = static_cast<int>(r);
    }

  // Classify edges and emit side faces per region.  Boundary and interface
  // faces are grouped by patch name; interface faces of an untagged edge get
  // an automatic per-region-pair patch.
  struct PendingFace {
    std::vector<int> verts;
    int owner;
    int neighbour;  // -1 for boundary/interface
  };
  const int nRegions = static_cast<int>(mesh.regions.size());
  std::vector<std::vector<PendingFace>> internalFaces(nRegions);
  std::vector<std::map<std::string, std::vector<PendingFace>>> patchFaces(nRegions);

  auto side_quad = [](int a, int b) {
    return std::vector<int>{2 * a, 2 * b, 2 * b + 1, 2 * a + 1};
  };

  for (const auto& [key, uses] : edges) {
    if (uses.size() > 2) {
      std::ostringstream os;
      os << "edge (" << key.first << "," << key.second << ") used by " << uses.size()
         << " elements";
      throw MeshError(os.str());
    }
    const auto tagIt = tagOf.find(key);

    if (uses.size() == 2 && regionOf[uses[0].elem] == regionOf[uses[1].elem]) {
      const int r = regionOf[uses[0].elem];
      // Owner is the lower local cell id; use its traversal direction.
      const EdgeUse& u0 = localCell[uses[0].elem] <= localCell[uses[1].elem] ? uses[0] : uses[1];
      const EdgeUse& u1 = &u0 == &uses[0] ? uses[1] : uses[0];
      if (tagIt != tagOf.end())
        log_debug("ignoring patch tag '" + tagIt->second + "' on internal edge of region '" +
                  mesh.regions[r].name + "'");
      internalFaces[r].push_back({side_quad(u0.a, u0.b), localCell[u0.elem], localCell[u1.elem]});
      continue;
    }

    if (uses.size() == 2) {
      // Interface: each side gets its own outward boundary face.
      const int r0 = regionOf[uses[0].elem];
      const int r1 = regionOf[uses[1].elem];
      std::string patch;
      if (tagIt != tagOf.end()) {
        patch = tagIt->second;
      } else {
        const int ra = std::min(r0, r1);
        const int rb = std::max(r0, r1);
        patch = "itf:" + mesh.regions[ra].name + ":" + mesh.regions[rb].name;
      }
      for (const auto& u : uses)
        patchFaces[regionOf[u.elem]][patch].push_back({side_quad(u.a, u.b), localCell[u.elem], -1});
      continue;
    }

    // True boundary edge.
    const EdgeUse& u = uses[0];
    if (tagIt == tagOf.end()) {
      const Vec3& p = planar.points[key.first];
      const Vec3& q = planar.points[key.second];
      std::ostringstream os;
      os << "untagged boundary edge between (" << p.x << "," << p.y << ") and (" << q.x << ","
         << q.y << ") in region '" << mesh.regions[regionOf[u.elem]].name << "'";
      throw MeshError(os.str());
    }
    patchFaces[regionOf[u.elem]][tagIt->second].push_back({side_quad(u.a, u.b), localCell[u.elem], -1});
  }

  // Assemble regions: internal faces, tagged patches (sorted by name), then
  // the planar-excluded front/back patch.
  for (int r = 0; r < nRegions; ++r) {
    Region& region = mesh.regions[r];
    region.cells.assign(regionElems[r].size(), {});

    auto push_face = [&](PendingFace&& pf) {
      const int id = region.nFaces();
      Face face;
      face.verts = std::move(pf.verts);
      face.owner = pf.owner;
      face.neighbour = pf.neighbour;
      region.faces.push_back(std::move(face));
      region.cells[pf.owner].push_back(id);
      if (pf.neighbour >= 0) region.cells[pf.neighbour].push_back(id);
      return id;
    };

    for (auto& pf : internalFaces[r]) push_face(std::move(pf));
    region.nInternalFaces = region.nFaces();

    for (auto& [patchName, faces] : patchFaces[r]) {
      BoundaryPatch patch;
      patch.name = patchName;
      patch.start = region.nFaces();
      patch.count = static_cast<int>(faces.size());
      for (auto& pf : faces) push_face(std::move(pf));
      region.patches.push_back(std::move(patch));
    }

    // Front/back polygons; top as stored (outward +z), bottom reversed.
    BoundaryPatch fb;
    fb.name = "frontAndBack";
    fb.start = region.nFaces();
    fb.planarExcluded = true;
    for (std::size_t c = 0; c < regionElems[r].size(); ++c) {
      const auto& vs = elemVerts[regionElems[r][c]];
      PendingFace top;
      PendingFace bottom;
      for (int v : vs) top.verts.push_back(2 * v + 1);
      for (auto it = vs.rbegin(); it != vs.rend(); ++it) bottom.verts.push_back(2 * *it);
      top.owner = bottom.owner = static_cast<int>(c);
      top.neighbour = bottom.neighbour = -1;
      push_face(std::move(top));
      push_face(std::move(bottom));
    }
    fb.count = region.nFaces() - fb.start;
    region.patches.push_back(std::move(fb));

    region.facePatch.assign(region.nFaces(), -1);
    region.faceActive.assign(region.nFaces(), 1);
    for (std::size_t p = 0; p < region.patches.size(); ++p) {
      const auto& patch = region.patches[p];
      for (int f = patch.start; f < patch.start + patch.count; ++f) {
        region.facePatch[f] = static_cast<int>(p);
        if (patch.planarExcluded) region.faceActive[f] = 0;
      }
    }
  }

  detect_interfaces(mesh);
  validate_interface_pairing(mesh);
  build_geometry(mesh);
  return mesh;
}

}  // namespace ferrovolt
