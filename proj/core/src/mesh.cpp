#include "ferrovolt/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "ferrovolt/error.hpp"

namespace ferrovolt {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Area vector and centroid of a (possibly warped) polygon: fan about the
// vertex mean, centroid weighted by triangle area magnitude.
void face_metrics(const std::vector<Vec3>& points, const std::vector<int>& verts, Vec3& area,
                  Vec3& centroid) {
  const int n = static_cast<int>(verts.size());
  Vec3 vm{};
  for (int v : verts) vm += points[v];
  vm /= static_cast<double>(n);

  Vec3 sSum{};
  Vec3 cSum{};
  double aSum = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3& p0 = points[verts[i]];
    const Vec3& p1 = points[verts[(i + 1) % n]];
    const Vec3 a = 0.5 * cross(p0 - vm, p1 - vm);
    const double am = norm(a);
    sSum += a;
    cSum += (vm + p0 + p1) / 3.0 * am;
    aSum += am;
  }
  area = sSum;
  centroid = aSum > 0.0 ? cSum / aSum : vm;
}

std::string face_id(const Region& region, int f) {
  std::ostringstream os;
  os << "region '" << region.name << "' face " << f;
  return os.str();
}

}  // namespace

const BoundaryPatch* Region::findPatch(const std::string& patchName) const {
  for (const auto& p : patches)
    if (p.name == patchName) return &p;
  return nullptr;
}

int MultiRegionMesh::regionIndex(const std::string& name) const {
  for (std::size_t i = 0; i < regions.size(); ++i)
    if (regions[i].name == name) return static_cast<int>(i);
  return -1;
}

double MultiRegionMesh::diameter() const {
  if (points.empty()) return 0.0;
  Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
          std::numeric_limits<double>::max()};
  Vec3 hi{-lo.x, -lo.y, -lo.z};
  for (const auto& p : points) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    lo.z = std::min(lo.z, p.z);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
    hi.z = std::max(hi.z, p.z);
  }
  return norm(hi - lo);
}

void build_geometry(MultiRegionMesh& mesh) {
  for (auto& region : mesh.regions) {
    auto& g = region.geo;
    const int nFaces = region.nFaces();
    const int nCells = region.nCells();

    g.faceArea.assign(nFaces, Vec3{});
    g.faceAreaMag.assign(nFaces, 0.0);
    g.faceCentroid.assign(nFaces, Vec3{});
    g.ownerDist.assign(nFaces, 0.0);
    g.delta.assign(region.nInternalFaces, 0.0);
    g.rHat.assign(region.nInternalFaces, Vec3{});
    g.weight.assign(region.nInternalFaces, 0.0);
    g.nonOrthDeg.assign(region.nInternalFaces, 0.0);
    g.cellCentroid.assign(nCells, Vec3{});
    g.cellVolume.assign(nCells, 0.0);

    for (int f = 0; f < nFaces; ++f) {
      face_metrics(mesh.points, region.faces[f].verts, g.faceArea[f], g.faceCentroid[f]);
      g.faceAreaMag[f] = norm(g.faceArea[f]);
      if (!(g.faceAreaMag[f] > 0.0))
        throw MeshError(face_id(region, f) + ": degenerate face (zero area)");
    }

    // Cell volume and centroid by pyramid decomposition about the mean of the
    // cell's face centroids.
    for (int c = 0; c < nCells; ++c) {
      const auto& cellFaces = region.cells[c];
      if (cellFaces.empty()) throw MeshError("region '" + region.name + "': empty cell");
      Vec3 xm{};
      for (int f : cellFaces) xm += g.faceCentroid[f];
      xm /= static_cast<double>(cellFaces.size());

      double vol = 0.0;
      Vec3 ctr{};
      for (int f : cellFaces) {
        const double sign = region.outwardSign(f, c);
        const auto& verts = region.faces[f].verts;
        const int n = static_cast<int>(verts.size());
        Vec3 vm{};
        for (int v : verts) vm += mesh.points[v];
        vm /= static_cast<double>(n);
        for (int i = 0; i < n; ++i) {
          const Vec3& p0 = mesh.points[verts[i]];
          const Vec3& p1 = mesh.points[verts[(i + 1) % n]];
          const Vec3 a = sign * 0.5 * cross(p0 - vm, p1 - vm);
          const Vec3 cTri = (vm + p0 + p1) / 3.0;
          const double vTet = dot(a, cTri - xm) / 3.0;
          vol += vTet;
          ctr += vTet * (3.0 * cTri + xm) * 0.25;
        }
      }
      if (!(vol > 0.0)) {
        std::ostringstream os;
        os << "region '" << region.name << "' cell " << c << ": non-positive volume " << vol;
        throw MeshError(os.str());
      }
      g.cellVolume[c] = vol;
      g.cellCentroid[c] = ctr / vol;
    }

    // Closure: outward area vectors of every closed cell sum to zero.
    for (int c = 0; c < nCells; ++c) {
      Vec3 sum{};
      double surf = 0.0;
      for (int f : region.cells[c]) {
        sum += region.outwardSign(f, c) * g.faceArea[f];
        surf += g.faceAreaMag[f];
      }
      if (norm(sum) > 1e-10 * surf) {
        std::ostringstream os;
        os << "region '" << region.name << "' cell " << c << ": face areas do not close, |sum| = "
           << norm(sum) << " vs surface " << surf;
        throw MeshError(os.str());
      }
    }

    for (int f = 0; f < nFaces; ++f) {
      const int own = region.faces[f].owner;
      const Vec3 n = g.faceArea[f] / g.faceAreaMag[f];
      g.ownerDist[f] = dot(n, g.faceCentroid[f] - g.cellCentroid[own]);
      if (!(g.ownerDist[f] > 0.0))
        throw MeshError(face_id(region, f) + ": face centroid not outward of owner cell");

      if (region.isInternal(f)) {
        const int nb = region.faces[f].neighbour;
        const Vec3 r = g.cellCentroid[nb] - g.cellCentroid[own];
        const double d = norm(r);
        if (!(d > 0.0)) throw MeshError(face_id(region, f) + ": coincident cell centroids");
        g.delta[f] = d;
        g.rHat[f] = r / d;
        // Normal-projected distances keep the weight in (0,1) whenever the
        // face plane separates the two centroids, which Euclidean distances
        // do not guarantee on skewed cells.
        const double dOwn = g.ownerDist[f];
        const double dNb = dot(n, g.cellCentroid[nb] - g.faceCentroid[f]);
        const double w = dNb / (dOwn + dNb);
        if (!(dNb > 0.0) || !(w > 0.0 && w < 1.0)) {
          std::ostringstream os;
          os << face_id(region, f) << ": interpolation weight " << w << " outside (0,1)";
          throw MeshError(os.str());
        }
        g.weight[f] = w;
        const double cosA = std::clamp(dot(n, g.rHat[f]), -1.0, 1.0);
        g.nonOrthDeg[f] = std::acos(cosA) * 180.0 / kPi;
      }
    }

    g.lsqInv.assign(nCells, Mat3{});
    g.lsqSingular.assign(nCells, 0);
    for (int c = 0; c < nCells; ++c) {
      Mat3 N;
      for (int f : region.cells[c]) {
        if (!region.faceActive[f]) continue;
        Vec3 d;
        if (region.isInternal(f)) {
          const int other =
              region.faces[f].owner == c ? region.faces[f].neighbour : region.faces[f].owner;
          d = g.cellCentroid[other] - g.cellCentroid[c];
        } else {
          d = g.faceCentroid[f] - g.cellCentroid[c];
        }
        N += (1.0 / norm2(d)) * outer(d, d);
      }
      // Planar meshes have no z extent anywhere in the stencil (beyond
      // centroid roundoff); pin that direction so the inverse stays regular
      // and the z row of any gradient comes out zero.
      if (N(2, 2) <= 1e-12 * trace(N)) N(2, 2) = std::max(trace(N), 1.0);

      const double c00 = N(1, 1) * N(2, 2) - N(1, 2) * N(1, 2);
      const double c01 = N(0, 2) * N(1, 2) - N(0, 1) * N(2, 2);
      const double c02 = N(0, 1) * N(1, 2) - N(0, 2) * N(1, 1);
      const double det = N(0, 0) * c00 + N(0, 1) * c01 + N(0, 2) * c02;
      if (!(std::fabs(det) > 0.0) || !std::isfinite(det)) {
        g.lsqSingular[c] = 1;
        continue;
      }
      Mat3& inv = g.lsqInv[c];
      inv(0, 0) = c00 / det;
      inv(0, 1) = inv(1, 0) = c01 / det;
      inv(0, 2) = inv(2, 0) = c02 / det;
      inv(1, 1) = (N(0, 0) * N(2, 2) - N(0, 2) * N(0, 2)) / det;
      inv(1, 2) = inv(2, 1) = (N(0, 1) * N(0, 2) - N(0, 0) * N(1, 2)) / det;
      inv(2, 2) = (N(0, 0) * N(1, 1) - N(0, 1) * N(0, 1)) / det;
    }
  }

  // Interface pair geometry, seen from the A side.
  for (auto& itf : mesh.interfaces) {
    auto& ra = mesh.regions[itf.regionA];
    auto& rb = mesh.regions[itf.regionB];
    for (auto& pr : itf.pairs) {
      const auto& ga = ra.geo;
      const auto& gb = rb.geo;
      pr.cellA = ra.faces[pr.faceA].owner;
      pr.cellB = rb.faces[pr.faceB].owner;
      pr.area = ga.faceAreaMag[pr.faceA];
      pr.en = ga.faceArea[pr.faceA] / pr.area;
      pr.centroid = ga.faceCentroid[pr.faceA];
      pr.dA = ga.ownerDist[pr.faceA];
      pr.dB = dot(pr.en, gb.cellCentroid[pr.cellB] - pr.centroid);
      if (!(pr.dB > 0.0))
        throw MeshError("interface '" + itf.name + "': B-side cell not across the face");

      const Vec3 mismatch = ga.faceArea[pr.faceA] + gb.faceArea[pr.faceB];
      const double scale = std::max(ga.faceAreaMag[pr.faceA], gb.faceAreaMag[pr.faceB]);
      if (norm(mismatch) > 1e-8 * scale)
        throw MeshError("interface '" + itf.name + "': paired face area vectors not anti-parallel");
    }
  }
}

namespace {

// Key for exact conformal matching: sorted global vertex ids.
struct VertKey {
  std::vector<int> v;
  bool operator<(const VertKey& o) const { return v < o.v; }
};

}  // namespace

void detect_interfaces(MultiRegionMesh& mesh) {
  mesh.interfaces.clear();

  struct Candidate {
    int region;
    int face;
    int patch;
  };
  std::map<VertKey, std::vector<Candidate>> byVerts;

  for (std::size_t r = 0; r < mesh.regions.size(); ++r) {
    auto& region = mesh.regions[r];
    for (std::size_t p = 0; p < region.patches.size(); ++p) {
      const auto& patch = region.patches[p];
      if (patch.planarExcluded) continue;
      for (int f = patch.start; f < patch.start + patch.count; ++f) {
        VertKey key{region.faces[f].verts};
        std::sort(key.v.begin(), key.v.end());
        byVerts[key].push_back({static_cast<int>(r), f, static_cast<int>(p)});
      }
    }
  }

  std::map<std::pair<int, int>, InterfacePatch> found;
  auto add_pair = [&](Candidate a, Candidate b) {
    if (a.region > b.region) std::swap(a, b);
    auto& itf = found[{a.region, b.region}];
    if (itf.pairs.empty()) {
      itf.regionA = a.region;
      itf.regionB = b.region;
      const std::string pa = mesh.regions[a.region].patches[a.patch].name;
      const std::string pb = mesh.regions[b.region].patches[b.patch].name;
      itf.name = (pa == pb && !pa.empty())
                     ? pa
                     : mesh.regions[a.region].name + ":" + mesh.regions[b.region].name;
    }
    itf.pairs.push_back({a.face, b.face, Vec3{}, 0.0, 0.0, 0.0, Vec3{}, -1, -1});
  };

  std::vector<Candidate> unmatched;
  for (auto& [key, cands] : byVerts) {
    if (cands.size() == 1) {
      unmatched.push_back(cands[0]);
      continue;
    }
    if (cands.size() > 2) throw MeshError("more than two boundary faces share the same vertices");
    if (cands[0].region == cands[1].region)
      throw MeshError("region '" + mesh.regions[cands[0].region].name +
                      "': two boundary faces share the same vertices");
    add_pair(cands[0], cands[1]);
  }

  // Geometric pass for conformal faces that do not share point ids: match by
  // face centroid within 1e-9 of the mesh diameter.
  if (!unmatched.empty()) {
    const double tol = 1e-9 * mesh.diameter();
    auto centroid_of = [&](const Candidate& c) {
      Vec3 area, ctr;
      face_metrics(mesh.points, mesh.regions[c.region].faces[c.face].verts, area, ctr);
      return ctr;
    };
    struct Bin {
      long long x, y, z;
      bool operator<(const Bin& o) const {
        return std::tie(x, y, z) < std::tie(o.x, o.y, o.z);
      }
    };
    auto bin_of = [&](const Vec3& p, int dx, int dy, int dz) {
      return Bin{static_cast<long long>(std::floor(p.x / (2.0 * tol))) + dx,
                 static_cast<long long>(std::floor(p.y / (2.0 * tol))) + dy,
                 static_cast<long long>(std::floor(p.z / (2.0 * tol))) + dz};
    };
    std::map<Bin, std::vector<int>> bins;
    std::vector<Vec3> ctrs(unmatched.size());
    for (std::size_t i = 0; i < unmatched.size(); ++i) {
      ctrs[i] = centroid_of(unmatched[i]);
      bins[bin_of(ctrs[i], 0, 0, 0)].push_back(static_cast<int>(i));
    }
    std::vector<char> used(unmatched.size(), 0);
    for (std::size_t i = 0; i < unmatched.size(); ++i) {
      if (used[i]) continue;
      for (int dx = -1; dx <= 1 && !used[i]; ++dx)
        for (int dy = -1; dy <= 1 && !used[i]; ++dy)
          for (int dz = -1; dz <= 1 && !used[i]; ++dz) {
            auto it = bins.find(bin_of(ctrs[i], dx, dy, dz));
            if (it == bins.end()) continue;
            for (int j : it->second) {
              if (j == static_cast<int>(i) || used[j]) continue;
              if (unmatched[j].region == unmatched[i].region) continue;
              if (norm(ctrs[j] - ctrs[i]) > tol) continue;
              add_pair(unmatched[i], unmatched[j]);
              used[i] = used[j] = 1;
              break;
            }
          }
    }
  }

  for (auto& [key, itf] : found) mesh.interfaces.push_back(std::move(itf));

  // Per-face lookup tables.
  for (auto& region : mesh.regions) {
    region.faceInterface.assign(region.nFaces(), -1);
    region.facePair.assign(region.nFaces(), -1);
  }
  for (std::size_t i = 0; i < mesh.interfaces.size(); ++i) {
    auto& itf = mesh.interfaces[i];
    for (std::size_t p = 0; p < itf.pairs.size(); ++p) {
      auto& ra = mesh.regions[itf.regionA];
      auto& rb = mesh.regions[itf.regionB];
      ra.faceInterface[itf.pairs[p].faceA] = static_cast<int>(i);
      ra.facePair[itf.pairs[p].faceA] = static_cast<int>(p);
      rb.faceInterface[itf.pairs[p].faceB] = static_cast<int>(i);
      rb.facePair[itf.pairs[p].faceB] = static_cast<int>(p);
    }
  }
}

void validate_interface_pairing(const MultiRegionMesh& mesh) {
  for (const auto& region : mesh.regions) {
    for (const auto& patch : region.patches) {
      if (patch.planarExcluded) continue;
      int paired = 0;
      int firstUnpaired = -1;
      for (int f = patch.start; f < patch.start + patch.count; ++f) {
        if (region.faceInterface[f] >= 0)
          ++paired;
        else if (firstUnpaired < 0)
          firstUnpaired = f;
      }
      if (paired > 0 && paired != patch.count) {
        std::ostringstream os;
        os << "region '" << region.name << "' patch '" << patch.name
           << "': non-conformal interface, face " << firstUnpaired << " has no partner";
        throw MeshError(os.str());
      }
    }
  }
}

}  // namespace ferrovolt
