#include "ferrovolt/postproc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "ferrovolt/error.hpp"
#include "ferrovolt/fields.hpp"
#include "ferrovolt/fvops.hpp"

namespace ferrovolt {

namespace {

bool cell_contains(const Region& rg, int c, const Vec3& x, double tol) {
  for (int f : rg.cells[c]) {
    const Vec3 n = rg.outwardSign(f, c) * rg.geo.faceArea[f];
    if (dot(x - rg.geo.faceCentroid[f], n) > tol * rg.geo.faceAreaMag[f]) return false;
  }
  return true;
}

}  // namespace

bool locate_cell(const MultiRegionMesh& mesh, const Vec3& x, int& region, int& cell) {
  const double tol = 1e-9 * mesh.diameter();
  for (size_t r = 0; r < mesh.regions.size(); ++r) {
    const Region& rg = mesh.regions[r];
    for (int c = 0; c < rg.nCells(); ++c) {
      if (cell_contains(rg, c, x, tol)) {
        region = static_cast<int>(r);
        cell = c;
        return true;
      }
    }
  }
  return false;
}

SampleTable sample_line(const MultiRegionMesh& mesh, const SolveState& state,
                        const SampleSpec& spec) {
  SampleTable table;
  table.field = spec.field;
  const Vec3 d = spec.p1 - spec.p0;
  const double len = norm(d);
  for (int i = 0; i < spec.n; ++i) {
    const double t = static_cast<double>(i) / (spec.n - 1);
    SampleRow row;
    row.s = t * len;
    row.x = spec.p0 + t * d;
    int r = -1, c = -1;
    if (locate_cell(mesh, row.x, r, c)) {
      row.present = true;
      row.value = spec.field == "A" ? state.fields[r].A.v[c] : state.fields[r].B.v[c];
    }
    table.rows.push_back(row);
  }
  return table;
}

JumpReport interface_jump_report(const MultiRegionMesh& mesh, const SolveState& state) {
  JumpReport rep;

  std::vector<std::vector<Mat3>> gradB(mesh.regions.size());
  for (size_t r = 0; r < mesh.regions.size(); ++r) {
    const Region& rg = mesh.regions[r];
    std::vector<Vec3> face;
    interpolate_internal(rg, state.fields[r].B.v, face);
    extend_owner_values(rg, state.fields[r].B.v, face);
    skew_correct_internal(rg, state.fields[r].B.v, face);
    gradB[r] = gauss_gradient(rg, face);
  }

  double areaSum = 0.0, sqDBn = 0.0, sqTang = 0.0, sqRes = 0.0;
  for (size_t i = 0; i < mesh.interfaces.size(); ++i) {
    const InterfacePatch& ip = mesh.interfaces[i];
    const GeometryCache& ga = mesh.regions[ip.regionA].geo;
    const GeometryCache& gb = mesh.regions[ip.regionB].geo;
    for (size_t p = 0; p < ip.pairs.size(); ++p) {
      const InterfaceFacePair& pr = ip.pairs[p];
      const Vec3 Ba = state.fields[ip.regionA].B.v[pr.cellA] +
                      dot(pr.centroid - ga.cellCentroid[pr.cellA], gradB[ip.regionA][pr.cellA]);
      const Vec3 Bb = state.fields[ip.regionB].B.v[pr.cellB] +
                      dot(pr.centroid - gb.cellCentroid[pr.cellB], gradB[ip.regionB][pr.cellB]);
      const Vec3 dB = Bb - Ba;

      JumpRow row;
      row.centroid = pr.centroid;
      row.area = pr.area;
      row.dBn = dot(dB, pr.en);
      row.dBt = dB - row.dBn * pr.en;
      row.residual = norm(dB - kMu0 * cross(state.interfaces[i].K[p], pr.en));
      rep.rows.push_back(row);

      rep.maxAbsDBn = std::max(rep.maxAbsDBn, std::fabs(row.dBn));
      rep.maxTangJump = std::max(rep.maxTangJump, norm(row.dBt));
      rep.maxResidual = std::max(rep.maxResidual, row.residual);
      rep.maxMu0K = std::max(rep.maxMu0K, kMu0 * norm(state.interfaces[i].K[p]));
      areaSum += row.area;
      sqDBn += row.area * row.dBn * row.dBn;
      sqTang += row.area * norm2(row.dBt);
      sqRes += row.area * row.residual * row.residual;
    }
  }
  if (areaSum > 0.0) {
    rep.l2DBn = std::sqrt(sqDBn / areaSum);
    rep.l2TangJump = std::sqrt(sqTang / areaSum);
    rep.l2Residual = std::sqrt(sqRes / areaSum);
  }
  return rep;
}

namespace {

constexpr int kVtkHexahedron = 12;
constexpr int kVtkWedge = 13;

struct VtkCell {
  int type = 0;
  std::vector<int> ids;  // global point ids
};

// Reconstructs the extruded cell's vertex ordering from its face set.  VTK
// conventions differ between the two shapes: the wedge base triangle is
// ordered with its normal pointing away from the cell, the hexahedron base
// quad with its normal toward the opposite face.
VtkCell vtk_cell(const Region& rg, int c) {
  int baseFace = -1;
  int nTri = 0, nQuad = 0;
  std::set<int> verts;
  for (int f : rg.cells[c]) {
    const size_t nv = rg.faces[f].verts.size();
    if (nv == 3) {
      ++nTri;
      if (baseFace < 0) baseFace = f;
    } else if (nv == 4) {
      ++nQuad;
    } else {
      throw MeshError("cell " + std::to_string(c) + " of region '" + rg.name +
                      "' has a face that is neither triangle nor quad");
    }
    for (int v : rg.faces[f].verts) verts.insert(v);
  }

  VtkCell out;
  bool wedge;
  if (nTri == 2 && nQuad == 3 && verts.size() == 6) {
    wedge = true;
  } else if (nTri == 0 && nQuad == 6 && verts.size() == 8) {
    wedge = false;
    baseFace = rg.cells[c].front();
  } else {
    throw MeshError("cell " + std::to_string(c) + " of region '" + rg.name +
                    "' is not an extruded prism or hexahedron");
  }

  std::vector<int> base = rg.faces[baseFace].verts;
  const bool stored_outward = rg.faces[baseFace].owner == c;
  if (wedge != stored_outward) std::reverse(base.begin(), base.end());

  const std::set<int> baseSet(base.begin(), base.end());
  std::vector<int> top;
  for (int v : base) {
    int partner = -1;
    for (int f : rg.cells[c]) {
      if (f == baseFace) continue;
      const std::vector<int>& fv = rg.faces[f].verts;
      for (size_t k = 0; k < fv.size(); ++k) {
        const int a = fv[k];
        const int b = fv[(k + 1) % fv.size()];
        int u = -1;
        if (a == v && !baseSet.count(b)) u = b;
        if (b == v && !baseSet.count(a)) u = a;
        if (u < 0) continue;
        if (partner >= 0 && partner != u) {
          throw MeshError("cell " + std::to_string(c) + " of region '" + rg.name +
                          "' has an ambiguous extrusion edge");
        }
        partner = u;
      }
    }
    if (partner < 0) {
      throw MeshError("cell " + std::to_string(c) + " of region '" + rg.name +
                      "' has no extrusion partner for a base vertex");
    }
    top.push_back(partner);
  }

  out.type = wedge ? kVtkWedge : kVtkHexahedron;
  out.ids = base;
  out.ids.insert(out.ids.end(), top.begin(), top.end());
  return out;
}

void write_vtk_file(const MultiRegionMesh& mesh, const SolveState& state,
                    const std::vector<int>& regionIdx, const std::string& path,
                    bool withRegionArray) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write VTK file '" + path + "'");

  char buf[256];
  out << "# vtk DataFile Version 3.0\n";
  out << "ferrovolt solution\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";

  out << "POINTS " << mesh.points.size() << " double\n";
  for (const Vec3& p : mesh.points) {
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", p.x, p.y, p.z);
    out << buf;
  }

  std::vector<VtkCell> cells;
  std::vector<int> cellRegion;
  for (int r : regionIdx) {
    const Region& rg = mesh.regions[r];
    for (int c = 0; c < rg.nCells(); ++c) {
      cells.push_back(vtk_cell(rg, c));
      cellRegion.push_back(r);
    }
  }

  size_t listLen = 0;
  for (const VtkCell& c : cells) listLen += 1 + c.ids.size();
  out << "CELLS " << cells.size() << " " << listLen << "\n";
  for (const VtkCell& c : cells) {
    out << c.ids.size();
    for (int v : c.ids) out << " " << v;
    out << "\n";
  }
  out << "CELL_TYPES " << cells.size() << "\n";
  for (const VtkCell& c : cells) out << c.type << "\n";

  out << "CELL_DATA " << cells.size() << "\n";
  const auto vectors = [&](const char* name, auto pick) {
    out << "VECTORS " << name << " double\n";
    for (int r : regionIdx) {
      const RegionFields& fl = state.fields[r];
      for (int c = 0; c < mesh.regions[r].nCells(); ++c) {
        const Vec3 v = pick(fl, c);
        std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", v.x, v.y, v.z);
        out << buf;
      }
    }
  };
  vectors("A", [](const RegionFields& fl, int c) { return fl.A.v[c]; });
  vectors("B", [](const RegionFields& fl, int c) { return fl.B.v[c]; });
  vectors("M", [](const RegionFields& fl, int c) { return fl.M.v[c]; });
  vectors("J", [](const RegionFields& fl, int c) { return fl.Jf.v[c]; });

  out << "SCALARS chi double 1\nLOOKUP_TABLE default\n";
  for (int r : regionIdx) {
    for (int c = 0; c < mesh.regions[r].nCells(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.9g\n", state.fields[r].chiField.v[c]);
      out << buf;
    }
  }
  if (withRegionArray) {
    out << "SCALARS region int 1\nLOOKUP_TABLE default\n";
    for (int r : cellRegion) out << r << "\n";
  }
  if (!out) throw IoError("write error on VTK file '" + path + "'");
}

}  // namespace

void write_vtk(const MultiRegionMesh& mesh, const SolveState& state, const std::string& stem) {
  for (size_t r = 0; r < mesh.regions.size(); ++r) {
    write_vtk_file(mesh, state, {static_cast<int>(r)},
                   stem + "_" + mesh.regions[r].name + ".vtk", false);
  }
  std::vector<int> all(mesh.regions.size());
  for (size_t r = 0; r < all.size(); ++r) all[r] = static_cast<int>(r);
  write_vtk_file(mesh, state, all, stem + ".vtk", true);
}

void write_csv_samples(const SampleTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write CSV file '" + path + "'");
  const std::string& f = table.field;
  out << "s,x,y,z," << f << "_x," << f << "_y," << f << "_z\n";
  char buf[256];
  for (const SampleRow& row : table.rows) {
    if (row.present) {
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", row.s,
                    row.x.x, row.x.y, row.x.z, row.value.x, row.value.y, row.value.z);
    } else {
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,,,\n", row.s, row.x.x, row.x.y,
                    row.x.z);
    }
    out << buf;
  }
  if (!out) throw IoError("write error on CSV file '" + path + "'");
}

}  // namespace ferrovolt
