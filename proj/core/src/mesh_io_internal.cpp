#include <fstream>
#include <sstream>

#include "ferrovolt/error.hpp"
#include "ferrovolt/mesh_io.hpp"

namespace ferrovolt {

namespace {

// Token stream that drops '#' comments and tracks line numbers for messages.
class TokenReader {
 public:
  TokenReader(std::istream& in, std::string label) : in_(in), label_(std::move(label)) {}

  bool next(std::string& tok) {
    while (true) {
      if (pos_ >= line_.size()) {
        if (!std::getline(in_, line_)) return false;
        ++lineNo_;
        pos_ = 0;
        continue;
      }
      while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
      if (pos_ >= line_.size()) continue;
      if (line_[pos_] == '#') {
        pos_ = line_.size();
        continue;
      }
      std::size_t end = pos_;
      while (end < line_.size() && !std::isspace(static_cast<unsigned char>(line_[end]))) ++end;
      tok = line_.substr(pos_, end - pos_);
      pos_ = end;
      return true;
    }
  }

  std::string expect() {
    std::string tok;
    if (!next(tok)) fail("unexpected end of file");
    return tok;
  }

  long expect_int() {
    const std::string tok = expect();
    try {
      std::size_t used = 0;
      const long v = std::stol(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      fail("expected integer, got '" + tok + "'");
    }
    return 0;
  }

  double expect_double() {
    const std::string tok = expect();
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      fail("expected number, got '" + tok + "'");
    }
    return 0.0;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << label_ << ":" << lineNo_ << ": " << msg;
    throw IoError(os.str());
  }

 private:
  std::istream& in_;
  std::string label_;
  std::string line_;
  std::size_t pos_ = 0;
  int lineNo_ = 0;
};

}  // namespace

MultiRegionMesh read_internal(std::istream& in, const std::string& label) {
  TokenReader tr(in, label);
  MultiRegionMesh mesh;

  std::string tok = tr.expect();
  if (tok != "MESH") tr.fail("expected MESH header, got '" + tok + "'");
  const long version = tr.expect_int();
  if (version != 1) tr.fail("unsupported mesh format version");

  tok = tr.expect();
  if (tok != "POINTS") tr.fail("expected POINTS section, got '" + tok + "'");
  const long np = tr.expect_int();
  if (np < 0) tr.fail("negative point count");
  mesh.points.resize(np);
  for (long i = 0; i < np; ++i) {
    mesh.points[i].x = tr.expect_double();
    mesh.points[i].y = tr.expect_double();
    mesh.points[i].z = tr.expect_double();
  }

  bool more = tr.next(tok);
  while (more) {
    if (tok != "REGION") tr.fail("expected REGION block, got '" + tok + "'");
    Region region;
    region.name = tr.expect();
    if (mesh.regionIndex(region.name) >= 0) tr.fail("duplicate region '" + region.name + "'");

    tok = tr.expect();
    if (tok != "FACES") tr.fail("expected FACES section, got '" + tok + "'");
    const long nf = tr.expect_int();
    region.faces.resize(nf);
    long nCells = -1;
    for (long f = 0; f < nf; ++f) {
      const long nv = tr.expect_int();
      if (nv < 3) tr.fail("face with fewer than 3 vertices");
      Face& face = region.faces[f];
      face.verts.resize(nv);
      for (long v = 0; v < nv; ++v) {
        const long id = tr.expect_int();
        if (id < 0 || id >= np) tr.fail("point id out of range");
        face.verts[v] = static_cast<int>(id);
      }
      face.owner = static_cast<int>(tr.expect_int());
      face.neighbour = static_cast<int>(tr.expect_int());
      if (face.owner < 0) tr.fail("face without owner");
      if (face.neighbour < -1) tr.fail("bad neighbour id");
    }

    tok = tr.expect();
    if (tok != "CELLS") tr.fail("expected CELLS section, got '" + tok + "'");
    nCells = tr.expect_int();
    if (nCells <= 0) tr.fail("region must contain at least one cell");

    tok = tr.expect();
    if (tok != "PATCHES") tr.fail("expected PATCHES section, got '" + tok + "'");
    const long npatch = tr.expect_int();
    for (long p = 0; p < npatch; ++p) {
      BoundaryPatch patch;
      patch.name = tr.expect();
      patch.start = static_cast<int>(tr.expect_int());
      patch.count = static_cast<int>(tr.expect_int());
      region.patches.push_back(std::move(patch));
    }

    // A trailing '*' on the patch name marks it planar-excluded.
    for (auto& patch : region.patches) {
      if (!patch.name.empty() && patch.name.back() == '*') {
        patch.name.pop_back();
        patch.planarExcluded = true;
      }
    }

    // Wire up cells from face ownership.
    region.cells.assign(nCells, {});
    int firstBoundary = -1;
    for (long f = 0; f < nf; ++f) {
      const Face& face = region.faces[f];
      if (face.owner >= nCells || face.neighbour >= nCells) tr.fail("cell id out of range");
      region.cells[face.owner].push_back(static_cast<int>(f));
      if (face.neighbour >= 0) {
        if (firstBoundary >= 0) tr.fail("internal face after boundary faces");
        region.cells[face.neighbour].push_back(static_cast<int>(f));
      } else if (firstBoundary < 0) {
        firstBoundary = static_cast<int>(f);
      }
    }
    region.nInternalFaces = firstBoundary < 0 ? static_cast<int>(nf) : firstBoundary;
    for (long c = 0; c < nCells; ++c)
      if (region.cells[c].empty()) tr.fail("cell without faces in region '" + region.name + "'");

    // Patches must tile the boundary face range exactly.
    region.facePatch.assign(nf, -1);
    region.faceActive.assign(nf, 1);
    for (std::size_t p = 0; p < region.patches.size(); ++p) {
      const auto& patch = region.patches[p];
      if (patch.start < region.nInternalFaces || patch.start + patch.count > nf)
        tr.fail("patch '" + patch.name + "' face range out of bounds");
      for (int f = patch.start; f < patch.start + patch.count; ++f) {
        if (region.facePatch[f] >= 0) tr.fail("patch '" + patch.name + "' overlaps another patch");
        region.facePatch[f] = static_cast<int>(p);
        if (patch.planarExcluded) region.faceActive[f] = 0;
      }
    }
    for (long f = region.nInternalFaces; f < nf; ++f)
      if (region.facePatch[f] < 0) tr.fail("boundary face not covered by any patch");

    mesh.regions.push_back(std::move(region));
    more = tr.next(tok);
  }

  if (mesh.regions.empty()) throw IoError(label + ": mesh contains no regions");

  detect_interfaces(mesh);
  validate_interface_pairing(mesh);
  build_geometry(mesh);
  return mesh;
}

MultiRegionMesh load_internal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file '" + path + "'");
  return read_internal(in, path);
}

void write_internal(const MultiRegionMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write mesh file '" + path + "'");
  out.precision(17);

  out << "MESH 1\n";
  out << "POINTS " << mesh.points.size() << "\n";
  for (const auto& p : mesh.points) out << p.x << " " << p.y << " " << p.z << "\n";

  for (const auto& region : mesh.regions) {
    out << "REGION " << region.name << "\n";
    out << "FACES " << region.nFaces() << "\n";
    for (const auto& face : region.faces) {
      out << face.verts.size();
      for (int v : face.verts) out << " " << v;
      out << " " << face.owner << " " << face.neighbour << "\n";
    }
    out << "CELLS " << region.nCells() << "\n";
    out << "PATCHES " << region.patches.size() << "\n";
    for (const auto& patch : region.patches)
      out << patch.name << (patch.planarExcluded ? "*" : "") << " " << patch.start << " "
          << patch.count << "\n";
  }
  if (!out) throw IoError("failed writing mesh file '" + path + "'");
}

MultiRegionMesh load_mesh(const std::string& path) {
  const auto dotPos = path.find_last_of('.');
  const std::string ext = dotPos == std::string::npos ? "" : path.substr(dotPos);
  if (ext == ".msh") return load_gmsh(path);
  return load_internal(path);
}

}  // namespace ferrovolt
