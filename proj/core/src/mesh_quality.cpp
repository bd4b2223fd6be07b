#include "ferrovolt/mesh_quality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ferrovolt {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Distance of the face centroid from the owner-neighbour line, measured at
// the face plane crossing and normalized by the centroid distance.
double face_skewness(const Vec3& xC, const Vec3& xE, const Vec3& xf, const Vec3& n) {
  const Vec3 r = xE - xC;
  const double denom = dot(n, r);
  if (std::abs(denom) < 1e-300) return 1e9;
  const double t = dot(n, xf - xC) / denom;
  const Vec3 p = xC + t * r;
  return norm(xf - p) / norm(r);
}

double angle_deg(const Vec3& n, const Vec3& r) {
  const double c = std::clamp(dot(normalized(n), normalized(r)), -1.0, 1.0);
  return std::acos(c) * 180.0 / kPi;
}

}  // namespace

QualityReport check_quality(const MultiRegionMesh& mesh, double warnDeg, double errorDeg) {
  QualityReport rep;
  double nonOrthSum = 0.0;
  long nonOrthCount = 0;

  for (const auto& region : mesh.regions) {
    const auto& g = region.geo;
    QualityReport::RegionStats st;
    st.region = region.name;
    st.nCells = region.nCells();
    st.nInternalFaces = region.nInternalFaces;
    st.minVolume = 1e300;

    for (int f = 0; f < region.nInternalFaces; ++f) {
      const double a = g.nonOrthDeg[f];
      st.maxNonOrthDeg = std::max(st.maxNonOrthDeg, a);
      st.meanNonOrthDeg += a;
      if (a > warnDeg) ++st.nWarnFaces;
      if (a > errorDeg) ++st.nErrorFaces;
      const Vec3 n = g.faceArea[f] / g.faceAreaMag[f];
      st.maxSkewness =
          std::max(st.maxSkewness, face_skewness(g.cellCentroid[region.faces[f].owner],
                                                 g.cellCentroid[region.faces[f].neighbour],
                                                 g.faceCentroid[f], n));
      nonOrthSum += a;
      ++nonOrthCount;
    }
    if (st.nInternalFaces > 0) st.meanNonOrthDeg /= st.nInternalFaces;

    for (int f = region.nInternalFaces; f < region.nFaces(); ++f)
      if (region.faceActive[f]) ++st.nBoundaryFaces;

    for (int c = 0; c < region.nCells(); ++c) {
      const double v = g.cellVolume[c];
      st.minVolume = std::min(st.minVolume, v);
      st.maxVolume = std::max(st.maxVolume, v);
      st.totalVolume += v;
    }

    rep.maxNonOrthDeg = std::max(rep.maxNonOrthDeg, st.maxNonOrthDeg);
    rep.maxSkewness = std::max(rep.maxSkewness, st.maxSkewness);
    rep.regions.push_back(std::move(st));
  }

  for (const auto& itf : mesh.interfaces) {
    const auto& ga = mesh.regions[itf.regionA].geo;
    const auto& gb = mesh.regions[itf.regionB].geo;
    QualityReport::InterfaceStats st;
    st.name = itf.name;
    st.nPairs = static_cast<int>(itf.pairs.size());
    for (const auto& pr : itf.pairs) {
      const Vec3 xA = ga.cellCentroid[pr.cellA];
      const Vec3 xB = gb.cellCentroid[pr.cellB];
      const double a = angle_deg(pr.en, xB - xA);
      st.maxNonOrthDeg = std::max(st.maxNonOrthDeg, a);
      st.maxSkewness = std::max(st.maxSkewness, face_skewness(xA, xB, pr.centroid, pr.en));
      st.totalArea += pr.area;
    }
    rep.maxNonOrthDeg = std::max(rep.maxNonOrthDeg, st.maxNonOrthDeg);
    rep.maxSkewness = std::max(rep.maxSkewness, st.maxSkewness);
    rep.interfaces.push_back(std::move(st));
  }

  rep.meanNonOrthDeg = nonOrthCount > 0 ? nonOrthSum / nonOrthCount : 0.0;
  for (const auto& st : rep.regions) {
    if (st.nWarnFaces > 0) rep.warn = true;
    if (st.nErrorFaces > 0) rep.error = true;
  }
  if (rep.maxNonOrthDeg > errorDeg) rep.error = true;
  else if (rep.maxNonOrthDeg > warnDeg) rep.warn = true;

  return rep;
}

std::string QualityReport::summary() const {
  std::ostringstream os;
  os.precision(4);
  for (const auto& st : regions) {
    os << "region " << st.region << ": " << st.nCells << " cells, " << st.nInternalFaces
       << " internal faces, " << st.nBoundaryFaces << " boundary faces\n"
       << "  non-orthogonality max " << st.maxNonOrthDeg << " deg, mean " << st.meanNonOrthDeg
       << " deg; skewness max " << st.maxSkewness << "\n"
       << "  volume min " << st.minVolume << ", max " << st.maxVolume << ", total "
       << st.totalVolume << "\n";
    if (st.nErrorFaces > 0)
      os << "  ERROR: " << st.nErrorFaces << " faces above the non-orthogonality error limit\n";
    else if (st.nWarnFaces > 0)
      os << "  warning: " << st.nWarnFaces << " severely non-orthogonal faces\n";
  }
  for (const auto& st : interfaces)
    os << "interface " << st.name << ": " << st.nPairs << " face pairs, area " << st.totalArea
       << ", non-orthogonality max " << st.maxNonOrthDeg << " deg, skewness max "
       << st.maxSkewness << "\n";
  os << "overall: non-orthogonality max " << maxNonOrthDeg << " deg, mean " << meanNonOrthDeg
     << " deg, skewness max " << maxSkewness << (error ? " [ERROR]" : (warn ? " [warning]" : ""))
     << "\n";
  return os.str();
}

}  // namespace ferrovolt
