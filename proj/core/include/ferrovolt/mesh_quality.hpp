#pragma once

#include <string>
#include <vector>

#include "ferrovolt/mesh.hpp"

namespace ferrovolt {

struct QualityReport {
  struct RegionStats {
    std::string region;
    int nCells = 0;
    int nInternalFaces = 0;
    int nBoundaryFaces = 0;  // excluding planar-excluded
    double maxNonOrthDeg = 0.0;
    double meanNonOrthDeg = 0.0;
    double maxSkewness = 0.0;
    double minVolume = 0.0;
    double maxVolume = 0.0;
    double totalVolume = 0.0;
    int nWarnFaces = 0;   // non-orthogonality above the warn threshold
    int nErrorFaces = 0;  // above the error threshold
  };
  struct InterfaceStats {
    std::string name;
    int nPairs = 0;
    double maxNonOrthDeg = 0.0;
    double maxSkewness = 0.0;
    double totalArea = 0.0;
  };

  std::vector<RegionStats> regions;
  std::vector<InterfaceStats> interfaces;
  double maxNonOrthDeg = 0.0;   // global, internal + interface faces
  double meanNonOrthDeg = 0.0;  // global mean over internal faces
  double maxSkewness = 0.0;
  bool warn = false;
  bool error = false;

  std::string summary() const;
};

// Thresholds in degrees; faces above errorDeg set the error flag (the case
// driver refuses to run on such meshes), faces above warnDeg only warn.
QualityReport check_quality(const MultiRegionMesh& mesh, double warnDeg = 70.0,
                            double errorDeg = 85.0);

}  // namespace ferrovolt
