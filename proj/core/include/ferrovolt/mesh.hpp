#pragma once

// Multi-region, cell-centered polyhedral mesh.
//
// Each material region carries its own face/cell lists over a shared global
// point set.  Faces are stored internal-first, then boundary faces grouped by
// patch.  A face's vertex order defines its area vector: owner -> neighbour
// for internal faces, outward for boundary faces.  Planar cases are stored as
// unit-thickness prisms whose front/back patches are flagged planar-excluded;
// those faces contribute neither matrix coefficients nor fluxes.

#include <string>
#include <vector>

#include "ferrovolt/vec.hpp"

namespace ferrovolt {

struct Face {
  std::vector<int> verts;  // global point ids
  int owner = -1;          // region-local cell id
  int neighbour = -1;      // region-local cell id; -1 for boundary faces
};

struct BoundaryPatch {
  std::string name;
  int start = 0;  // first face id of the patch in the region face list
  int count = 0;
  bool planarExcluded = false;
};

// Geometry derived from points and connectivity; filled by build_geometry.
struct GeometryCache {
  // Per face.
  std::vector<Vec3> faceArea;      // area vector, |.| = area, owner->neighbour / outward
  std::vector<double> faceAreaMag;
  std::vector<Vec3> faceCentroid;
  std::vector<double> ownerDist;   // n . (x_f - x_owner), normal centroid-face distance

  // Per internal face.
  std::vector<double> delta;       // |x_nb - x_own|
  std::vector<Vec3> rHat;          // (x_nb - x_own) / delta
  std::vector<double> weight;      // w in phi_f = w phi_own + (1-w) phi_nb
  std::vector<double> nonOrthDeg;  // arccos(n . rHat) in degrees

  // Per cell.
  std::vector<Vec3> cellCentroid;
  std::vector<double> cellVolume;

  // Inverted normal matrix of the distance-weighted least-squares gradient
  // stencil.  Purely geometric, so it is built once with the rest of the
  // cache; degenerate stencils are only an error if a gradient is requested.
  std::vector<Mat3> lsqInv;
  std::vector<char> lsqSingular;
};

struct Region {
  std::string name;
  std::vector<Face> faces;  // internal first, then boundary grouped by patch
  int nInternalFaces = 0;
  std::vector<std::vector<int>> cells;  // face ids per cell
  std::vector<BoundaryPatch> patches;

  // Derived lookups (finalized together with geometry).
  std::vector<int> facePatch;      // patch index per face, -1 for internal
  std::vector<char> faceActive;    // 0 for planar-excluded faces
  std::vector<int> faceInterface;  // interface index per face, -1 if not coupled
  std::vector<int> facePair;       // pair index within that interface

  GeometryCache geo;

  int nCells() const { return static_cast<int>(cells.size()); }
  int nFaces() const { return static_cast<int>(faces.size()); }
  bool isInternal(int f) const { return faces[f].neighbour >= 0; }

  // +1 if the stored face orientation is outward for this cell, -1 otherwise.
  double outwardSign(int f, int cell) const { return faces[f].owner == cell ? 1.0 : -1.0; }

  const BoundaryPatch* findPatch(const std::string& name) const;
};

struct InterfaceFacePair {
  int faceA = -1;  // region-local face id in regionA
  int faceB = -1;
  Vec3 en;         // unit normal oriented regionA -> regionB
  double area = 0.0;
  double dA = 0.0;  // normal distance, cell centroid (A side) to face
  double dB = 0.0;
  Vec3 centroid;
  int cellA = -1;
  int cellB = -1;
};

struct InterfacePatch {
  std::string name;  // "<regionA>:<regionB>" unless tagged in the input
  int regionA = -1;
  int regionB = -1;
  std::vector<InterfaceFacePair> pairs;
};

struct MultiRegionMesh {
  std::vector<Vec3> points;
  std::vector<Region> regions;
  std::vector<InterfacePatch> interfaces;

  int regionIndex(const std::string& name) const;  // -1 if absent
  double diameter() const;                         // bounding-box diagonal
};

// Fills every GeometryCache and the interface pair geometry, then validates:
// positive volumes, per-cell area closure within 1e-10 of the cell surface
// area, interpolation weights in (0,1), anti-parallel interface area vectors.
// Throws MeshError with the offending entity on violation.
void build_geometry(MultiRegionMesh& mesh);

// Pairs up coincident boundary faces of different regions into interface
// patches.  Conformal faces sharing global point ids match exactly; faces
// with duplicated points match geometrically (centroids within 1e-9 of the
// mesh diameter).  Called by the mesh builders; exposed for loaders that
// read regions directly.
void detect_interfaces(MultiRegionMesh& mesh);

// A patch with at least one interface-paired face must be fully paired;
// anything else indicates a non-conformal interface (hanging nodes).  Throws
// MeshError naming the offending face.
void validate_interface_pairing(const MultiRegionMesh& mesh);

}  // namespace ferrovolt
