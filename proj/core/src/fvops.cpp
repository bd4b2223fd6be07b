#include "ferrovolt/fvops.hpp"

#include <cmath>
#include <stdexcept>

#include "ferrovolt/error.hpp"
#include "ferrovolt/parallel.hpp"

namespace ferrovolt {

void interpolate_internal(const Region& rg, const std::vector<Vec3>& cell,
                          std::vector<Vec3>& face) {
  face.resize(rg.nFaces());
  const auto& g = rg.geo;
  parallel_for(rg.nInternalFaces, [&](int begin, int end) {
    for (int f = begin; f < end; ++f) {
      const double w = g.weight[f];
      face[f] = w * cell[rg.faces[f].owner] + (1.0 - w) * cell[rg.faces[f].neighbour];
    }
  });
}

void interpolate_internal(const Region& rg, const std::vector<double>& cell,
                          std::vector<double>& face) {
  face.resize(rg.nFaces());
  const auto& g = rg.geo;
  for (int f = 0; f < rg.nInternalFaces; ++f) {
    const double w = g.weight[f];
    face[f] = w * cell[rg.faces[f].owner] + (1.0 - w) * cell[rg.faces[f].neighbour];
  }
}

void apply_boundary_values(const Region& rg, const std::vector<BoundaryCondition>& patchBcs,
                           const std::vector<Vec3>& cell, std::vector<Vec3>& face) {
  face.resize(rg.nFaces());
  for (size_t p = 0; p < rg.patches.size(); ++p) {
    const BoundaryPatch& patch = rg.patches[p];
    const BoundaryCondition& bc = patchBcs[p];
    for (int f = patch.start; f < patch.start + patch.count; ++f) {
      switch (bc.kind) {
        case BcKind::FixedValue:
          face[f] = bc.evaluate(rg.geo.faceCentroid[f]);
          break;
        case BcKind::ZeroNormalGradient:
          face[f] = cell[rg.faces[f].owner];
          break;
        case BcKind::InterfaceCoupled:
        case BcKind::PlanarExcluded:
          break;
      }
    }
  }
}

void extend_owner_values(const Region& rg, const std::vector<Vec3>& cell,
                         std::vector<Vec3>& face) {
  face.resize(rg.nFaces());
  for (int f = rg.nInternalFaces; f < rg.nFaces(); ++f) {
    if (rg.faceActive[f]) face[f] = cell[rg.faces[f].owner];
  }
}

std::vector<Mat3> gauss_gradient(const Region& rg, const std::vector<Vec3>& face) {
  std::vector<Mat3> grad(rg.nCells());
  const auto& g = rg.geo;
  parallel_for(rg.nCells(), [&](int begin, int end) {
    for (int c = begin; c < end; ++c) {
      Mat3 sum;
      for (int f : rg.cells[c]) {
        if (!rg.faceActive[f]) continue;
        sum += outer(rg.outwardSign(f, c) * g.faceArea[f], face[f]);
      }
      grad[c] = (1.0 / g.cellVolume[c]) * sum;
    }
  });
  return grad;
}

std::vector<Vec3> gauss_gradient(const Region& rg, const std::vector<double>& face) {
  std::vector<Vec3> grad(rg.nCells());
  const auto& g = rg.geo;
  for (int c = 0; c < rg.nCells(); ++c) {
    Vec3 sum;
    for (int f : rg.cells[c]) {
      if (!rg.faceActive[f]) continue;
      sum += (rg.outwardSign(f, c) * face[f]) * g.faceArea[f];
    }
    grad[c] = (1.0 / g.cellVolume[c]) * sum;
  }
  return grad;
}

namespace {

// The weighted normal matrices of the stencils are geometry-only and cached
// inverted in GeometryCache; a flagged cell means the stencil was degenerate.
const Mat3& lsq_inverse(const Region& rg, int c) {
  if (rg.geo.lsqSingular[c]) {
    throw MeshError("least-squares gradient stencil is degenerate for cell " + std::to_string(c));
  }
  return rg.geo.lsqInv[c];
}

}  // namespace

std::vector<Mat3> least_squares_gradient(const Region& rg, const std::vector<Vec3>& cell,
                                         const std::vector<Vec3>& face) {
  std::vector<Mat3> grad(rg.nCells());
  const auto& g = rg.geo;
  parallel_for(rg.nCells(), [&](int begin, int end) {
    for (int c = begin; c < end; ++c) {
      Mat3 R;  // R(i,j) = sum w d_i (dphi)_j
      for (int f : rg.cells[c]) {
        if (!rg.faceActive[f]) continue;
        Vec3 d;
        Vec3 dphi;
        if (rg.isInternal(f)) {
          const int other = rg.faces[f].owner == c ? rg.faces[f].neighbour : rg.faces[f].owner;
          d = g.cellCentroid[other] - g.cellCentroid[c];
          dphi = cell[other] - cell[c];
        } else {
          d = g.faceCentroid[f] - g.cellCentroid[c];
          dphi = face[f] - cell[c];
        }
        R += (1.0 / norm2(d)) * outer(d, dphi);
      }
      const Mat3& inv = lsq_inverse(rg, c);
      Mat3 G;
      for (int j = 0; j < 3; ++j) {
        const Vec3 col = inv * Vec3{R(0, j), R(1, j), R(2, j)};
        G(0, j) = col.x;
        G(1, j) = col.y;
        G(2, j) = col.z;
      }
      grad[c] = G;
    }
  });
  return grad;
}

std::vector<Vec3> least_squares_gradient(const Region& rg, const std::vector<double>& cell,
                                         const std::vector<double>& face) {
  std::vector<Vec3> grad(rg.nCells());
  const auto& g = rg.geo;
  for (int c = 0; c < rg.nCells(); ++c) {
    Vec3 R;
    for (int f : rg.cells[c]) {
      if (!rg.faceActive[f]) continue;
      Vec3 d;
      double dphi;
      if (rg.isInternal(f)) {
        const int other = rg.faces[f].owner == c ? rg.faces[f].neighbour : rg.faces[f].owner;
        d = g.cellCentroid[other] - g.cellCentroid[c];
        dphi = cell[other] - cell[c];
      } else {
        d = g.faceCentroid[f] - g.cellCentroid[c];
        dphi = face[f] - cell[c];
      }
      R += (dphi / norm2(d)) * d;
    }
    grad[c] = lsq_inverse(rg, c) * R;
  }
  return grad;
}

void skew_correct_internal(const Region& rg, const std::vector<Vec3>& cell,
                           std::vector<Vec3>& face) {
  const std::vector<Mat3> grad = least_squares_gradient(rg, cell, face);
  const auto& g = rg.geo;
  parallel_for(rg.nInternalFaces, [&](int begin, int end) {
    for (int f = begin; f < end; ++f) {
      const double w = g.weight[f];
      const int own = rg.faces[f].owner;
      const int nbr = rg.faces[f].neighbour;
      const Vec3 off =
          g.faceCentroid[f] - (w * g.cellCentroid[own] + (1.0 - w) * g.cellCentroid[nbr]);
      face[f] += dot(off, w * grad[own] + (1.0 - w) * grad[nbr]);
    }
  });
}

void skew_correct_internal(const Region& rg, const std::vector<double>& cell,
                           std::vector<double>& face) {
  const std::vector<Vec3> grad = least_squares_gradient(rg, cell, face);
  const auto& g = rg.geo;
  for (int f = 0; f < rg.nInternalFaces; ++f) {
    const double w = g.weight[f];
    const int own = rg.faces[f].owner;
    const int nbr = rg.faces[f].neighbour;
    const Vec3 off =
        g.faceCentroid[f] - (w * g.cellCentroid[own] + (1.0 - w) * g.cellCentroid[nbr]);
    face[f] += dot(off, w * grad[own] + (1.0 - w) * grad[nbr]);
  }
}

GradientScheme parse_gradient_scheme(const std::string& name) {
  if (name == "gauss") return GradientScheme::Gauss;
  if (name == "leastSquares") return GradientScheme::LeastSquares;
  throw ConfigError("unknown gradient scheme '" + name + "' (gauss, leastSquares)");
}

std::vector<Vec3> normal_gradient(const Region& rg, const std::vector<Vec3>& cell) {
  std::vector<Vec3> out(rg.nFaces());
  for (int f = 0; f < rg.nInternalFaces; ++f) {
    out[f] = (cell[rg.faces[f].neighbour] - cell[rg.faces[f].owner]) / rg.geo.delta[f];
  }
  return out;
}

std::vector<Mat3> face_gradients(const Region& rg, const std::vector<Mat3>& cellGrad) {
  std::vector<Mat3> out(rg.nFaces());
  const auto& g = rg.geo;
  for (int f = 0; f < rg.nFaces(); ++f) {
    if (!rg.faceActive[f]) continue;
    if (rg.isInternal(f)) {
      const double w = g.weight[f];
      out[f] = w * cellGrad[rg.faces[f].owner] + (1.0 - w) * cellGrad[rg.faces[f].neighbour];
    } else {
      out[f] = cellGrad[rg.faces[f].owner];
    }
  }
  return out;
}

std::vector<Vec3> non_orthogonal_correction(const Region& rg,
                                            const std::vector<Mat3>& cellGrad) {
  std::vector<Vec3> corr(rg.nInternalFaces);
  const auto& g = rg.geo;
  for (int f = 0; f < rg.nInternalFaces; ++f) {
    const double w = g.weight[f];
    const Mat3 gf = w * cellGrad[rg.faces[f].owner] + (1.0 - w) * cellGrad[rg.faces[f].neighbour];
    const Vec3 nHat = (1.0 / g.faceAreaMag[f]) * g.faceArea[f];
    corr[f] = dot(nHat - g.rHat[f], gf);
  }
  return corr;
}

SparseMatrix assemble_negated_laplacian(const Region& rg,
                                        const std::vector<BoundaryCondition>& patchBcs) {
  std::vector<std::vector<int>> nb(rg.nCells());
  for (int f = 0; f < rg.nInternalFaces; ++f) {
    nb[rg.faces[f].owner].push_back(rg.faces[f].neighbour);
    nb[rg.faces[f].neighbour].push_back(rg.faces[f].owner);
  }
  SparseMatrix S = SparseMatrix::from_stencil(rg.nCells(), nb);

  const auto& g = rg.geo;
  for (int f = 0; f < rg.nInternalFaces; ++f) {
    const double a = g.faceAreaMag[f] / g.delta[f];
    const int own = rg.faces[f].owner;
    const int nbr = rg.faces[f].neighbour;
    S.at(own, own) += a;
    S.at(nbr, nbr) += a;
    S.at(own, nbr) -= a;
    S.at(nbr, own) -= a;
  }
  for (size_t p = 0; p < rg.patches.size(); ++p) {
    if (patchBcs[p].kind != BcKind::FixedValue) continue;
    const BoundaryPatch& patch = rg.patches[p];
    for (int f = patch.start; f < patch.start + patch.count; ++f) {
      const int own = rg.faces[f].owner;
      S.at(own, own) += g.faceAreaMag[f] / g.ownerDist[f];
    }
  }
  return S;
}

void add_non_orthogonal_sources(const Region& rg, const std::vector<Vec3>& corr,
                                std::vector<Vec3>& rhs) {
  const auto& g = rg.geo;
  for (int f = 0; f < rg.nInternalFaces; ++f) {
    const Vec3 src = g.faceAreaMag[f] * corr[f];
    rhs[rg.faces[f].owner] += src;
    rhs[rg.faces[f].neighbour] -= src;
  }
}

void add_dirichlet_value_sources(const Region& rg,
                                 const std::vector<BoundaryCondition>& patchBcs,
                                 std::vector<Vec3>& rhs) {
  const auto& g = rg.geo;
  for (size_t p = 0; p < rg.patches.size(); ++p) {
    if (patchBcs[p].kind != BcKind::FixedValue) continue;
    const BoundaryPatch& patch = rg.patches[p];
    for (int f = patch.start; f < patch.start + patch.count; ++f) {
      const int own = rg.faces[f].owner;
      const Vec3 Ab = patchBcs[p].evaluate(g.faceCentroid[f]);
      rhs[own] += (g.faceAreaMag[f] / g.ownerDist[f]) * Ab;
    }
  }
}

void add_dirichlet_skew_sources(const Region& rg, const std::vector<BoundaryCondition>& patchBcs,
                                const std::vector<Mat3>& cellGrad, std::vector<Vec3>& rhs) {
  const auto& g = rg.geo;
  for (size_t p = 0; p < rg.patches.size(); ++p) {
    if (patchBcs[p].kind != BcKind::FixedValue) continue;
    const BoundaryPatch& patch = rg.patches[p];
    for (int f = patch.start; f < patch.start + patch.count; ++f) {
      const int own = rg.faces[f].owner;
      const double area = g.faceAreaMag[f];
      const Vec3 nHat = (1.0 / area) * g.faceArea[f];
      const Vec3 rb = (1.0 / g.ownerDist[f]) * (g.faceCentroid[f] - g.cellCentroid[own]);
      rhs[own] += area * dot(nHat - rb, cellGrad[own]);
    }
  }
}

std::vector<Vec3> div_skew_flux(const Region& rg, const std::vector<double>& chiFace,
                                const std::vector<Mat3>& faceGrad) {
  std::vector<Vec3> out(rg.nCells());
  const auto& g = rg.geo;
  parallel_for(rg.nCells(), [&](int begin, int end) {
    for (int c = begin; c < end; ++c) {
      Vec3 sum;
      for (int f : rg.cells[c]) {
        if (!rg.faceActive[f]) continue;
        const Vec3 s = rg.outwardSign(f, c) * g.faceArea[f];
        sum += chiFace[f] * dot(s, skew_twice(faceGrad[f]));
      }
      out[c] = sum;
    }
  });
  return out;
}

std::vector<Vec3> curl_from_faces(const Region& rg, const std::vector<Vec3>& face) {
  std::vector<Vec3> out(rg.nCells());
  const auto& g = rg.geo;
  for (int c = 0; c < rg.nCells(); ++c) {
    Vec3 sum;
    for (int f : rg.cells[c]) {
      if (!rg.faceActive[f]) continue;
      sum += cross(rg.outwardSign(f, c) * g.faceArea[f], face[f]);
    }
    out[c] = (1.0 / g.cellVolume[c]) * sum;
  }
  return out;
}

std::vector<double> susceptibility_face_values(const Region& rg,
                                               const std::vector<double>& chiCell) {
  std::vector<double> face(rg.nFaces(), 0.0);
  interpolate_internal(rg, chiCell, face);
  for (int f = rg.nInternalFaces; f < rg.nFaces(); ++f) {
    if (rg.faceActive[f]) face[f] = chiCell[rg.faces[f].owner];
  }
  skew_correct_internal(rg, chiCell, face);
  const std::vector<Vec3> grad = gauss_gradient(rg, face);
  for (int f = rg.nInternalFaces; f < rg.nFaces(); ++f) {
    if (!rg.faceActive[f]) continue;
    const int own = rg.faces[f].owner;
    face[f] = chiCell[own] + dot(rg.geo.faceCentroid[f] - rg.geo.cellCentroid[own], grad[own]);
  }
  return face;
}

}  // namespace ferrovolt
