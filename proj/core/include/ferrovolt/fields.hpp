#pragma once

#include <string>
#include <vector>

#include "ferrovolt/mesh.hpp"
#include "ferrovolt/vec.hpp"

namespace ferrovolt {

// Vacuum permeability [H/m].
constexpr double kMu0 = 4.0e-7 * 3.14159265358979323846;

struct CellVectorField {
  std::string name;
  std::string units;
  std::vector<Vec3> v;

  CellVectorField() = default;
  CellVectorField(std::string n, std::string u, int nCells, Vec3 init = {})
      : name(std::move(n)), units(std::move(u)), v(nCells, init) {}
};

struct CellScalarField {
  std::string name;
  std::string units;
  std::vector<double> v;

  CellScalarField() = default;
  CellScalarField(std::string n, std::string u, int nCells, double init = 0.0)
      : name(std::move(n)), units(std::move(u)), v(nCells, init) {}
};

enum class BcKind {
  FixedValue,          // Dirichlet, evaluated at the face centroid
  ZeroNormalGradient,
  InterfaceCoupled,    // resolved against the paired region
  PlanarExcluded,
};

struct BoundaryCondition {
  BcKind kind = BcKind::ZeroNormalGradient;
  Vec3 value;   // FixedValue offset
  Mat3 linear;  // FixedValue affine part, same layout as a gradient: A(x) = value + dot(x, linear)

  Vec3 evaluate(const Vec3& x) const { return value + dot(x, linear); }
};

struct MaterialSpec {
  double mu_r = 1.0;  // relative permeability, > 0
  Vec3 M;             // permanent magnetization [A/m]
  Vec3 Jf;            // free current density [A/m^2]
};

// chi = (mu_r - 1) / (mu_r * mu0).  Throws ConfigError for mu_r <= 0.
double chi_from_mu_r(double mu_r);

// Field magnetization induced in a linear medium, M_i = chi * B.
Vec3 induced_magnetization(double chi, const Vec3& B);

// Per-region solution state and material fields.
struct RegionFields {
  MaterialSpec material;
  double chi = 0.0;
  CellVectorField A;    // vector potential [T m]
  CellVectorField B;    // flux density [T]
  CellVectorField M;    // permanent magnetization [A/m]
  CellVectorField Jf;   // free current density [A/m^2]
  CellScalarField chiField;
};

// Zero-initialized solution fields with uniform material fields.  Warns when
// a region combines mu_r != 1 with a permanent magnetization, where the
// linear constitutive split stops being valid.
RegionFields make_region_fields(const Region& region, const MaterialSpec& material);

}  // namespace ferrovolt
