// Closed-form 2D magnetostatic reference solutions, used to validate the
// solver end to end.  All cases are translation-invariant along z and
// centered on the origin:
//
//   magnetized cylinder   uniform in-plane M inside r < a, air outside.
//                         Interior B = mu0 M / 2; exterior is the 2D dipole
//                         of moment per length m = pi a^2 M.
//   current wire          uniform axial J inside r < a.  B_theta = mu0 J r/2
//                         inside, mu0 J a^2 / (2 r) outside.
//   permeable cylinder    linear material mu_r in an applied uniform field
//                         B0.  Interior B = 2 mu_r/(mu_r+1) B0.
//
// The formulas assume an unbounded exterior; finite-domain truncation error
// is the caller's budget.  A carries the gauge A_z(r=a) = 0 for the wire and
// decays to the applied-field potential elsewhere; comparisons of A across a
// finite box should use differences, not absolute values.
#pragma once

#include <string>

#include "ferrovolt/vec.hpp"

namespace ferrovolt {

enum class AnalyticKind { MagnetizedCylinder, CurrentWire, PermeableCylinder };

struct AnalyticCase {
  AnalyticKind kind = AnalyticKind::MagnetizedCylinder;
  double a = 1.0;     // cylinder radius [m]
  Vec3 M{};           // uniform magnetization [A/m], in-plane components only
  double J = 0.0;     // axial free current density [A/m^2]
  double mu_r = 1.0;  // relative permeability of the cylinder
  Vec3 B0{};          // applied uniform field [T], in-plane
};

AnalyticCase magnetized_cylinder_case(double a, const Vec3& M);
AnalyticCase current_wire_case(double a, double J);
AnalyticCase permeable_cylinder_case(double a, double mu_r, const Vec3& B0);

// Vector potential (0, 0, A_z) at an in-plane position; z is ignored.
Vec3 analytic_A(const AnalyticCase& c, const Vec3& x);

// Flux density at an in-plane position; z is ignored.  Points exactly at the
// origin are fine for all cases; the interface circle r = a itself is
// ambiguous for the field and resolved toward the interior.
Vec3 analytic_B(const AnalyticCase& c, const Vec3& x);

}  // namespace ferrovolt
