#include "ferrovolt/analytic.hpp"

#include <cmath>

#include "ferrovolt/error.hpp"
#include "ferrovolt/fields.hpp"

namespace ferrovolt {

namespace {

void check_radius(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("analytic case needs radius a > 0");
}

}  // namespace

AnalyticCase magnetized_cylinder_case(double a, const Vec3& M) {
  check_radius(a);
  AnalyticCase c;
  c.kind = AnalyticKind::MagnetizedCylinder;
  c.a = a;
  c.M = Vec3{M.x, M.y, 0.0};
  return c;
}

AnalyticCase current_wire_case(double a, double J) {
  check_radius(a);
  AnalyticCase c;
  c.kind = AnalyticKind::CurrentWire;
  c.a = a;
  c.J = J;
  return c;
}

AnalyticCase permeable_cylinder_case(double a, double mu_r, const Vec3& B0) {
  check_radius(a);
  if (!(mu_r > 0.0)) throw ConfigError("analytic case needs mu_r > 0");
  AnalyticCase c;
  c.kind = AnalyticKind::PermeableCylinder;
  c.a = a;
  c.mu_r = mu_r;
  c.B0 = Vec3{B0.x, B0.y, 0.0};
  return c;
}

Vec3 analytic_A(const AnalyticCase& c, const Vec3& x) {
  const double r2 = x.x * x.x + x.y * x.y;
  const double a2 = c.a * c.a;
  switch (c.kind) {
    case AnalyticKind::MagnetizedCylinder: {
      // A_z = mu0/2 (M x r)_z, scaled by a^2/r^2 outside.
      const double mxr = c.M.x * x.y - c.M.y * x.x;
      const double s = r2 <= a2 ? 1.0 : a2 / r2;
      return Vec3{0.0, 0.0, 0.5 * kMu0 * mxr * s};
    }
    case AnalyticKind::CurrentWire: {
      if (r2 <= a2) return Vec3{0.0, 0.0, 0.25 * kMu0 * c.J * (a2 - r2)};
      return Vec3{0.0, 0.0, -0.25 * kMu0 * c.J * a2 * std::log(r2 / a2)};
    }
    case AnalyticKind::PermeableCylinder: {
      const double beta = (c.mu_r - 1.0) / (c.mu_r + 1.0);
      // A_z = B0.x y - B0.y x for the applied field alone.
      const double applied = c.B0.x * x.y - c.B0.y * x.x;
      if (r2 <= a2) return Vec3{0.0, 0.0, (2.0 * c.mu_r / (c.mu_r + 1.0)) * applied};
      return Vec3{0.0, 0.0, applied * (1.0 + beta * a2 / r2)};
    }
  }
  throw ConfigError("unknown analytic case kind");
}

Vec3 analytic_B(const AnalyticCase& c, const Vec3& x) {
  const double r2 = x.x * x.x + x.y * x.y;
  const double a2 = c.a * c.a;
  switch (c.kind) {
    case AnalyticKind::MagnetizedCylinder: {
      if (r2 <= a2) return (0.5 * kMu0) * c.M;
      // 2D dipole: mu0 a^2/(2 r^2) [2 (M.rhat) rhat - M].
      const Vec3 rhat{x.x / std::sqrt(r2), x.y / std::sqrt(r2), 0.0};
      const double mr = dot(c.M, rhat);
      return (0.5 * kMu0 * a2 / r2) * (2.0 * mr * rhat - c.M);
    }
    case AnalyticKind::CurrentWire: {
      const double s = r2 <= a2 ? 0.5 * kMu0 * c.J : 0.5 * kMu0 * c.J * a2 / r2;
      return Vec3{-s * x.y, s * x.x, 0.0};
    }
    case AnalyticKind::PermeableCylinder: {
      if (r2 <= a2) return (2.0 * c.mu_r / (c.mu_r + 1.0)) * c.B0;
      const double beta = (c.mu_r - 1.0) / (c.mu_r + 1.0);
      const Vec3 rhat{x.x / std::sqrt(r2), x.y / std::sqrt(r2), 0.0};
      const double br = dot(c.B0, rhat);
      return c.B0 + (beta * a2 / r2) * (2.0 * br * rhat - c.B0);
    }
  }
  throw ConfigError("unknown analytic case kind");
}

}  // namespace ferrovolt
