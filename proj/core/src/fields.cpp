#include "ferrovolt/fields.hpp"

#include <cstdio>

#include "ferrovolt/error.hpp"
#include "ferrovolt/log.hpp"

namespace ferrovolt {

double chi_from_mu_r(double mu_r) {
  if (!(mu_r > 0.0)) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "relative permeability must be positive, got %g", mu_r);
    throw ConfigError(buf);
  }
  return (mu_r - 1.0) / (mu_r * kMu0);
}

Vec3 induced_magnetization(double chi, const Vec3& B) { return chi * B; }

RegionFields make_region_fields(const Region& region, const MaterialSpec& material) {
  RegionFields f;
  f.material = material;
  f.chi = chi_from_mu_r(material.mu_r);

  const int n = region.nCells();
  f.A = CellVectorField("A", "T m", n);
  f.B = CellVectorField("B", "T", n);
  f.M = CellVectorField("M", "A/m", n, material.M);
  f.Jf = CellVectorField("Jf", "A/m^2", n, material.Jf);
  f.chiField = CellScalarField("chi", "A/(m T)", n, f.chi);

  if (material.mu_r != 1.0 && norm(material.M) > 0.0) {
    log_warning("region '" + region.name +
                "' combines mu_r != 1 with a permanent magnetization; the linear "
                "constitutive split treats these as independent sources");
  }
  return f;
}

}  // namespace ferrovolt
