#include "ferrovolt/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "ferrovolt/error.hpp"
#include "ferrovolt/fvops.hpp"

namespace ferrovolt {

namespace {

constexpr double kDiscRadius = 0.0375;     // m
constexpr double kMagnetization = 9.75e5;  // A/m, along +y
constexpr double kCurrentDensity = 2.5e7;  // A/m^2, axial
constexpr double kCoreMuR = 30.0;
constexpr double kAppliedB = 0.1;  // T, along +x

// The generator spaces surface nodes by the perimeter ratio of the outer box
// to the disc, so the outer spacing is derived from the requested surface
// edge length.
GenSpec oracle_gen_spec(const std::string& bodyName, double hSurface) {
  GenSpec spec;
  spec.kind = GenSpec::Kind::BodyFitted;
  spec.triangles = true;
  GenBody body;
  body.region = bodyName;
  body.isDisc = true;
  body.radius = kDiscRadius;
  spec.bodies.push_back(body);

  const double boxPerim = 2.0 * ((spec.x1 - spec.x0) + (spec.y1 - spec.y0));
  const double discPerim = 2.0 * 3.14159265358979323846 * kDiscRadius;
  spec.h = hSurface * boxPerim / discPerim;
  return spec;
}

void pin_outer(CaseSetup& setup, const BoundaryCondition& bc) {
  for (size_t r = 0; r < setup.mesh.regions.size(); ++r) {
    const Region& rg = setup.mesh.regions[r];
    for (size_t p = 0; p < rg.patches.size(); ++p) {
      if (rg.patches[p].name == "outer") setup.bcs[r][p] = bc;
    }
  }
}

int disc_region_index(const MultiRegionMesh& mesh) {
  for (size_t r = 0; r < mesh.regions.size(); ++r) {
    if (mesh.regions[r].name != "air") return static_cast<int>(r);
  }
  throw ConfigError("oracle case has no disc region");
}

}  // namespace

std::vector<std::string> oracle_case_names() {
  return {"magnetized_cylinder", "current_wire", "permeable_cylinder"};
}

AnalyticCase oracle_analytic(const std::string& name) {
  if (name == "magnetized_cylinder") {
    return magnetized_cylinder_case(kDiscRadius, Vec3{0.0, kMagnetization, 0.0});
  }
  if (name == "current_wire") return current_wire_case(kDiscRadius, kCurrentDensity);
  if (name == "permeable_cylinder") {
    return permeable_cylinder_case(kDiscRadius, kCoreMuR, Vec3{kAppliedB, 0.0, 0.0});
  }
  throw ConfigError("unknown verification case '" + name +
                    "' (magnetized_cylinder, current_wire, permeable_cylinder)");
}

CaseSetup build_oracle_case(const std::string& name, double hSurface) {
  CaseSetup setup;
  BoundaryCondition outer;
  outer.kind = BcKind::FixedValue;

  if (name == "magnetized_cylinder") {
    setup.mesh = generate_mesh(oracle_gen_spec("magnet", hSurface));
    setup.materials.resize(2);
    setup.materials[disc_region_index(setup.mesh)].M = Vec3{0.0, kMagnetization, 0.0};
  } else if (name == "current_wire") {
    setup.mesh = generate_mesh(oracle_gen_spec("wire", hSurface));
    setup.materials.resize(2);
    setup.materials[disc_region_index(setup.mesh)].Jf = Vec3{0.0, 0.0, kCurrentDensity};
  } else if (name == "permeable_cylinder") {
    setup.mesh = generate_mesh(oracle_gen_spec("core", hSurface));
    setup.materials.resize(2);
    setup.materials[disc_region_index(setup.mesh)].mu_r = kCoreMuR;
    // A = (0, 0, B0 y) reproduces the applied field B0 x.
    outer.linear(1, 2) = kAppliedB;
  } else {
    throw ConfigError("unknown verification case '" + name + "'");
  }

  setup.bcs = default_bcs(setup.mesh);
  pin_outer(setup, outer);
  // The two-region coupling exchanges information one interface cell per
  // sweep, so these cases need thousands of cheap outer iterations; 1e-5 on
  // the initial residual puts the iteration error well below the
  // discretization error the acceptance tolerances budget for.
  setup.control.maxOuterIterations = 40000;
  setup.control.outerTolerance = 1e-5;
  return setup;
}

OracleRun run_oracle_case(const std::string& name, double hSurface) {
  OracleRun run;
  run.name = name;
  run.analytic = oracle_analytic(name);
  run.setup = build_oracle_case(name, hSurface);
  run.state = make_solve_state(run.setup.mesh, run.setup.materials);

  const auto t0 = std::chrono::steady_clock::now();
  run.report = bgs_outer_loop(run.setup.mesh, run.setup.bcs, run.state, run.setup.control);
  run.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

double interior_max_rel_error(const OracleRun& run, double marginWidths) {
  const int r = disc_region_index(run.setup.mesh);
  const Region& rg = run.setup.mesh.regions[r];
  double worst = 0.0;
  int used = 0;
  for (int c = 0; c < rg.nCells(); ++c) {
    const Vec3 x = rg.geo.cellCentroid[c];
    const double width = std::sqrt(rg.geo.cellVolume[c]);
    if (std::hypot(x.x, x.y) > run.analytic.a - marginWidths * width) continue;
    const Vec3 exact = analytic_B(run.analytic, x);
    worst = std::max(worst, norm(run.state.fields[r].B.v[c] - exact) / norm(exact));
    ++used;
  }
  if (used == 0) throw ConfigError("no interior cells clear the margin; mesh too coarse");
  return worst;
}

double btheta_rel_l2(const OracleRun& run, double rLo, double rHi) {
  double num = 0.0, den = 0.0;
  for (size_t r = 0; r < run.setup.mesh.regions.size(); ++r) {
    const Region& rg = run.setup.mesh.regions[r];
    for (int c = 0; c < rg.nCells(); ++c) {
      const Vec3 x = rg.geo.cellCentroid[c];
      const double rad = std::hypot(x.x, x.y);
      if (rad < rLo || rad > rHi) continue;
      const Vec3 tangent{-x.y / rad, x.x / rad, 0.0};
      const double got = dot(run.state.fields[r].B.v[c], tangent);
      const double exact = dot(analytic_B(run.analytic, x), tangent);
      const double V = rg.geo.cellVolume[c];
      num += V * (got - exact) * (got - exact);
      den += V * exact * exact;
    }
  }
  if (den <= 0.0) throw ConfigError("no cells inside the comparison annulus");
  return std::sqrt(num / den);
}

double a_jump_rel(const OracleRun& run) {
  const MultiRegionMesh& mesh = run.setup.mesh;
  std::vector<std::vector<Mat3>> gradA(mesh.regions.size());
  double ref = 0.0;
  for (size_t r = 0; r < mesh.regions.size(); ++r) {
    const Region& rg = mesh.regions[r];
    std::vector<Vec3> face;
    interpolate_internal(rg, run.state.fields[r].A.v, face);
    extend_owner_values(rg, run.state.fields[r].A.v, face);
    skew_correct_internal(rg, run.state.fields[r].A.v, face);
    gradA[r] = gauss_gradient(rg, face);
    for (const Vec3& a : run.state.fields[r].A.v) ref = std::max(ref, norm(a));
  }
  if (ref <= 0.0) return 0.0;

  double worst = 0.0;
  for (const InterfacePatch& ip : mesh.interfaces) {
    const GeometryCache& ga = mesh.regions[ip.regionA].geo;
    const GeometryCache& gb = mesh.regions[ip.regionB].geo;
    for (const InterfaceFacePair& pr : ip.pairs) {
      const Vec3 Aa = run.state.fields[ip.regionA].A.v[pr.cellA] +
                      dot(pr.centroid - ga.cellCentroid[pr.cellA], gradA[ip.regionA][pr.cellA]);
      const Vec3 Ab = run.state.fields[ip.regionB].A.v[pr.cellB] +
                      dot(pr.centroid - gb.cellCentroid[pr.cellB], gradA[ip.regionB][pr.cellB]);
      worst = std::max(worst, norm(Aa - Ab));
    }
  }
  return worst / ref;
}

VerifyResult verify_case(const std::string& name) {
  VerifyResult res;
  res.name = name;
  char buf[160];

  double hSurface = 5.0e-3;
  if (name == "current_wire") hSurface = 2.5e-3;
  oracle_analytic(name);  // validates the name before the expensive run

  const OracleRun run = run_oracle_case(name, hSurface);
  res.solved = run.report.converged;
  std::snprintf(buf, sizeof(buf), "outer iterations: %d, wall: %.2f s, converged: %s",
                run.report.iterations, run.wallSeconds, run.report.converged ? "yes" : "no");
  res.detail.push_back(buf);
  if (!run.report.converged) {
    res.detail.push_back("solver failure: " +
                         (run.report.failure.empty() ? "iteration budget" : run.report.failure));
    return res;
  }

  bool secondary = true;
  if (name == "current_wire") {
    res.metric = btheta_rel_l2(run, 0.2 * run.analytic.a, 5.0 * run.analytic.a);
    res.tolerance = 0.02;
    const double jump = a_jump_rel(run);
    std::snprintf(buf, sizeof(buf), "B_theta rel L2 [0.2a, 5a]: %.4f (tol %.4f)", res.metric,
                  res.tolerance);
    res.detail.push_back(buf);
    std::snprintf(buf, sizeof(buf), "A jump / max|A|: %.2e (tol 1.0e-03)", jump);
    res.detail.push_back(buf);
    secondary = jump <= 1.0e-3;
  } else {
    res.metric = interior_max_rel_error(run);
    res.tolerance = 0.05;
    const Vec3 exact = analytic_B(run.analytic, Vec3{});
    std::snprintf(buf, sizeof(buf), "interior max rel B error: %.4f (tol %.4f, |B| exact %.4f T)",
                  res.metric, res.tolerance, norm(exact));
    res.detail.push_back(buf);
  }
  res.pass = res.solved && secondary && res.metric <= res.tolerance;
  return res;
}

}  // namespace ferrovolt
