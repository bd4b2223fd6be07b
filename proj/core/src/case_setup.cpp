#include "ferrovolt/case_setup.hpp"

#include <algorithm>
#include <set>

#include "ferrovolt/error.hpp"
#include "ferrovolt/mesh_io.hpp"

namespace ferrovolt {

namespace {

std::string join_path(const std::string& base, const std::string& rel) {
  if (rel.empty() || rel.front() == '/') return rel;
  if (base.empty()) return rel;
  return base.back() == '/' ? base + rel : base + "/" + rel;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(start, comma - start);
    const size_t a = item.find_first_not_of(" \t");
    const size_t b = item.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
    start = comma + 1;
  }
  return out;
}

GenSpec::Kind parse_gen_kind(const std::string& name) {
  if (name == "body_fitted") return GenSpec::Kind::BodyFitted;
  if (name == "cartesian") return GenSpec::Kind::Cartesian;
  throw ConfigError("unknown mesh kind '" + name + "' (body_fitted, cartesian)");
}

GenSpec::Split parse_gen_split(const std::string& name) {
  if (name == "auto") return GenSpec::Split::Auto;
  if (name == "x") return GenSpec::Split::X;
  if (name == "y") return GenSpec::Split::Y;
  throw ConfigError("unknown mesh split '" + name + "' (auto, x, y)");
}

bool parse_cells_triangles(const std::string& name) {
  if (name == "quad") return false;
  if (name == "tri") return true;
  throw ConfigError("unknown cell shape '" + name + "' (quad, tri)");
}

bool patch_is_interface(const Region& rg, const BoundaryPatch& p) {
  for (int f = p.start; f < p.start + p.count; ++f) {
    if (rg.faceInterface[f] < 0) return false;
  }
  return p.count > 0;
}

}  // namespace

GenSpec gen_spec_from_config(ConfigDict& cfg) {
  GenSpec spec;
  spec.kind = parse_gen_kind(cfg.get_string("mesh.kind", "body_fitted"));
  spec.x0 = cfg.get_double("mesh.x0", spec.x0);
  spec.y0 = cfg.get_double("mesh.y0", spec.y0);
  spec.x1 = cfg.get_double("mesh.x1", spec.x1);
  spec.y1 = cfg.get_double("mesh.y1", spec.y1);
  spec.h = cfg.get_double("mesh.h", spec.h);
  spec.background = cfg.get_string("mesh.background", spec.background);
  spec.outerPatch = cfg.get_string("mesh.outer_patch", spec.outerPatch);
  spec.triangles = parse_cells_triangles(cfg.get_string("mesh.cells", "quad"));
  spec.split = parse_gen_split(cfg.get_string("mesh.split", "auto"));
  spec.jitter = cfg.get_double("mesh.jitter", spec.jitter);
  const int seed = cfg.get_int("mesh.seed", 1);
  if (seed < 0) throw ConfigError("mesh.seed must be >= 0");
  spec.seed = static_cast<unsigned>(seed);
  spec.thickness = cfg.get_double("mesh.thickness", spec.thickness);

  for (const std::string& name : cfg.sections_with_prefix("mesh.body.")) {
    const std::string sec = "mesh.body." + name;
    GenBody body;
    body.region = name;
    const std::string shape = cfg.get_string(sec + ".shape", "disc");
    body.center = cfg.get_vec3(sec + ".center", Vec3{});
    if (shape == "disc") {
      body.isDisc = true;
      body.radius = cfg.require_double(sec + ".radius");
    } else if (shape == "rect") {
      body.isDisc = false;
      body.hw = 0.5 * cfg.require_double(sec + ".width");
      body.hh = 0.5 * cfg.require_double(sec + ".height");
    } else {
      throw ConfigError("unknown body shape '" + shape + "' (disc, rect)");
    }
    spec.bodies.push_back(body);
  }
  return spec;
}

std::vector<std::vector<BoundaryCondition>> default_bcs(const MultiRegionMesh& mesh) {
  std::vector<std::vector<BoundaryCondition>> bcs(mesh.regions.size());
  for (size_t r = 0; r < mesh.regions.size(); ++r) {
    const Region& rg = mesh.regions[r];
    bcs[r].resize(rg.patches.size());
    for (size_t p = 0; p < rg.patches.size(); ++p) {
      if (rg.patches[p].planarExcluded) {
        bcs[r][p].kind = BcKind::PlanarExcluded;
      } else if (patch_is_interface(rg, rg.patches[p])) {
        bcs[r][p].kind = BcKind::InterfaceCoupled;
      } else {
        bcs[r][p].kind = BcKind::ZeroNormalGradient;
      }
    }
  }
  return bcs;
}

CaseSetup case_from_config(ConfigDict& cfg, const std::string& baseDir) {
  CaseSetup setup;

  const std::string source = cfg.get_string("mesh.source", "generate");
  if (source == "generate") {
    setup.mesh = generate_mesh(gen_spec_from_config(cfg));
  } else if (source == "file") {
    setup.mesh = load_mesh(join_path(baseDir, cfg.require_string("mesh.file")));
  } else {
    throw ConfigError("mesh.source must be 'generate' or 'file', got '" + source + "'");
  }
  const MultiRegionMesh& mesh = setup.mesh;

  // Materials.  Regions without a [region.*] section stay vacuum.
  setup.materials.resize(mesh.regions.size());
  for (const std::string& name : cfg.sections_with_prefix("region.")) {
    const int r = mesh.regionIndex(name);
    if (r < 0) throw ConfigError("config section [region." + name + "] matches no mesh region");
    const std::string sec = "region." + name;
    MaterialSpec& mat = setup.materials[r];
    mat.mu_r = cfg.get_double(sec + ".mu_r", 1.0);
    mat.M = cfg.get_vec3(sec + ".M", Vec3{});
    mat.Jf = cfg.get_vec3(sec + ".J", Vec3{});
    chi_from_mu_r(mat.mu_r);  // validates
  }

  // Boundary conditions.  Each [boundary.PATCH] section applies to the patch
  // of that name in every region that has one.
  setup.bcs = default_bcs(mesh);
  std::set<std::string> pinned;
  for (const std::string& name : cfg.sections_with_prefix("boundary.")) {
    const std::string sec = "boundary." + name;
    BoundaryCondition bc;
    const std::string type = cfg.require_string(sec + ".type");
    if (type == "fixedValue") {
      bc.kind = BcKind::FixedValue;
      bc.value = cfg.get_vec3(sec + ".value", Vec3{});
      const char* rows[] = {".linear_x", ".linear_y", ".linear_z"};
      for (int i = 0; i < 3; ++i) {
        const Vec3 row = cfg.get_vec3(sec + rows[i], Vec3{});
        bc.linear(i, 0) = row.x;
        bc.linear(i, 1) = row.y;
        bc.linear(i, 2) = row.z;
      }
    } else if (type == "zeroGradient") {
      bc.kind = BcKind::ZeroNormalGradient;
    } else {
      throw ConfigError("unknown boundary type '" + type + "' (fixedValue, zeroGradient)");
    }

    bool found = false;
    for (size_t r = 0; r < mesh.regions.size(); ++r) {
      const Region& rg = mesh.regions[r];
      for (size_t p = 0; p < rg.patches.size(); ++p) {
        if (rg.patches[p].name != name) continue;
        if (setup.bcs[r][p].kind == BcKind::PlanarExcluded ||
            setup.bcs[r][p].kind == BcKind::InterfaceCoupled) {
          throw ConfigError("patch '" + name + "' of region '" + rg.name +
                            "' is assigned automatically and cannot take a boundary condition");
        }
        setup.bcs[r][p] = bc;
        found = true;
      }
    }
    if (!found) throw ConfigError("config section [boundary." + name + "] matches no mesh patch");
    pinned.insert(name);
  }
  for (size_t r = 0; r < mesh.regions.size(); ++r) {
    const Region& rg = mesh.regions[r];
    for (size_t p = 0; p < rg.patches.size(); ++p) {
      if (setup.bcs[r][p].kind == BcKind::PlanarExcluded ||
          setup.bcs[r][p].kind == BcKind::InterfaceCoupled) {
        continue;
      }
      if (!pinned.count(rg.patches[p].name)) {
        throw ConfigError("no [boundary." + rg.patches[p].name + "] section for patch '" +
                          rg.patches[p].name + "' of region '" + rg.name + "'");
      }
    }
  }

  // Solver controls.
  OuterIterationControl& c = setup.control;
  c.maxOuterIterations = cfg.get_int("solver.max_outer_iterations", c.maxOuterIterations);
  c.outerTolerance = cfg.get_double("solver.tolerance", c.outerTolerance);
  c.lambdaDiv = cfg.get_double("solver.lambda_div", c.lambdaDiv);
  c.lambdaK = cfg.get_double("solver.lambda_K", c.lambdaK);
  c.relaxMode = parse_relax_mode(cfg.get_string("solver.relaxation", "implicit"));
  c.application =
      parse_coupling_application(cfg.get_string("solver.application", "simultaneous"));
  c.nNonOrthCorrectors = cfg.get_int("solver.non_orth_correctors", c.nNonOrthCorrectors);
  c.divergenceGuard = cfg.get_double("solver.divergence_guard", c.divergenceGuard);
  c.gradient = parse_gradient_scheme(cfg.get_string("solver.gradient", "gauss"));
  c.inner.kind = parse_solver_kind(cfg.get_string("solver.inner", "cg"));
  c.inner.precond = parse_precond_kind(cfg.get_string("solver.inner_preconditioner", "diagonal"));
  c.inner.tolerance = cfg.get_double("solver.inner_tolerance", c.inner.tolerance);
  c.inner.maxIterations = cfg.get_int("solver.inner_max_iterations", c.inner.maxIterations);
  if (cfg.has("solver.region_order")) {
    const std::vector<std::string> names =
        split_csv(cfg.require_string("solver.region_order"));
    std::set<int> seen;
    for (const std::string& n : names) {
      const int r = mesh.regionIndex(n);
      if (r < 0) throw ConfigError("solver.region_order names unknown region '" + n + "'");
      if (!seen.insert(r).second) {
        throw ConfigError("solver.region_order repeats region '" + n + "'");
      }
      c.regionOrder.push_back(r);
    }
    if (c.regionOrder.size() != mesh.regions.size()) {
      throw ConfigError("solver.region_order must list every region exactly once");
    }
  }

  // Samples.
  for (const std::string& name : cfg.sections_with_prefix("sample.")) {
    const std::string sec = "sample." + name;
    SampleSpec s;
    s.name = name;
    s.p0 = cfg.require_vec3(sec + ".p0");
    s.p1 = cfg.require_vec3(sec + ".p1");
    s.n = cfg.get_int(sec + ".n", s.n);
    if (s.n < 2) throw ConfigError("sample." + name + ".n must be >= 2");
    s.field = cfg.get_string(sec + ".field", s.field);
    if (s.field != "A" && s.field != "B") {
      throw ConfigError("sample." + name + ".field must be 'A' or 'B'");
    }
    setup.samples.push_back(std::move(s));
  }

  setup.output.directory = cfg.get_string("output.directory", setup.output.directory);
  setup.output.vtk = cfg.get_bool("output.vtk", setup.output.vtk);
  setup.output.iterationLog = cfg.get_bool("output.iteration_log", setup.output.iterationLog);

  cfg.reject_unconsumed();
  return setup;
}

CaseSetup load_case(const std::string& caseDir, const std::vector<std::string>& overrides) {
  ConfigDict cfg = ConfigDict::load(join_path(caseDir, "config.ini"));
  for (const std::string& ov : overrides) cfg.apply_override(ov);
  return case_from_config(cfg, caseDir);
}

}  // namespace ferrovolt
