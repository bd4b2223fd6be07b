#include "ferrovolt/magnetostatics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "ferrovolt/error.hpp"
#include "ferrovolt/log.hpp"

namespace ferrovolt {

RelaxMode parse_relax_mode(const std::string& name) {
  if (name == "implicit") return RelaxMode::Implicit;
  if (name == "explicit") return RelaxMode::Explicit;
  throw ConfigError("unknown relaxation mode '" + name + "' (implicit, explicit)");
}

CouplingApplication parse_coupling_application(const std::string& name) {
  if (name == "simultaneous") return CouplingApplication::Simultaneous;
  if (name == "region_wise") return CouplingApplication::RegionWise;
  throw ConfigError("unknown coupling application '" + name + "' (simultaneous, region_wise)");
}

SolveState make_solve_state(const MultiRegionMesh& mesh,
                            const std::vector<MaterialSpec>& materials) {
  SolveState st;
  for (size_t r = 0; r < mesh.regions.size(); ++r) {
    st.fields.push_back(make_region_fields(mesh.regions[r], materials[r]));
  }
  for (const InterfacePatch& ip : mesh.interfaces) {
    InterfaceState s;
    s.K.assign(ip.pairs.size(), Vec3{});
    s.Kprev.assign(ip.pairs.size(), Vec3{});
    st.interfaces.push_back(std::move(s));
  }
  st.interfaceKf.assign(mesh.interfaces.size(), Vec3{});
  return st;
}

std::string RegionSystem::dominant_source() const {
  const std::pair<double, const char*> entries[] = {
      {srcFreeCurrent, "freeCurrent"}, {srcBoundSkew, "boundSkew"},
      {srcMagnetCurl, "magnetCurl"},   {srcNonOrth, "nonOrth"},
      {srcInterface, "interface"},     {srcBoundary, "boundary"}};
  const auto* best = &entries[0];
  for (const auto& e : entries) {
    if (e.first > best->first) best = &e;
  }
  return best->second;
}

PairView pair_view(const MultiRegionMesh& mesh, int regionIdx, int interfaceIdx, int pairIdx) {
  const InterfacePatch& ip = mesh.interfaces[interfaceIdx];
  const InterfaceFacePair& pr = ip.pairs[pairIdx];
  PairView v;
  v.area = pr.area;
  if (ip.regionA == regionIdx) {
    v.otherRegion = ip.regionB;
    v.otherCell = pr.cellB;
    v.dSelf = pr.dA;
    v.dOther = pr.dB;
  } else {
    v.otherRegion = ip.regionA;
    v.otherCell = pr.cellA;
    v.dSelf = pr.dB;
    v.dOther = pr.dA;
  }
  return v;
}

Vec3 interface_face_value(const Vec3& aSelf, const Vec3& aOther, double dSelf, double dOther,
                          const Vec3& K) {
  const double D = dSelf + dOther;
  return (1.0 / D) * (dOther * aSelf + dSelf * aOther + (kMu0 * dSelf * dOther) * K);
}

namespace {

std::vector<Mat3> cell_gradients(const Region& rg, GradientScheme scheme,
                                 const std::vector<Vec3>& cell, const std::vector<Vec3>& face) {
  if (scheme == GradientScheme::LeastSquares) return least_squares_gradient(rg, cell, face);
  std::vector<Vec3> corrected = face;
  skew_correct_internal(rg, cell, corrected);
  return gauss_gradient(rg, corrected);
}

// Pair-frame one-sided flux corrections (e_n from side A to side B):
//   c_A = (e_n - (x_f - x_A)/d_A) . G_A,  c_B = (e_n - (x_B - x_f)/d_B) . G_B.
// c_B - c_A shifts the matched face value onto the face centroid; the
// d-weighted mean (d_A c_A + d_B c_B)/D is the deferred flux correction,
// added on side A and subtracted on side B so the pair stays conservative
// and the gradient jump -mu0 K is preserved exactly.  Both vanish on
// orthogonal pairs.  Gradients are the latest available per region; empty
// entries (before the first evaluation) count as zero.
struct PairSkew {
  Vec3 cA, cB;
};

PairSkew pair_skew(const MultiRegionMesh& mesh, const InterfacePatch& ip,
                   const InterfaceFacePair& pr, const std::vector<std::vector<Mat3>>& lagG) {
  PairSkew s;
  if (!lagG[ip.regionA].empty()) {
    const Vec3 u =
        (1.0 / pr.dA) * (pr.centroid - mesh.regions[ip.regionA].geo.cellCentroid[pr.cellA]);
    s.cA = dot(pr.en - u, lagG[ip.regionA][pr.cellA]);
  }
  if (!lagG[ip.regionB].empty()) {
    const Vec3 u =
        (1.0 / pr.dB) * (mesh.regions[ip.regionB].geo.cellCentroid[pr.cellB] - pr.centroid);
    s.cB = dot(pr.en - u, lagG[ip.regionB][pr.cellB]);
  }
  return s;
}

// Face values of A for one region: interpolation inside, boundary conditions
// on patches, flux-matching closed form on interface faces with the other
// side lagged and the skew shift moving the matched value onto the face
// centroid.
std::vector<Vec3> a_face_values(const MultiRegionMesh& mesh, int r,
                                const std::vector<BoundaryCondition>& rgBcs,
                                const std::vector<Vec3>& aSelf,
                                const std::vector<std::vector<Vec3>>& lagA,
                                const SolveState& state,
                                const std::vector<std::vector<Mat3>>& lagG) {
  const Region& rg = mesh.regions[r];
  std::vector<Vec3> face;
  interpolate_internal(rg, aSelf, face);
  apply_boundary_values(rg, rgBcs, aSelf, face);
  for (int f = rg.nInternalFaces; f < rg.nFaces(); ++f) {
    const int i = rg.faceInterface[f];
    if (i < 0) continue;
    const int p = rg.facePair[f];
    const PairView pv = pair_view(mesh, r, i, p);
    const InterfaceFacePair& pr = mesh.interfaces[i].pairs[p];
    const PairSkew sk = pair_skew(mesh, mesh.interfaces[i], pr, lagG);
    const double D = pv.dSelf + pv.dOther;
    face[f] = interface_face_value(aSelf[rg.faces[f].owner], lagA[pv.otherRegion][pv.otherCell],
                                   pv.dSelf, pv.dOther, state.interfaces[i].K[p]) +
              (pv.dSelf * pv.dOther / D) * (sk.cB - sk.cA);
  }
  return face;
}

double vec_l1(const std::vector<Vec3>& v) {
  double s = 0.0;
  for (const Vec3& x : v) s += std::fabs(x.x) + std::fabs(x.y) + std::fabs(x.z);
  return s;
}

std::vector<double> component(const std::vector<Vec3>& v, int c) {
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i][c];
  return out;
}

void set_component(std::vector<Vec3>& v, int c, const std::vector<double>& x) {
  for (size_t i = 0; i < v.size(); ++i) v[i][c] = x[i];
}

// Largest deviation from face orthogonality the deferred corrections have to
// absorb: internal-face non-orthogonality plus the skew angle of boundary
// faces against their owner centroid.
double region_max_skew_angle(const Region& rg) {
  double deg = 0.0;
  for (int f = 0; f < rg.nInternalFaces; ++f) deg = std::max(deg, rg.geo.nonOrthDeg[f]);
  for (int f = rg.nInternalFaces; f < rg.nFaces(); ++f) {
    if (!rg.faceActive[f]) continue;
    const Vec3 d = rg.geo.faceCentroid[f] - rg.geo.cellCentroid[rg.faces[f].owner];
    const double cosang =
        dot(normalized(d), (1.0 / rg.geo.faceAreaMag[f]) * rg.geo.faceArea[f]);
    deg = std::max(deg, std::acos(std::min(1.0, std::max(-1.0, cosang))) * 180.0 /
                            3.14159265358979323846);
  }
  return deg;
}

}  // namespace

void compute_surface_currents(const MultiRegionMesh& mesh, SolveState& state, double lambdaK,
                              int onlyRegion) {
  std::vector<std::vector<Mat3>> gradB(mesh.regions.size());
  auto ensure_grad = [&](int r) {
    if (!gradB[r].empty()) return;
    const Region& rg = mesh.regions[r];
    std::vector<Vec3> face;
    interpolate_internal(rg, state.fields[r].B.v, face);
    extend_owner_values(rg, state.fields[r].B.v, face);
    skew_correct_internal(rg, state.fields[r].B.v, face);
    gradB[r] = gauss_gradient(rg, face);
  };

  for (size_t i = 0; i < mesh.interfaces.size(); ++i) {
    const InterfacePatch& ip = mesh.interfaces[i];
    if (onlyRegion >= 0 && ip.regionA != onlyRegion && ip.regionB != onlyRegion) continue;
    ensure_grad(ip.regionA);
    ensure_grad(ip.regionB);
    InterfaceState& st = state.interfaces[i];
    const RegionFields& fa = state.fields[ip.regionA];
    const RegionFields& fb = state.fields[ip.regionB];
    const GeometryCache& ga = mesh.regions[ip.regionA].geo;
    const GeometryCache& gb = mesh.regions[ip.regionB].geo;

    for (size_t p = 0; p < ip.pairs.size(); ++p) {
      const InterfaceFacePair& pr = ip.pairs[p];
      const Vec3 Ba = fa.B.v[pr.cellA] +
                      dot(pr.centroid - ga.cellCentroid[pr.cellA], gradB[ip.regionA][pr.cellA]);
      const Vec3 Bb = fb.B.v[pr.cellB] +
                      dot(pr.centroid - gb.cellCentroid[pr.cellB], gradB[ip.regionB][pr.cellB]);
      const Vec3 jump = fa.chiField.v[pr.cellA] * Ba + fa.M.v[pr.cellA] -
                        fb.chiField.v[pr.cellB] * Bb - fb.M.v[pr.cellB];
      const Vec3 raw = cross(jump, pr.en) - state.interfaceKf[i];
      st.Kprev[p] = st.K[p];
      st.K[p] = st.initialized ? st.Kprev[p] + lambdaK * (raw - st.Kprev[p]) : raw;
    }
    st.initialized = true;
  }
}

void compute_B(const MultiRegionMesh& mesh,
               const std::vector<std::vector<BoundaryCondition>>& bcs, SolveState& state,
               GradientScheme scheme, std::vector<std::vector<Mat3>>* lagGExt) {
  std::vector<std::vector<Vec3>> lagA(mesh.regions.size());
  for (size_t r = 0; r < mesh.regions.size(); ++r) lagA[r] = state.fields[r].A.v;

  // The interface skew shift needs cell gradients; without caller-provided
  // ones, bootstrap them with an unshifted pass first.
  std::vector<std::vector<Mat3>> own;
  std::vector<std::vector<Mat3>>* lagG = lagGExt;
  if (!lagG) {
    own.resize(mesh.regions.size());
    lagG = &own;
    for (size_t r = 0; r < mesh.regions.size(); ++r) {
      const Region& rg = mesh.regions[r];
      const std::vector<Vec3> face =
          a_face_values(mesh, static_cast<int>(r), bcs[r], lagA[r], lagA, state, *lagG);
      (*lagG)[r] = cell_gradients(rg, scheme, lagA[r], face);
    }
  }

  for (size_t r = 0; r < mesh.regions.size(); ++r) {
    const Region& rg = mesh.regions[r];
    const std::vector<Vec3> face =
        a_face_values(mesh, static_cast<int>(r), bcs[r], lagA[r], lagA, state, *lagG);
    const std::vector<Mat3> G = cell_gradients(rg, scheme, lagA[r], face);
    (*lagG)[r] = G;
    for (int c = 0; c < rg.nCells(); ++c) state.fields[r].B.v[c] = dual(G[c]);
  }
}

OuterIterationReport bgs_outer_loop(const MultiRegionMesh& mesh,
                                    const std::vector<std::vector<BoundaryCondition>>& bcs,
                                    SolveState& state, const OuterIterationControl& control) {
  if (!(control.lambdaDiv > 0.0) || control.lambdaDiv > 1.0) {
    throw ConfigError("lambda_div must lie in (0, 1]");
  }
  if (!(control.lambdaK > 0.0) || control.lambdaK > 1.0) {
    throw ConfigError("lambda_K must lie in (0, 1]");
  }
  if (control.maxOuterIterations < 1) throw ConfigError("max_outer_iterations must be >= 1");

  const int nRegions = static_cast<int>(mesh.regions.size());
  OuterIterationReport report;

  std::vector<int> order = control.regionOrder;
  if (order.empty()) {
    for (int r = 0; r < nRegions; ++r) order.push_back(r);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return state.fields[a].chi > state.fields[b].chi;
    });
  }

  // Material-derived quantities are fixed for the whole solve.
  std::vector<std::vector<double>> chiFace(nRegions);
  std::vector<char> chiZero(nRegions, 1);
  std::vector<std::vector<Vec3>> staticSrc(nRegions);
  std::vector<double> srcFreeNorm(nRegions, 0.0), srcCurlNorm(nRegions, 0.0);
  std::vector<int> nCorr(nRegions, 0);
  std::vector<std::vector<Vec3>> divSkewMem(nRegions);
  for (int r = 0; r < nRegions; ++r) {
    const Region& rg = mesh.regions[r];
    chiFace[r] = susceptibility_face_values(rg, state.fields[r].chiField.v);
    for (double v : chiFace[r]) {
      if (v != 0.0) {
        chiZero[r] = 0;
        break;
      }
    }

    std::vector<Vec3> mFace;
    interpolate_internal(rg, state.fields[r].M.v, mFace);
    extend_owner_values(rg, state.fields[r].M.v, mFace);
    skew_correct_internal(rg, state.fields[r].M.v, mFace);
    const std::vector<Vec3> curlM = curl_from_faces(rg, mFace);

    staticSrc[r].resize(rg.nCells());
    std::vector<Vec3> freePart(rg.nCells()), curlPart(rg.nCells());
    for (int c = 0; c < rg.nCells(); ++c) {
      const double V = rg.geo.cellVolume[c];
      freePart[c] = (kMu0 * V) * state.fields[r].Jf.v[c];
      curlPart[c] = (kMu0 * V) * curlM[c];
      staticSrc[r][c] = freePart[c] + curlPart[c];
    }
    srcFreeNorm[r] = vec_l1(freePart);
    srcCurlNorm[r] = vec_l1(curlPart);

    nCorr[r] = control.nNonOrthCorrectors >= 0
                   ? control.nNonOrthCorrectors
                   : (region_max_skew_angle(rg) > 5.0 ? 2 : 0);
    divSkewMem[r].assign(rg.nCells(), Vec3{});
  }

  // The matrix side never changes across outer iterations: Laplacian stencil,
  // interface transmission diagonal, Dirichlet closure, and the implicit
  // relaxation diagonal all depend on mesh and settings only.  Freeze them
  // here; the sweep rebuilds right-hand sides.
  struct FrozenSystem {
    SparseMatrix S;       // unrelaxed, drives the convergence residual
    SparseMatrix Srelax;  // with the implicit relaxation diagonal added
    std::vector<double> diagExtra;
    std::vector<Vec3> dirichletSrc;
    double dirichletNorm = 0.0;
  };
  std::vector<FrozenSystem> frozen(nRegions);
  for (int r = 0; r < nRegions; ++r) {
    const Region& rg = mesh.regions[r];
    FrozenSystem& fz = frozen[r];
    fz.S = assemble_negated_laplacian(rg, bcs[r]);
    for (int f = rg.nInternalFaces; f < rg.nFaces(); ++f) {
      const int i = rg.faceInterface[f];
      if (i < 0) continue;
      const PairView pv = pair_view(mesh, r, i, rg.facePair[f]);
      const int own = rg.faces[f].owner;
      fz.S.at(own, own) += rg.geo.faceAreaMag[f] / (pv.dSelf + pv.dOther);
    }
    fz.dirichletSrc.assign(rg.nCells(), Vec3{});
    add_dirichlet_value_sources(rg, bcs[r], fz.dirichletSrc);
    fz.dirichletNorm = vec_l1(fz.dirichletSrc);

    fz.diagExtra.assign(rg.nCells(), 0.0);
    fz.Srelax = fz.S;
    if (control.relaxMode == RelaxMode::Implicit && control.lambdaDiv < 1.0) {
      for (int row = 0; row < rg.nCells(); ++row) {
        double& d = fz.Srelax.val[fz.Srelax.diag[row]];
        fz.diagExtra[row] = d / control.lambdaDiv - d;
        d += fz.diagExtra[row];
      }
    }
  }

  std::ofstream logStream;
  if (!control.logPath.empty()) {
    logStream.open(control.logPath);
    if (!logStream) throw IoError("cannot write iteration log '" + control.logPath + "'");
    logStream << "iter\tregion\tres0_x\tres0_y\tres0_z\tresF_x\tresF_y\tresF_z\tinner\t"
                 "lambda_div\tlambda_K\tK_max\n";
  }

  // Residual normalization per region and component, frozen at the first
  // iteration.  A region without its own sources has a zero initial
  // residual (it sees nothing until a neighbour has solved); such entries
  // fall back to the largest initial residual of any region, the problem
  // scale, after the first sweep.
  std::vector<Vec3> norms(nRegions, Vec3{1.0, 1.0, 1.0});
  std::vector<std::array<bool, 3>> normFrozen(nRegions, {false, false, false});
  std::vector<RegionSystem> lastSys(nRegions);
  std::vector<double> lastMetric(nRegions, 0.0);

  // Latest available cell gradients per region; the interface skew terms
  // read the other side from here.
  std::vector<std::vector<Mat3>> lagG(nRegions);

  compute_B(mesh, bcs, state, control.gradient, &lagG);

  const bool regionWise = control.application == CouplingApplication::RegionWise;

  for (int iter = 1; iter <= control.maxOuterIterations; ++iter) {
    std::vector<std::vector<Vec3>> lagA(nRegions);
    for (int r = 0; r < nRegions; ++r) lagA[r] = state.fields[r].A.v;

    // The interface A coupling always uses the latest available neighbour
    // solution (lagA is refreshed after each region solve).  What the
    // application mode decides is when the relaxed quantities are updated:
    // simultaneously for all regions before the sweep, or per region at its
    // turn in the sweep.
    if (!regionWise) {
      compute_surface_currents(mesh, state, control.lambdaK);
      // compute_B refreshed lagG from this exact field state at the end of
      // the previous iteration (or just above for the first), so the
      // gradients are reused here; the K refresh only moves the O(h)
      // interface shifts, which every region re-evaluates at its own sweep
      // turn anyway.
      for (int r = 0; r < nRegions; ++r) {
        if (chiZero[r]) continue;  // susceptibility term identically zero
        const Region& rg = mesh.regions[r];
        const std::vector<Vec3> rawSkew =
            div_skew_flux(rg, chiFace[r], face_gradients(rg, lagG[r]));
        for (int c = 0; c < rg.nCells(); ++c) {
          divSkewMem[r][c] += control.lambdaDiv * (rawSkew[c] - divSkewMem[r][c]);
        }
      }
    }

    double iterMax = 0.0;

    for (int r : order) {
      const Region& rg = mesh.regions[r];
      const int n = rg.nCells();
      std::vector<Vec3>& A = state.fields[r].A.v;
      const std::vector<Vec3> Aold = A;

      if (regionWise) compute_surface_currents(mesh, state, control.lambdaK, r);

      std::vector<Vec3> faces = a_face_values(mesh, r, bcs[r], A, lagA, state, lagG);
      std::vector<Mat3> G = cell_gradients(rg, control.gradient, A, faces);
      lagG[r] = G;

      if (regionWise && !chiZero[r]) {
        const std::vector<Vec3> rawSkew = div_skew_flux(rg, chiFace[r], face_gradients(rg, G));
        for (int c = 0; c < n; ++c) {
          divSkewMem[r][c] += control.lambdaDiv * (rawSkew[c] - divSkewMem[r][c]);
        }
      }

      RegionSystem sys;
      sys.srcFreeCurrent = srcFreeNorm[r];
      sys.srcMagnetCurl = srcCurlNorm[r];

      std::vector<Vec3> rhsBase = staticSrc[r];
      {
        std::vector<Vec3> tmp(n);
        for (int c = 0; c < n; ++c) tmp[c] = -kMu0 * divSkewMem[r][c];
        sys.srcBoundSkew = vec_l1(tmp);
        for (int c = 0; c < n; ++c) rhsBase[c] += tmp[c];
      }
      sys.srcBoundary = frozen[r].dirichletNorm;
      for (int c = 0; c < n; ++c) rhsBase[c] += frozen[r].dirichletSrc[c];
      {
        std::vector<Vec3> tmp(n, Vec3{});
        for (int f = rg.nInternalFaces; f < rg.nFaces(); ++f) {
          const int i = rg.faceInterface[f];
          if (i < 0) continue;
          const int p = rg.facePair[f];
          const PairView pv = pair_view(mesh, r, i, p);
          const double coeff = rg.geo.faceAreaMag[f] / (pv.dSelf + pv.dOther);
          tmp[rg.faces[f].owner] += coeff * (lagA[pv.otherRegion][pv.otherCell] +
                                             (kMu0 * pv.dOther) * state.interfaces[i].K[p]);
        }
        sys.srcInterface = vec_l1(tmp);
        for (int c = 0; c < n; ++c) rhsBase[c] += tmp[c];
      }

      auto deferred_skew = [&](const std::vector<Mat3>& grads) {
        std::vector<Vec3> out(n, Vec3{});
        add_non_orthogonal_sources(rg, non_orthogonal_correction(rg, grads), out);
        add_dirichlet_skew_sources(rg, bcs[r], grads, out);
        return out;
      };
      // Deferred flux correction of the interface match; reads the latest
      // gradients of both sides from lagG (self was refreshed just above).
      auto interface_skew = [&]() {
        std::vector<Vec3> out(n, Vec3{});
        for (int f = rg.nInternalFaces; f < rg.nFaces(); ++f) {
          const int i = rg.faceInterface[f];
          if (i < 0) continue;
          const InterfacePatch& ip = mesh.interfaces[i];
          const InterfaceFacePair& pr = ip.pairs[rg.facePair[f]];
          const PairSkew sk = pair_skew(mesh, ip, pr, lagG);
          const Vec3 cbar = (1.0 / (pr.dA + pr.dB)) * (pr.dA * sk.cA + pr.dB * sk.cB);
          const double sign = r == ip.regionA ? 1.0 : -1.0;
          out[rg.faces[f].owner] += (sign * rg.geo.faceAreaMag[f]) * cbar;
        }
        return out;
      };
      std::vector<Vec3> skew = deferred_skew(G);
      std::vector<Vec3> iskew = interface_skew();
      sys.srcNonOrth = vec_l1(skew);
      sys.srcInterface += vec_l1(iskew);

      // Initial residual of the unrelaxed system at the current field; this
      // drives outer convergence with the normalization frozen at iteration 1.
      Vec3 res0;
      for (int comp = 0; comp < 3; ++comp) {
        std::vector<double> b(n);
        for (int c = 0; c < n; ++c) b[c] = rhsBase[c][comp] + skew[c][comp] + iskew[c][comp];
        res0[comp] = l1_norm(residual(frozen[r].S, component(A, comp), b));
      }
      if (iter == 1) {
        for (int comp = 0; comp < 3; ++comp) {
          if (res0[comp] > 1e-30) {
            norms[r][comp] = res0[comp];
            normFrozen[r][comp] = true;
          }
        }
      }
      double metric = 0.0;
      for (int comp = 0; comp < 3; ++comp) metric = std::max(metric, res0[comp] / norms[r][comp]);
      lastMetric[r] = metric;
      iterMax = std::max(iterMax, metric);

      const std::vector<double>& diagExtra = frozen[r].diagExtra;

      int innerIts = 0;
      Vec3 resF;
      const int passes = 1 + nCorr[r];
      for (int pass = 0; pass < passes; ++pass) {
        if (pass > 0) {
          faces = a_face_values(mesh, r, bcs[r], A, lagA, state, lagG);
          G = cell_gradients(rg, control.gradient, A, faces);
          lagG[r] = G;
          skew = deferred_skew(G);
          iskew = interface_skew();
        }
        for (int comp = 0; comp < 3; ++comp) {
          std::vector<double> b(n);
          for (int c = 0; c < n; ++c) {
            b[c] = rhsBase[c][comp] + skew[c][comp] + iskew[c][comp] + diagExtra[c] * Aold[c][comp];
          }
          std::vector<double> x = component(A, comp);
          const SolverStatus st = solve(frozen[r].Srelax, x, b, control.inner);
          if (st.breakdown) {
            report.breakdown = true;
            report.diverged = true;
            report.iterations = iter;
            report.failure = "inner solver breakdown in region '" + rg.name + "', component " +
                             std::to_string(comp);
            return report;
          }
          innerIts += st.iterations;
          resF[comp] = st.finalResidual;
          set_component(A, comp, x);
        }
      }

      if (control.relaxMode == RelaxMode::Explicit && control.lambdaDiv < 1.0) {
        explicit_relax(A, Aold, control.lambdaDiv);
      }
      lagA[r] = A;
      if (regionWise) {
        // Later regions refresh K against this region's updated field.
        const std::vector<Vec3> f2 = a_face_values(mesh, r, bcs[r], A, lagA, state, lagG);
        const std::vector<Mat3> G2 = cell_gradients(rg, control.gradient, A, f2);
        lagG[r] = G2;
        for (int c = 0; c < n; ++c) state.fields[r].B.v[c] = dual(G2[c]);
      }

      lastSys[r] = sys;

      if (logStream.is_open()) {
        double kMax = 0.0;
        for (const InterfaceState& st : state.interfaces) {
          for (const Vec3& k : st.K) kMax = std::max(kMax, max_abs_component(k));
        }
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "%d\t%s\t%.6e\t%.6e\t%.6e\t%.6e\t%.6e\t%.6e\t%d\t%.3f\t%.3f\t%.6e\n", iter,
                      rg.name.c_str(), res0.x / norms[r].x, res0.y / norms[r].y,
                      res0.z / norms[r].z, resF.x, resF.y, resF.z, innerIts, control.lambdaDiv,
                      control.lambdaK, kMax);
        logStream << buf;
      }
    }

    if (iter == 1) {
      Vec3 problemScale;
      for (int r = 0; r < nRegions; ++r) {
        for (int comp = 0; comp < 3; ++comp) {
          if (normFrozen[r][comp]) {
            problemScale[comp] = std::max(problemScale[comp], norms[r][comp]);
          }
        }
      }
      for (int r = 0; r < nRegions; ++r) {
        for (int comp = 0; comp < 3; ++comp) {
          if (!normFrozen[r][comp] && problemScale[comp] > 0.0) {
            norms[r][comp] = problemScale[comp];
          }
        }
      }
    }

    compute_B(mesh, bcs, state, control.gradient, &lagG);
    report.residualHistory.push_back(iterMax);
    report.iterations = iter;

    if (!std::isfinite(iterMax)) {
      int worst = order.front();
      for (int r : order) {
        if (!std::isfinite(lastMetric[r])) worst = r;
      }
      report.diverged = true;
      report.failure = "non-finite residual in region '" + mesh.regions[worst].name +
                       "'; dominant source: " + lastSys[worst].dominant_source();
      return report;
    }
    if (iterMax < control.outerTolerance) {
      report.converged = true;
      return report;
    }
    const size_t h = report.residualHistory.size();
    if (h >= 6) {
      const double past = std::max(report.residualHistory[h - 6], 1e-12);
      if (iterMax > control.divergenceGuard * past) {
        int worst = order.front();
        for (int r : order) {
          if (lastMetric[r] > lastMetric[worst]) worst = r;
        }
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "residual grew %.2fx over 5 iterations in region '%s'; dominant source: %s",
                      iterMax / past, mesh.regions[worst].name.c_str(),
                      lastSys[worst].dominant_source().c_str());
        report.diverged = true;
        report.failure = buf;
        return report;
      }
    }
  }
  return report;  // iteration budget exhausted
}

RegionSystem assemble_region(const MultiRegionMesh& mesh, int r,
                             const std::vector<std::vector<BoundaryCondition>>& bcs,
                             const SolveState& state, const OuterIterationControl& control) {
  const Region& rg = mesh.regions[r];
  const int n = rg.nCells();
  const int nRegions = static_cast<int>(mesh.regions.size());

  std::vector<std::vector<Vec3>> lagA(nRegions);
  for (int q = 0; q < nRegions; ++q) lagA[q] = state.fields[q].A.v;

  // Gradients for the skew terms, bootstrapped with an unshifted pass the
  // same way compute_B does.
  std::vector<std::vector<Mat3>> lagG(nRegions);
  for (int pass = 0; pass < 2; ++pass) {
    for (int q = 0; q < nRegions; ++q) {
      const std::vector<Vec3> faces = a_face_values(mesh, q, bcs[q], lagA[q], lagA, state, lagG);
      lagG[q] = cell_gradients(mesh.regions[q], control.gradient, lagA[q], faces);
    }
  }
  const std::vector<Mat3>& G = lagG[r];

  RegionSystem sys;
  sys.S = assemble_negated_laplacian(rg, bcs[r]);
  for (int f = rg.nInternalFaces; f < rg.nFaces(); ++f) {
    const int i = rg.faceInterface[f];
    if (i < 0) continue;
    const PairView pv = pair_view(mesh, r, i, rg.facePair[f]);
    sys.S.at(rg.faces[f].owner, rg.faces[f].owner) +=
        rg.geo.faceAreaMag[f] / (pv.dSelf + pv.dOther);
  }

  sys.rhs.assign(n, Vec3{});
  std::vector<Vec3> part(n);
  auto take = [&](double& slot) {
    slot = vec_l1(part);
    for (int c = 0; c < n; ++c) sys.rhs[c] += part[c];
    part.assign(n, Vec3{});
  };

  for (int c = 0; c < n; ++c) {
    part[c] = (kMu0 * rg.geo.cellVolume[c]) * state.fields[r].Jf.v[c];
  }
  take(sys.srcFreeCurrent);

  {
    std::vector<Vec3> mFace;
    interpolate_internal(rg, state.fields[r].M.v, mFace);
    extend_owner_values(rg, state.fields[r].M.v, mFace);
    skew_correct_internal(rg, state.fields[r].M.v, mFace);
    const std::vector<Vec3> curlM = curl_from_faces(rg, mFace);
    for (int c = 0; c < n; ++c) part[c] = (kMu0 * rg.geo.cellVolume[c]) * curlM[c];
  }
  take(sys.srcMagnetCurl);

  {
    const std::vector<double> chiFace =
        susceptibility_face_values(rg, state.fields[r].chiField.v);
    const std::vector<Vec3> raw = div_skew_flux(rg, chiFace, face_gradients(rg, G));
    for (int c = 0; c < n; ++c) part[c] = -kMu0 * raw[c];
  }
  take(sys.srcBoundSkew);

  add_dirichlet_value_sources(rg, bcs[r], part);
  take(sys.srcBoundary);

  add_non_orthogonal_sources(rg, non_orthogonal_correction(rg, G), part);
  add_dirichlet_skew_sources(rg, bcs[r], G, part);
  take(sys.srcNonOrth);

  for (int f = rg.nInternalFaces; f < rg.nFaces(); ++f) {
    const int i = rg.faceInterface[f];
    if (i < 0) continue;
    const int p = rg.facePair[f];
    const PairView pv = pair_view(mesh, r, i, p);
    const InterfacePatch& ip = mesh.interfaces[i];
    const InterfaceFacePair& pr = ip.pairs[p];
    const double coeff = rg.geo.faceAreaMag[f] / (pv.dSelf + pv.dOther);
    const int own = rg.faces[f].owner;
    part[own] += coeff * (lagA[pv.otherRegion][pv.otherCell] +
                          (kMu0 * pv.dOther) * state.interfaces[i].K[p]);
    const PairSkew sk = pair_skew(mesh, ip, pr, lagG);
    const Vec3 cbar = (1.0 / (pr.dA + pr.dB)) * (pr.dA * sk.cA + pr.dB * sk.cB);
    const double sign = r == ip.regionA ? 1.0 : -1.0;
    part[own] += (sign * rg.geo.faceAreaMag[f]) * cbar;
  }
  take(sys.srcInterface);

  return sys;
}

GaugeReport gauge_report(const MultiRegionMesh& mesh,
                         const std::vector<std::vector<BoundaryCondition>>& bcs,
                         const SolveState& state) {
  GaugeReport rep;
  const double L = mesh.diameter();
  std::vector<std::vector<Vec3>> lagA(mesh.regions.size());
  for (size_t r = 0; r < mesh.regions.size(); ++r) lagA[r] = state.fields[r].A.v;

  double aRef = 0.0, bRef = 0.0;
  for (size_t r = 0; r < mesh.regions.size(); ++r) {
    for (const Vec3& a : state.fields[r].A.v) aRef = std::max(aRef, norm(a));
    for (const Vec3& b : state.fields[r].B.v) bRef = std::max(bRef, norm(b));
  }
  if (aRef <= 0.0) aRef = 1.0;
  if (bRef <= 0.0) bRef = 1.0;

  // Gradients for the interface skew shift, bootstrapped from an unshifted
  // pass like compute_B does.
  std::vector<std::vector<Mat3>> lagG(mesh.regions.size());
  for (size_t r = 0; r < mesh.regions.size(); ++r) {
    const Region& rg = mesh.regions[r];
    const std::vector<Vec3> face =
        a_face_values(mesh, static_cast<int>(r), bcs[r], lagA[r], lagA, state, lagG);
    lagG[r] = cell_gradients(rg, GradientScheme::Gauss, lagA[r], face);
  }

  double volSum = 0.0, aSq = 0.0, bSq = 0.0;
  for (size_t r = 0; r < mesh.regions.size(); ++r) {
    const Region& rg = mesh.regions[r];
    std::vector<Vec3> aFace =
        a_face_values(mesh, static_cast<int>(r), bcs[r], lagA[r], lagA, state, lagG);
    skew_correct_internal(rg, lagA[r], aFace);
    std::vector<Vec3> bFace;
    interpolate_internal(rg, state.fields[r].B.v, bFace);
    extend_owner_values(rg, state.fields[r].B.v, bFace);
    skew_correct_internal(rg, state.fields[r].B.v, bFace);
    for (int c = 0; c < rg.nCells(); ++c) {
      double divA = 0.0, divB = 0.0;
      for (int f : rg.cells[c]) {
        if (!rg.faceActive[f]) continue;
        const Vec3 s = rg.outwardSign(f, c) * rg.geo.faceArea[f];
        divA += dot(s, aFace[f]);
        divB += dot(s, bFace[f]);
      }
      const double V = rg.geo.cellVolume[c];
      const double da = std::fabs(divA / V) * L / aRef;
      const double db = std::fabs(divB / V) * L / bRef;
      rep.maxDivA = std::max(rep.maxDivA, da);
      rep.maxDivB = std::max(rep.maxDivB, db);
      volSum += V;
      aSq += V * da * da;
      bSq += V * db * db;
    }
  }
  if (volSum > 0.0) {
    rep.l2DivA = std::sqrt(aSq / volSum);
    rep.l2DivB = std::sqrt(bSq / volSum);
  }
  return rep;
}

}  // namespace ferrovolt
