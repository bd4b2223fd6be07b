#pragma once

// Multi-region magnetostatic solve for the vector potential A with
// grad(A) = G, B = curl A:
//
//   -lap(A) = mu0 [ Jf - div(chi (G - G^T)) + curl M ]
//
// inside each region, coupled across material interfaces by a surface
// current K that enforces the tangential jump of H.  Regions are swept in a
// block Gauss-Seidel loop; the interface closure per face pair is
//
//   A_f = (A_C d_E + A_E d_C + mu0 K d_C d_E) / (d_C + d_E)
//
// with d_C, d_E the normal centroid-face distances, which matches one-sided
// fluxes whose difference equals -mu0 K.  Both sides assemble the same form:
// diagonal |s_f| / (d_C + d_E), source (|s_f| / (d_C + d_E)) (A_other + mu0 K
// d_other) with the other side's value lagged.

#include <string>
#include <vector>

#include "ferrovolt/fields.hpp"
#include "ferrovolt/fvops.hpp"
#include "ferrovolt/mesh.hpp"
#include "ferrovolt/solvers.hpp"
#include "ferrovolt/sparse.hpp"

namespace ferrovolt {

enum class RelaxMode { Implicit, Explicit };
enum class CouplingApplication { Simultaneous, RegionWise };

RelaxMode parse_relax_mode(const std::string& name);
CouplingApplication parse_coupling_application(const std::string& name);

struct OuterIterationControl {
  int maxOuterIterations = 200;
  double outerTolerance = 1e-6;   // on the initial normalized residual
  double lambdaDiv = 0.8;         // (0, 1]; blends the div-skew source and relaxes the solve
  double lambdaK = 1.0;           // (0, 1]; blends the surface-current update
  RelaxMode relaxMode = RelaxMode::Implicit;
  CouplingApplication application = CouplingApplication::Simultaneous;
  int nNonOrthCorrectors = -1;    // -1: 2 passes when max non-orthogonality > 5 deg, else 0
  double divergenceGuard = 10.0;  // abort when the residual grows this much over 5 iterations
  GradientScheme gradient = GradientScheme::Gauss;
  SolverControl inner;
  std::vector<int> regionOrder;   // empty: descending susceptibility
  std::string logPath;            // TSV iteration log; empty disables
};

// Surface current per interface face pair, one orientation-free vector per
// pair (the closed form is symmetric in the two sides).
struct InterfaceState {
  std::vector<Vec3> K;
  std::vector<Vec3> Kprev;
  bool initialized = false;
};

// Everything the outer loop mutates.
struct SolveState {
  std::vector<RegionFields> fields;        // parallel to mesh.regions
  std::vector<InterfaceState> interfaces;  // parallel to mesh.interfaces
  std::vector<Vec3> interfaceKf;           // imposed free surface current per interface
};

SolveState make_solve_state(const MultiRegionMesh& mesh,
                            const std::vector<MaterialSpec>& materials);

// Assembled system of one region plus the l1 magnitude of each source
// contribution, kept for divergence reports.
struct RegionSystem {
  SparseMatrix S;
  std::vector<Vec3> rhs;
  double srcFreeCurrent = 0.0;
  double srcBoundSkew = 0.0;
  double srcMagnetCurl = 0.0;
  double srcNonOrth = 0.0;
  double srcInterface = 0.0;
  double srcBoundary = 0.0;

  std::string dominant_source() const;
};

struct OuterIterationReport {
  bool converged = false;
  bool diverged = false;
  bool breakdown = false;  // inner solver breakdown
  int iterations = 0;
  std::string failure;                  // human-readable divergence diagnosis
  std::vector<double> residualHistory;  // max normalized initial residual per iteration
};

// One resolved interface face pair as seen from `regionIdx`.
struct PairView {
  int otherRegion = -1;
  int otherCell = -1;
  double dSelf = 0.0;
  double dOther = 0.0;
  double area = 0.0;
};
PairView pair_view(const MultiRegionMesh& mesh, int regionIdx, int interfaceIdx, int pairIdx);

// Interface face value from the flux-matching closed form.
Vec3 interface_face_value(const Vec3& aSelf, const Vec3& aOther, double dSelf, double dOther,
                          const Vec3& K);

// Updates every interface K from the current B fields:
//   K_raw = -Kf + (chi_A B_A,f + M_A - chi_B B_B,f - M_B) x e_n
// where B is extrapolated one-sided to the face from each cell using the
// region's B gradient.  The first evaluation is taken as-is, later ones are
// blended by lambdaK.  With onlyRegion >= 0, only interfaces touching that
// region are refreshed (region-wise coupling application).
void compute_surface_currents(const MultiRegionMesh& mesh, SolveState& state, double lambdaK,
                              int onlyRegion = -1);

// Recomputes B = curl A for every region, using boundary values from the
// conditions and the interface closed form so the curl sees the same face
// values as the assembly.  lagG, when given, supplies and receives the
// latest per-region cell gradients that feed the interface skew shift;
// without it the gradients are bootstrapped internally.
void compute_B(const MultiRegionMesh& mesh,
               const std::vector<std::vector<BoundaryCondition>>& bcs, SolveState& state,
               GradientScheme scheme, std::vector<std::vector<Mat3>>* lagG = nullptr);

// One-shot assembly of one region's full system from the current fields:
// negated Laplacian with the interface transmission diagonal, and the
// complete right-hand side with every deferred correction evaluated at this
// state (no relaxation, no correction memory).  At a converged state the
// outer loop's residual is the residual of exactly this system; tests and
// the dense cross-check build it directly.
RegionSystem assemble_region(const MultiRegionMesh& mesh, int r,
                             const std::vector<std::vector<BoundaryCondition>>& bcs,
                             const SolveState& state, const OuterIterationControl& control);

// Block Gauss-Seidel outer loop.  Sweeps regions, assembling the negated
// Laplacian with lagged interface and non-orthogonality sources, and iterates
// until the initial normalized residual of every region and component drops
// below the tolerance.  Returns without throwing on divergence or iteration
// exhaustion; the report says which.
OuterIterationReport bgs_outer_loop(const MultiRegionMesh& mesh,
                                    const std::vector<std::vector<BoundaryCondition>>& bcs,
                                    SolveState& state, const OuterIterationControl& control);

// Largest |div B| * V / (|B| * area) style gauge/consistency indicators, for
// reporting only.
struct GaugeReport {
  double maxDivA = 0.0;   // max over cells of |div A| normalized by |A|/h
  double maxDivB = 0.0;   // same for B, flux form
  double l2DivA = 0.0;    // volume-weighted RMS with the same normalization
  double l2DivB = 0.0;
};
GaugeReport gauge_report(const MultiRegionMesh& mesh,
                         const std::vector<std::vector<BoundaryCondition>>& bcs,
                         const SolveState& state);

}  // namespace ferrovolt
