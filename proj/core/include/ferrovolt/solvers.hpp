#pragma once

#include <string>
#include <vector>

#include "ferrovolt/sparse.hpp"
#include "ferrovolt/vec.hpp"

namespace ferrovolt {

enum class SolverKind { GaussSeidel, ConjugateGradient, BiCgStab };
enum class PrecondKind { None, Diagonal };

SolverKind parse_solver_kind(const std::string& name);
PrecondKind parse_precond_kind(const std::string& name);

struct SolverControl {
  SolverKind kind = SolverKind::ConjugateGradient;
  PrecondKind precond = PrecondKind::Diagonal;
  double tolerance = 1e-7;  // on the l1 residual normalized by max(|b|_1, tiny)
  int maxIterations = 2000;
};

struct SolverStatus {
  bool converged = false;
  bool breakdown = false;  // BiCGStab rho/omega collapse; caller treats as divergence
  int iterations = 0;
  double initialResidual = 0.0;  // normalized
  double finalResidual = 0.0;    // normalized
};

// Solves S x = b starting from the passed-in x.  x is updated in place.
SolverStatus solve(const SparseMatrix& S, std::vector<double>& x, const std::vector<double>& b,
                   const SolverControl& control);

// Diagonal under-relaxation of an assembled system: each diagonal is divided
// by lambda and the removed part is balanced on the rhs against the previous
// value, so a converged field is a fixed point of the relaxed system:
//   D  <- D / lambda
//   b  <- b + (D/lambda - D) * phiOld     (per component)
// The residual evaluated at phiOld is unchanged by this transform.
void implicit_relax(SparseMatrix& S, std::vector<Vec3>& rhs, const std::vector<Vec3>& phiOld,
                    double lambda);

// phi <- phiOld + lambda (phi - phiOld)
void explicit_relax(std::vector<Vec3>& phi, const std::vector<Vec3>& phiOld, double lambda);

}  // namespace ferrovolt
