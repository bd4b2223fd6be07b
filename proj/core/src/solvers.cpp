#include "ferrovolt/solvers.hpp"

#include <cmath>

#include "ferrovolt/error.hpp"

namespace ferrovolt {

SolverKind parse_solver_kind(const std::string& name) {
  if (name == "gaussSeidel") return SolverKind::GaussSeidel;
  if (name == "cg") return SolverKind::ConjugateGradient;
  if (name == "bicgstab") return SolverKind::BiCgStab;
  throw ConfigError("unknown linear solver '" + name + "' (gaussSeidel, cg, bicgstab)");
}

PrecondKind parse_precond_kind(const std::string& name) {
  if (name == "none") return PrecondKind::None;
  if (name == "diagonal") return PrecondKind::Diagonal;
  throw ConfigError("unknown preconditioner '" + name + "' (none, diagonal)");
}

namespace {

constexpr double kTinyNorm = 1e-300;

// Absolute stop floor at roundoff scale of the data.  Warm starts from outer
// loops can arrive with residuals near machine precision; demanding a further
// relative reduction there would just spin until maxIterations.
constexpr double kRoundoff = 1e-15;

// Convergence threshold per the solver contract: reduce the entry residual by
// `tolerance`, with the roundoff floor above.
double stop_threshold(const SolverControl& c, double res0, const std::vector<double>& b) {
  return std::max({c.tolerance * res0, kRoundoff * l2_norm(b), kTinyNorm});
}

struct Workspace {
  std::vector<double> r, z, p, q, rr, s, t, v, invDiag;
};

void apply_precond(const SparseMatrix& S, PrecondKind kind, const std::vector<double>& invDiag,
                   const std::vector<double>& r, std::vector<double>& z) {
  if (kind == PrecondKind::None) {
    z = r;
    return;
  }
  z.resize(S.n);
  for (int i = 0; i < S.n; ++i) z[i] = invDiag[i] * r[i];
}

double dot_product(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

SolverStatus gauss_seidel(const SparseMatrix& S, std::vector<double>& x,
                          const std::vector<double>& b, const SolverControl& c) {
  SolverStatus st;
  st.initialResidual = l2_norm(residual(S, x, b));
  const double norm = std::max(st.initialResidual, kTinyNorm);
  const double thresh = stop_threshold(c, st.initialResidual, b);
  double res = st.initialResidual;
  int it = 0;
  while (res > thresh && it < c.maxIterations) {
    for (int r = 0; r < S.n; ++r) {
      double sum = b[r];
      double d = 0.0;
      for (int k = S.rowPtr[r]; k < S.rowPtr[r + 1]; ++k) {
        if (S.col[k] == r) {
          d = S.val[k];
        } else {
          sum -= S.val[k] * x[S.col[k]];
        }
      }
      x[r] = sum / d;
    }
    ++it;
    res = l2_norm(residual(S, x, b));
  }
  st.iterations = it;
  st.finalResidual = res / norm;
  st.converged = res <= thresh;
  return st;
}

SolverStatus conjugate_gradient(const SparseMatrix& S, std::vector<double>& x,
                                const std::vector<double>& b, const SolverControl& c) {
  SolverStatus st;
  Workspace w;
  w.r = residual(S, x, b);
  st.initialResidual = l2_norm(w.r);
  const double norm = std::max(st.initialResidual, kTinyNorm);
  const double thresh = stop_threshold(c, st.initialResidual, b);
  double res = st.initialResidual;
  if (res <= thresh) {
    st.converged = true;
    st.finalResidual = res / norm;
    return st;
  }

  w.invDiag.resize(S.n);
  for (int i = 0; i < S.n; ++i) w.invDiag[i] = 1.0 / S.val[S.diag[i]];

  apply_precond(S, c.precond, w.invDiag, w.r, w.z);
  w.p = w.z;
  double rz = dot_product(w.r, w.z);
  w.q.resize(S.n);

  int it = 0;
  while (it < c.maxIterations) {
    S.multiply(w.p.data(), w.q.data());
    const double pq = dot_product(w.p, w.q);
    if (std::fabs(pq) < kTinyNorm) {
      st.breakdown = true;
      break;
    }
    const double alpha = rz / pq;
    for (int i = 0; i < S.n; ++i) {
      x[i] += alpha * w.p[i];
      w.r[i] -= alpha * w.q[i];
    }
    ++it;
    res = l2_norm(w.r);
    if (res <= thresh) break;

    apply_precond(S, c.precond, w.invDiag, w.r, w.z);
    const double rzNew = dot_product(w.r, w.z);
    const double beta = rzNew / rz;
    rz = rzNew;
    for (int i = 0; i < S.n; ++i) w.p[i] = w.z[i] + beta * w.p[i];
  }
  st.iterations = it;
  st.finalResidual = res / norm;
  st.converged = res <= thresh;
  return st;
}

SolverStatus bicgstab(const SparseMatrix& S, std::vector<double>& x, const std::vector<double>& b,
                      const SolverControl& c) {
  SolverStatus st;
  Workspace w;
  w.r = residual(S, x, b);
  st.initialResidual = l2_norm(w.r);
  const double norm = std::max(st.initialResidual, kTinyNorm);
  const double thresh = stop_threshold(c, st.initialResidual, b);
  double res = st.initialResidual;
  if (res <= thresh) {
    st.converged = true;
    st.finalResidual = res / norm;
    return st;
  }

  w.invDiag.resize(S.n);
  for (int i = 0; i < S.n; ++i) w.invDiag[i] = 1.0 / S.val[S.diag[i]];

  w.rr = w.r;  // shadow residual
  w.p.assign(S.n, 0.0);
  w.v.assign(S.n, 0.0);
  w.q.resize(S.n);
  w.s.resize(S.n);
  w.t.resize(S.n);
  std::vector<double> phat(S.n), shat(S.n);
  double rho = 1.0, alpha = 1.0, omega = 1.0;

  int it = 0;
  while (it < c.maxIterations) {
    const double rhoNew = dot_product(w.rr, w.r);
    if (std::fabs(rhoNew) < kTinyNorm) {
      st.breakdown = true;
      break;
    }
    const double beta = (rhoNew / rho) * (alpha / omega);
    rho = rhoNew;
    for (int i = 0; i < S.n; ++i) w.p[i] = w.r[i] + beta * (w.p[i] - omega * w.v[i]);
    apply_precond(S, c.precond, w.invDiag, w.p, phat);
    S.multiply(phat.data(), w.v.data());
    const double rrv = dot_product(w.rr, w.v);
    if (std::fabs(rrv) < kTinyNorm) {
      st.breakdown = true;
      break;
    }
    alpha = rho / rrv;
    for (int i = 0; i < S.n; ++i) w.s[i] = w.r[i] - alpha * w.v[i];
    ++it;
    res = l1_norm(w.s) / norm;
    if (res <= c.tolerance) {
      for (int i = 0; i < S.n; ++i) x[i] += alpha * phat[i];
      break;
    }
    apply_precond(S, c.precond, w.invDiag, w.s, shat);
    S.multiply(shat.data(), w.t.data());
    const double tt = dot_product(w.t, w.t);
    if (tt < kTinyNorm) {
      st.breakdown = true;
      break;
    }
    omega = dot_product(w.t, w.s) / tt;
    if (std::fabs(omega) < kTinyNorm) {
      st.breakdown = true;
      break;
    }
    for (int i = 0; i < S.n; ++i) {
      x[i] += alpha * phat[i] + omega * shat[i];
      w.r[i] = w.s[i] - omega * w.t[i];
    }
    res = l1_norm(w.r) / norm;
    if (res <= c.tolerance) break;
  }
  st.iterations = it;
  st.finalResidual = res;
  st.converged = res <= c.tolerance;
  return st;
}

}  // namespace

SolverStatus solve(const SparseMatrix& S, std::vector<double>& x, const std::vector<double>& b,
                   const SolverControl& control) {
  const double norm = std::max(l1_norm(b), kTinyNorm);
  switch (control.kind) {
    case SolverKind::GaussSeidel:
      return gauss_seidel(S, x, b, control, norm);
    case SolverKind::ConjugateGradient:
      return conjugate_gradient(S, x, b, control, norm);
    case SolverKind::BiCgStab:
      return bicgstab(S, x, b, control, norm);
  }
  return {};
}

void implicit_relax(SparseMatrix& S, std::vector<Vec3>& rhs, const std::vector<Vec3>& phiOld,
                    double lambda) {
  for (int r = 0; r < S.n; ++r) {
    double& d = S.val[S.diag[r]];
    const double extra = d / lambda - d;
    d += extra;
    rhs[r] += extra * phiOld[r];
  }
}

void explicit_relax(std::vector<Vec3>& phi, const std::vector<Vec3>& phiOld, double lambda) {
  for (size_t i = 0; i < phi.size(); ++i) {
    phi[i] = phiOld[i] + lambda * (phi[i] - phiOld[i]);
  }
}

}  // namespace ferrovolt
