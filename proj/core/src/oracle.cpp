#include "ferrovolt/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ferrovolt {

DenseLU::DenseLU(int n, std::vector<double> a) : n_(n), lu_(std::move(a)), piv_(n) {
  if (static_cast<int>(lu_.size()) != n * n) throw std::logic_error("DenseLU: bad matrix size");
  for (int i = 0; i < n_; ++i) piv_[i] = i;

  for (int k = 0; k < n_; ++k) {
    int p = k;
    double best = std::fabs(lu_[k * n_ + k]);
    for (int i = k + 1; i < n_; ++i) {
      const double m = std::fabs(lu_[i * n_ + k]);
      if (m > best) {
        best = m;
        p = i;
      }
    }
    if (best == 0.0) throw std::runtime_error("DenseLU: singular matrix at column " +
                                              std::to_string(k));
    if (p != k) {
      for (int j = 0; j < n_; ++j) std::swap(lu_[p * n_ + j], lu_[k * n_ + j]);
      std::swap(piv_[p], piv_[k]);
    }
    const double pivot = lu_[k * n_ + k];
    for (int i = k + 1; i < n_; ++i) {
      const double m = lu_[i * n_ + k] / pivot;
      lu_[i * n_ + k] = m;
      for (int j = k + 1; j < n_; ++j) lu_[i * n_ + j] -= m * lu_[k * n_ + j];
    }
  }
}

std::vector<double> DenseLU::solve(const std::vector<double>& b) const {
  std::vector<double> x(n_);
  for (int i = 0; i < n_; ++i) x[i] = b[piv_[i]];
  for (int i = 1; i < n_; ++i) {
    double sum = x[i];
    for (int j = 0; j < i; ++j) sum -= lu_[i * n_ + j] * x[j];
    x[i] = sum;
  }
  for (int i = n_ - 1; i >= 0; --i) {
    double sum = x[i];
    for (int j = i + 1; j < n_; ++j) sum -= lu_[i * n_ + j] * x[j];
    x[i] = sum / lu_[i * n_ + i];
  }
  return x;
}

std::vector<double> dense_reference_solve(const SparseMatrix& S, const std::vector<double>& b,
                                          int maxUnknowns) {
  if (S.n > maxUnknowns) {
    throw std::logic_error("dense_reference_solve: system of " + std::to_string(S.n) +
                           " unknowns exceeds the guard of " + std::to_string(maxUnknowns));
  }
  std::vector<double> dense(static_cast<size_t>(S.n) * S.n, 0.0);
  for (int r = 0; r < S.n; ++r) {
    for (int k = S.rowPtr[r]; k < S.rowPtr[r + 1]; ++k) {
      dense[static_cast<size_t>(r) * S.n + S.col[k]] = S.val[k];
    }
  }
  return DenseLU(S.n, std::move(dense)).solve(b);
}

}  // namespace ferrovolt
