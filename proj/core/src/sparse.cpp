#include "ferrovolt/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ferrovolt/error.hpp"

namespace ferrovolt {

SparseMatrix SparseMatrix::from_stencil(int n, const std::vector<std::vector<int>>& neighbours) {
  SparseMatrix S;
  S.n = n;
  S.rowPtr.assign(n + 1, 0);
  for (int r = 0; r < n; ++r) {
    std::vector<int> cols = neighbours[r];
    cols.push_back(r);
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    for (int c : cols) {
      if (c < 0 || c >= n) throw std::logic_error("stencil column out of range");
      S.col.push_back(c);
    }
    S.rowPtr[r + 1] = static_cast<int>(S.col.size());
  }
  S.val.assign(S.col.size(), 0.0);
  S.diag.assign(n, -1);
  for (int r = 0; r < n; ++r) {
    for (int k = S.rowPtr[r]; k < S.rowPtr[r + 1]; ++k) {
      if (S.col[k] == r) S.diag[r] = k;
    }
  }
  return S;
}

double& SparseMatrix::at(int r, int c) {
  const int* first = col.data() + rowPtr[r];
  const int* last = col.data() + rowPtr[r + 1];
  const int* it = std::lower_bound(first, last, c);
  if (it == last || *it != c) throw std::logic_error("entry not in sparsity pattern");
  return val[it - col.data()];
}

double SparseMatrix::get(int r, int c) const {
  const int* first = col.data() + rowPtr[r];
  const int* last = col.data() + rowPtr[r + 1];
  const int* it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return 0.0;
  return val[it - col.data()];
}

void SparseMatrix::set_zero() { std::fill(val.begin(), val.end(), 0.0); }

void SparseMatrix::multiply(const double* x, double* y) const {
  for (int r = 0; r < n; ++r) {
    double sum = 0.0;
    for (int k = rowPtr[r]; k < rowPtr[r + 1]; ++k) sum += val[k] * x[col[k]];
    y[r] = sum;
  }
}

void SparseMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.resize(n);
  multiply(x.data(), y.data());
}

double l1_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> residual(const SparseMatrix& S, const std::vector<double>& x,
                             const std::vector<double>& b) {
  std::vector<double> r(S.n);
  S.multiply(x.data(), r.data());
  for (int i = 0; i < S.n; ++i) r[i] = b[i] - r[i];
  return r;
}

void write_matrix_market(const SparseMatrix& S, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << S.n << " " << S.n << " " << S.val.size() << "\n";
  char buf[64];
  for (int r = 0; r < S.n; ++r) {
    for (int k = S.rowPtr[r]; k < S.rowPtr[r + 1]; ++k) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", r + 1, S.col[k] + 1, S.val[k]);
      out << buf;
    }
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

void write_matrix_market_vector(const std::vector<double>& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  char buf[32];
  for (double x : v) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", x);
    out << buf;
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace ferrovolt
