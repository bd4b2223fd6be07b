#pragma once

#include <string>
#include <vector>

namespace ferrovolt {

// Square CSR matrix with a precomputed diagonal index per row.  The sparsity
// pattern is fixed at construction; at() addresses existing entries only.
struct SparseMatrix {
  int n = 0;
  std::vector<int> rowPtr;   // n+1
  std::vector<int> col;      // sorted within each row
  std::vector<double> val;
  std::vector<int> diag;     // position of entry (r,r) in col/val

  // Builds the pattern from per-row neighbour lists (the diagonal is added
  // automatically, duplicates are merged).  Values start at zero.
  static SparseMatrix from_stencil(int n, const std::vector<std::vector<int>>& neighbours);

  double& at(int r, int c);
  double get(int r, int c) const;
  void set_zero();

  // y = S x
  void multiply(const double* x, double* y) const;
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
};

double l1_norm(const std::vector<double>& v);
double l2_norm(const std::vector<double>& v);

// r = b - S x
std::vector<double> residual(const SparseMatrix& S, const std::vector<double>& x,
                             const std::vector<double>& b);

// Matrix Market coordinate format, for external inspection of an assembled
// system.
void write_matrix_market(const SparseMatrix& S, const std::string& path);
void write_matrix_market_vector(const std::vector<double>& v, const std::string& path);

}  // namespace ferrovolt
