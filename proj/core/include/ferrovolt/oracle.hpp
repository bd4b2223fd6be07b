#pragma once

#include <vector>

#include "ferrovolt/sparse.hpp"

namespace ferrovolt {

// Dense LU with partial pivoting.  Deliberately self-contained so it can
// cross-check the sparse iterative path without sharing code with it.
class DenseLU {
 public:
  // Row-major n x n.  Throws on a singular matrix.
  DenseLU(int n, std::vector<double> a);

  std::vector<double> solve(const std::vector<double>& b) const;

 private:
  int n_;
  std::vector<double> lu_;
  std::vector<int> piv_;
};

// Densifies S and solves by LU.  Refuses systems above `maxUnknowns`; the
// reference path is for verification, not production runs.
std::vector<double> dense_reference_solve(const SparseMatrix& S, const std::vector<double>& b,
                                          int maxUnknowns = 2000);

}  // namespace ferrovolt
