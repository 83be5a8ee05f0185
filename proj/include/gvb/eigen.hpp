#pragma once

#include <vector>

namespace gvb {

/// Dense row-major square matrix, enough for Laplacians of small graphs.
struct DenseMatrix {
  int n = 0;
  std::vector<double> a;

  explicit DenseMatrix(int size = 0) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

struct EigenDecomposition {
  /// Ascending.
  std::vector<double> values;
  /// vectors[k] belongs to values[k]; unit length, first component with
  /// |x| > 1e-12 positive.
  std::vector<std::vector<double>> vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops
/// below `tolerance` (or `max_sweeps` is reached). Equal eigenvalues keep
/// their original column order.
EigenDecomposition jacobi_eigen(const DenseMatrix& symmetric, double tolerance = 1e-10,
                                int max_sweeps = 100);

}  // namespace gvb
