#include "gvb/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gvb/errors.hpp"

namespace gvb {

namespace {

double off_norm(const DenseMatrix& m) {
  double s = 0.0;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      if (i != j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition jacobi_eigen(const DenseMatrix& symmetric, double tolerance, int max_sweeps) {
  const int n = symmetric.n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(symmetric(i, j) - symmetric(j, i)) > 1e-12)
        throw ParameterError("jacobi_eigen: matrix is not symmetric");

  DenseMatrix a = symmetric;
  DenseMatrix v(n);
  for (int i = 0; i < n; ++i) v(i, i) = 1.0;

  EigenDecomposition out;
  while (off_norm(a) > tolerance && out.sweeps < max_sweeps) {
    ++out.sweeps;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) < a(y, y); });
  for (int col : order) {
    out.values.push_back(a(col, col));
    std::vector<double> vec(static_cast<std::size_t>(n));
    double norm = 0.0;
    for (int k = 0; k < n; ++k) {
      vec[k] = v(k, col);
      norm += vec[k] * vec[k];
    }
    norm = std::sqrt(norm);
    for (double& x : vec) x /= norm;
    for (double x : vec) {
      if (std::abs(x) > 1e-12) {
        if (x < 0)
          for (double& y : vec) y = -y;
        break;
      }
    }
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

}  // namespace gvb
