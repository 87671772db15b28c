#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace displab {

/// Dense small symmetric matrix (dimension <= 8 in practice).
struct SymMatrix {
  int n = 0;
  std::vector<double> a;  // row-major

  explicit SymMatrix(int dim) : n(dim), a(dim * dim, 0.0) {}
  double& at(int i, int j) { return a[i * n + j]; }
  double at(int i, int j) const { return a[i * n + j]; }
};

/// Eigenvalues by cyclic Jacobi rotations; plenty for the tiny phase
/// Hessians handled here.
inline std::vector<double> sym_eigenvalues(SymMatrix m) {
  const int n = m.n;
  if (n == 1) return {m.at(0, 0)};
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += m.at(i, j) * m.at(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = m.at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = m.at(i, p), aiq = m.at(i, q);
          m.at(i, p) = c * aip - s * aiq;
          m.at(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = m.at(p, i), aqi = m.at(q, i);
          m.at(p, i) = c * api - s * aqi;
          m.at(q, i) = s * api + c * aqi;
        }
      }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = m.at(i, i);
  return eig;
}

/// Number of eigenvalues exceeding tol * max |eigenvalue| in magnitude.
inline int rank_from_eigenvalues(const std::vector<double>& eig, double tol) {
  double top = 0.0;
  for (double e : eig) top = std::max(top, std::abs(e));
  if (top == 0.0) return 0;
  int rank = 0;
  for (double e : eig)
    if (std::abs(e) > tol * top) ++rank;
  return rank;
}

}  // namespace displab
