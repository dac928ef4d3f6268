#include "mvop/tridiagonal_eigen.hpp"

#include "mvop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mvop {

void tridiagonal_ql(std::span<double> d, std::span<const double> offdiag, Eigen::MatrixXd& z,
                    int max_iterations) {
  const auto n = static_cast<Eigen::Index>(d.size());
  if (n == 0) return;
  if (static_cast<Eigen::Index>(offdiag.size()) + 1 != n) {
    throw DimensionError("tridiagonal_ql: offdiag must have n-1 entries");
  }
  if (z.cols() != n) throw DimensionError("tridiagonal_ql: vectors must have n columns");

  // e[i] couples i and i+1; e[n-1] is a zero sentinel.
  std::vector<double> e(offdiag.begin(), offdiag.end());
  e.push_back(0.0);

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (Eigen::Index l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    Eigen::Index m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_iterations) {
          throw NumericalError("tridiagonal_ql: no convergence for eigenvalue " +
                               std::to_string(l) + " of " + std::to_string(n) + " after " +
                               std::to_string(max_iterations) + " iterations (|e| = " +
                               std::to_string(std::abs(e[l])) + ")");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (Eigen::Index i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (Eigen::Index i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (Eigen::Index k = 0; k < z.rows(); ++k) {
            h = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * h;
            z(k, i) = c * z(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  // selection sort keeps the vector columns paired with their values
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    Eigen::Index k = i;
    double p = d[i];
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (d[j] < p) {
        k = j;
        p = d[j];
      }
    }
    if (k != i) {
      d[k] = d[i];
      d[i] = p;
      z.col(i).swap(z.col(k));
    }
  }
}

TridiagEigen eig_sym_tridiag(std::span<const double> diag, std::span<const double> offdiag) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  std::vector<double> d(diag.begin(), diag.end());
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);
  tridiagonal_ql(d, offdiag, z);
  TridiagEigen out;
  out.values = Eigen::Map<const Eigen::VectorXd>(d.data(), n);
  out.vectors = std::move(z);
  return out;
}

TridiagEigen eig_sym_tridiag(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DimensionError("eig_sym_tridiag: matrix must be square");
  const Eigen::Index n = a.rows();
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(i - j) > 1 && a(i, j) != 0.0) {
        throw StructureError("eig_sym_tridiag: entry (" + std::to_string(i) + ", " +
                             std::to_string(j) + ") lies outside the tridiagonal band");
      }
      if (std::abs(a(i, j) - a(j, i)) > 1e-11 * scale) {
        throw StructureError("eig_sym_tridiag: matrix is not symmetric");
      }
    }
  }
  std::vector<double> d(static_cast<std::size_t>(n));
  std::vector<double> e(static_cast<std::size_t>(std::max<Eigen::Index>(n - 1, 0)));
  for (Eigen::Index i = 0; i < n; ++i) d[i] = a(i, i);
  for (Eigen::Index i = 0; i + 1 < n; ++i) e[i] = 0.5 * (a(i, i + 1) + a(i + 1, i));
  return eig_sym_tridiag(d, e);
}

}  // namespace mvop
