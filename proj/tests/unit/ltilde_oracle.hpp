#pragma once

// Integral oracle for L~ built from Boost's Jacobi polynomials and tanh-sinh
// quadrature, sharing nothing with the library beyond its value types.

#include "mvop/matrix2.hpp"
#include "mvop/timeband.hpp"
#include "oracles.hpp"

#include <Eigen/Core>

#include <cmath>
#include <vector>

namespace oracle {

using mvop::DtildeCoeffs;
using mvop::Matrix2;
using mvop::t_matrix;

inline Matrix2 combine(double u, double v) {
  Matrix2 r;
  r << u + v, v - u, v - u, u + v;
  return 0.5 * r;
}

/// Q_n and its derivatives from Boost's Jacobi polynomials and an integrated norm.
struct BoostQ {
  double a, b;
  std::vector<double> h_ab, h_ba;

  BoostQ(double a_, double b_, int nmax) : a(a_), b(b_) {
    for (int n = 0; n <= nmax; ++n) {
      h_ab.push_back(jacobi_norm_by_integration(n, a, b));
      h_ba.push_back(jacobi_norm_by_integration(n, b, a));
    }
  }
  Matrix2 operator()(int n, double x, int order) const {
    const double u = boost_jacobi_derivative(n, a, b, x, order) / std::sqrt(h_ab[n]);
    const double v = boost_jacobi_derivative(n, b, a, x, order) / std::sqrt(h_ba[n]);
    return combine(u, v);
  }
};

/// Closed-form coefficients of the commuting operator, written out here once more.
inline DtildeCoeffs reference_coeffs(double a, double b, int N, double omega, double x) {
  const Matrix2 id = Matrix2::Identity();
  DtildeCoeffs c;
  c.E2 = (x - omega) * (1 - x * x) * id;
  c.E1 = (-(3 + a + b) * x * x + omega * (2 + a + b) * x + 1) * id + (a - b) * (x - omega) * t_matrix();
  c.E0 = x * N * (N + a + b + 2) * id;
  return c;
}

/// int_{-1}^{1} (Q_m D~)(x) W(x) Q_k(x)^T dx for 0 <= m <= N, 0 <= k <= N+1.
inline Eigen::MatrixXd boost_ltilde_oracle(double a, double b, int N, double omega) {
  const BoostQ q(a, b, N + 1);
  Eigen::MatrixXd out(2 * (N + 1), 2 * (N + 2));
  for (int m = 0; m <= N; ++m) {
    for (int k = 0; k <= N + 1; ++k) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          auto integrand = [&](int sign, double x) {
            const DtildeCoeffs c = reference_coeffs(a, b, N, omega, x);
            const Matrix2 qd = q(m, x, 2) * c.E2 + q(m, x, 1) * c.E1 + q(m, x, 0) * c.E0;
            const Matrix2 proj = 0.5 * (Matrix2::Identity() + sign * t_matrix());
            return (qd * proj * q(k, x, 0).transpose())(i, j);
          };
          out(2 * m + i, 2 * k + j) =
              integrate_weighted([&](double x) { return integrand(-1, x); }, a, b, -1, 1) +
              integrate_weighted([&](double x) { return integrand(+1, x); }, b, a, -1, 1);
        }
      }
    }
  }
  return out;
}

}  // namespace oracle
