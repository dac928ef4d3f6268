#pragma once

#include <Eigen/Core>

namespace mvop {

/// Real 2x2 matrix. Every matrix-valued quantity of the model has this shape.
using Matrix2 = Eigen::Matrix2d;

/// The permutation matrix [[0, 1], [1, 0]].
inline Matrix2 t_matrix() {
  Matrix2 t;
  t << 0.0, 1.0, 1.0, 0.0;
  return t;
}

inline bool is_symmetric(const Matrix2& m, double tol) {
  return std::abs(m(0, 1) - m(1, 0)) <= tol;
}

/// Sylvester test on the symmetric part.
inline bool is_positive_definite(const Matrix2& m) {
  const double off = 0.5 * (m(0, 1) + m(1, 0));
  return m(0, 0) > 0.0 && m(0, 0) * m(1, 1) - off * off > 0.0;
}

/// Frobenius norm of [a, T].
inline double t_commutator_norm(const Matrix2& a) {
  const Matrix2 t = t_matrix();
  return (a * t - t * a).norm();
}

}  // namespace mvop
