#include "mvop/chebyshev_example.hpp"

#include "mvop/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace mvop::chebyshev {
namespace {

// U_n and its first two derivatives by differentiating the recurrence.
std::array<double, 3> u_with_derivatives(int n, double x) {
  if (n < 0) return {0.0, 0.0, 0.0};
  double u0 = 0.0, d0 = 0.0, s0 = 0.0;  // index -1
  double u1 = 1.0, d1 = 0.0, s1 = 0.0;  // index 0
  for (int k = 0; k < n; ++k) {
    const double u2 = 2.0 * x * u1 - u0;
    const double d2 = 2.0 * u1 + 2.0 * x * d1 - d0;
    const double s2 = 4.0 * d1 + 2.0 * x * s1 - s0;
    u0 = u1, d0 = d1, s0 = s1;
    u1 = u2, d1 = d2, s1 = s2;
  }
  return {u1, d1, s1};
}

}  // namespace

Matrix2 weight(double x) {
  if (!(std::abs(x) < 1.0)) throw DomainError("chebyshev::weight: x must lie in (-1, 1)");
  Matrix2 w;
  w << 1.0, x, x, 1.0;
  return w / std::sqrt(1.0 - x * x);
}

PolyHandle monic_P(int n) {
  if (n < 0) throw ParameterError("chebyshev::monic_P: degree must be non-negative");
  const double scale = std::ldexp(1.0, -n);
  return PolyHandle(n, [n, scale](double x, int order) -> Matrix2 {
    const double u = u_with_derivatives(n, x)[order];
    const double v = u_with_derivatives(n - 1, x)[order];
    Matrix2 m;
    m << u, -v, -v, u;
    return scale * m;
  });
}

double monic_norm(int n) { return std::sqrt(std::numbers::pi) * std::ldexp(1.0, -n); }

Matrix2 kernel(int N, double x, double y) {
  Matrix2 k = Matrix2::Zero();
  for (int n = 0; n <= N; ++n) {
    const PolyHandle p = monic_P(n);
    k += std::ldexp(1.0, 2 * n) * p.eval(x).transpose() * p.eval(y);
  }
  return k / std::numbers::pi;
}

DtildeCoeffs dtilde_coeffs(int N, double omega, double x) {
  const Matrix2 id = Matrix2::Identity();
  DtildeCoeffs c;
  c.E2 = (1.0 - x * x) * (x - omega) * id;
  c.E1 = (-3.0 * x * x + 2.0 * omega * x + 1.0) * id + (x - omega) * t_matrix();
  c.E0 = static_cast<double>(N) * (N + 2.0) * x * id;
  return c;
}

ModelParams params(int N, double omega) { return ModelParams::make(0.5, -0.5, N, omega); }

}  // namespace mvop::chebyshev
