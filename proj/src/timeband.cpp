#include "mvop/timeband.hpp"

#include "mvop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mvop {

double dtilde_shift(const ModelParams& params) {
  const double n = params.N();
  return n * (n + params.alpha() + params.beta() + 2.0);
}

double dtilde_mu(const ModelParams& params, int n) {
  // Lambda_n + A - n; both products round identically at n = N, so mu_N == 0
  const double ab = params.alpha() + params.beta();
  const int big_n = params.N();
  return big_n * (big_n + ab + 2.0) - n * (n + ab + 2.0);
}

DtildeCoeffs dtilde_coeffs(const ModelParams& params, double x) {
  const double a = params.alpha();
  const double b = params.beta();
  const double om = params.omega();
  const Matrix2 id = Matrix2::Identity();
  DtildeCoeffs c;
  c.E2 = (x - om) * (1.0 - x * x) * id;
  c.E1 = (-(3.0 + a + b) * x * x + om * (2.0 + a + b) * x + 1.0) * id +
         (a - b) * (x - om) * t_matrix();
  c.E0 = x * dtilde_shift(params) * id;
  return c;
}

Matrix2 kernel_k(const ModelParams& params, double x, double y) {
  const QTable qx = q_table(params, params.N(), x);
  const QTable qy = q_table(params, params.N(), y);
  Matrix2 k = Matrix2::Zero();
  for (int w = 0; w <= params.N(); ++w) k += qx.value[w].transpose() * qy.value[w];
  return k;
}

Eigen::MatrixXd apply_S_coeffs(const BlockMatrix& m, const Eigen::MatrixXd& coeffs) {
  if (coeffs.cols() != m.flat().rows()) {
    throw DimensionError("apply_S_coeffs: expected " + std::to_string(m.flat().rows()) +
                         " coefficient columns, got " + std::to_string(coeffs.cols()));
  }
  return coeffs * m.flat();
}

namespace {

void require_open_interval(double x, const char* who) {
  if (!(std::abs(x) < 1.0)) {
    throw DomainError(std::string(who) + ": x must lie in (-1, 1)");
  }
}

Matrix2 dtilde_from_derivatives(const DtildeCoeffs& c, const Matrix2& f, const Matrix2& df,
                                const Matrix2& d2f) {
  return d2f * c.E2 + df * c.E1 + f * c.E0;
}

}  // namespace

Matrix2 apply_Dtilde(const ModelParams& params, const PolyHandle& f, double x) {
  require_open_interval(x, "apply_Dtilde");
  return dtilde_from_derivatives(dtilde_coeffs(params, x), f.eval(x), f.deriv1(x), f.deriv2(x));
}

Matrix2 apply_Dtilde_decomposed(const ModelParams& params, const PolyHandle& f, double x) {
  require_open_interval(x, "apply_Dtilde_decomposed");
  return (x - params.omega()) * apply_D(params, f, x) + (1.0 - x * x) * f.deriv1(x) +
         x * dtilde_shift(params) * f.eval(x);
}

BlockMatrix build_Ltilde(const ModelParams& params) {
  const double a = params.alpha();
  const double b = params.beta();
  const double om = params.omega();
  const int big_n = params.N();
  const Matrix2 id = Matrix2::Identity();
  const Matrix2 t = t_matrix();

  BlockMatrix l(big_n + 1);
  for (int n = 0; n <= big_n; ++n) {
    const double mu = dtilde_mu(params, n);
    const double lambda = d_eigenvalue(a, b, n);
    l.set_block(n, n,
                (mu * recurrence_b(a, b, n) - difform_t_coefficient(a, b, n)) * t -
                    lambda * om * id);
    if (n < big_n) {
      const double a_tilde = orthonormal_recurrence_a(a, b, n);  // = c~_{n+1}
      const double gamma_tilde = struct_constants(params, n).gamma_tilde_n;
      l.set_block(n, n + 1, mu * a_tilde * id);
      l.set_block(n + 1, n, (dtilde_mu(params, n + 1) * a_tilde + gamma_tilde) * id);
    }
  }
  return l;
}

BlockMatrix build_Ltilde_T_variant(const ModelParams& params) {
  return build_Ltilde(params) * BlockMatrix::block_t(params.N() + 1);
}

double commutator_residual(const BlockMatrix& m, const BlockMatrix& l) {
  if (m.order() != l.order()) throw DimensionError("commutator_residual: order mismatch");
  const Eigen::MatrixXd c = m.flat() * l.flat() - l.flat() * m.flat();
  return c.norm() / (1.0 + m.flat().norm() * l.flat().norm());
}

double symmetry_form_residual(const BlockMatrix& l, const BlockMatrix& m) {
  if (m.order() != l.order()) throw DimensionError("symmetry_form_residual: order mismatch");
  const Eigen::MatrixXd c = l.flat() * m.flat() - m.flat() * l.flat().transpose();
  return c.norm() / (1.0 + m.flat().norm() * l.flat().norm());
}

double transpose_residual(const BlockMatrix& l) {
  return (l.flat() - l.flat().transpose()).norm() / (1.0 + l.flat().norm());
}

namespace {

// (Q_w D~)(x) for w = 0..N with analytic derivatives.
std::vector<Matrix2> dtilde_images(const ModelParams& params, const QTable& q, double x) {
  const DtildeCoeffs c = dtilde_coeffs(params, x);
  std::vector<Matrix2> out;
  out.reserve(q.value.size());
  for (std::size_t w = 0; w < q.value.size(); ++w) {
    out.push_back(dtilde_from_derivatives(c, q.value[w], q.deriv1[w], q.deriv2[w]));
  }
  return out;
}

}  // namespace

double kernel_intertwining_residual(const ModelParams& params,
                                    std::span<const std::pair<double, double>> samples,
                                    double omega_shift_x) {
  const ModelParams shifted =
      omega_shift_x == 0.0 ? params : params.with_omega(params.omega() + omega_shift_x);
  double worst = 0.0;
  for (const auto& [x, y] : samples) {
    require_open_interval(x, "kernel_intertwining_residual");
    require_open_interval(y, "kernel_intertwining_residual");
    const QTable qx = q_table(params, params.N(), x);
    const QTable qy = q_table(params, params.N(), y);
    const std::vector<Matrix2> dx = dtilde_images(shifted, qx, x);
    const std::vector<Matrix2> dy = dtilde_images(params, qy, y);
    Matrix2 lhs = Matrix2::Zero();
    Matrix2 rhs = Matrix2::Zero();
    for (int w = 0; w <= params.N(); ++w) {
      lhs += qy.value[w].transpose() * dx[w];
      rhs += qx.value[w].transpose() * dy[w];
    }
    worst = std::max(worst, (lhs - rhs.transpose()).norm());
  }
  return worst;
}

std::vector<std::pair<double, double>> interior_sample_pairs(int count, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(count));
  // raw 53-bit draws keep the sequence independent of the standard library's distributions
  const auto draw = [&rng] {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return -0.95 + 1.9 * u;
  };
  for (int k = 0; k < count; ++k) {
    const double x = draw();
    const double y = draw();
    out.emplace_back(x, y);
  }
  return out;
}

}  // namespace mvop
