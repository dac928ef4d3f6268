#include "mvop/matrix_jacobi.hpp"

#include "mvop/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mvop {

int ModelParams::default_quad_order(int N) { return std::max(64, 2 * N + 16); }

ModelParams ModelParams::make(double alpha, double beta, int N, double omega,
                              std::optional<int> quad_order, double tol) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) {
    throw ParameterError("alpha must satisfy alpha > -1 (got " + std::to_string(alpha) + ")");
  }
  if (!(beta > -1.0) || !std::isfinite(beta)) {
    throw ParameterError("beta must satisfy beta > -1 (got " + std::to_string(beta) + ")");
  }
  if (N < 0) throw ParameterError("N must be non-negative (got " + std::to_string(N) + ")");
  if (!(omega > -1.0 && omega <= 1.0)) {
    throw ParameterError("Omega must lie in (-1, 1] (got " + std::to_string(omega) + ")");
  }
  if (!(tol > 0.0)) throw ParameterError("tol must be positive");
  const int order = quad_order.value_or(default_quad_order(N));
  if (order < 2 * N + 16) {
    throw ParameterError("quad_order must be at least 2N + 16 = " + std::to_string(2 * N + 16) +
                         " (got " + std::to_string(order) + ")");
  }
  ModelParams p;
  p.alpha_ = alpha;
  p.beta_ = beta;
  p.n_ = N;
  p.omega_ = omega;
  p.quad_order_ = order;
  p.tol_ = tol;
  return p;
}

ModelParams ModelParams::with_omega(double omega) const {
  return make(alpha_, beta_, n_, omega, quad_order_, tol_);
}

ModelParams ModelParams::with_N(int N) const {
  return make(alpha_, beta_, N, omega_, std::max(quad_order_, 2 * N + 16), tol_);
}

ModelParams ModelParams::with_quad_order(int quad_order) const {
  return make(alpha_, beta_, n_, omega_, quad_order, tol_);
}

PolyHandle::PolyHandle(int degree, Evaluator evaluator)
    : degree_(degree), evaluator_(std::move(evaluator)) {}

// --- constants ----------------------------------------------------------------

double recurrence_a(double a, double b, int n) {
  if (n == 0) return 2.0 / (a + b + 2.0);
  const double s = 2.0 * n + a + b;
  return 2.0 * (n + 1.0) * (n + a + b + 1.0) / ((s + 1.0) * (s + 2.0));
}

double recurrence_b(double a, double b, int n) {
  if (n == 0) return (a - b) / (a + b + 2.0);
  const double s = 2.0 * n + a + b;
  return (a * a - b * b) / (s * (s + 2.0));
}

double recurrence_c(double a, double b, int n) {
  if (n == 0) return 0.0;
  const double s = 2.0 * n + a + b;
  return 2.0 * (n + a) * (n + b) / (s * (s + 1.0));
}

double difform_t_coefficient(double a, double b, int n) {
  if (n == 0) return 0.0;
  return n * (a - b) / (a + b + 2.0 * n);
}

double d_eigenvalue(double a, double b, int n) { return -n * (n + a + b + 1.0); }

double matrix_norm_h(const ModelParams& params, int n) {
  return scalar_jacobi_norm(params.jacobi(), n);
}

double leading_coefficient(const ModelParams& params, int n) {
  return std::exp(log_leading_coefficient(params.jacobi(), n));
}

double orthonormal_recurrence_a(double a, double b, int n) {
  const JacobiParams jp(a, b);
  return recurrence_a(a, b, n) *
         std::sqrt(scalar_jacobi_norm(jp, n + 1) / scalar_jacobi_norm(jp, n));
}

StructConstants struct_constants(const ModelParams& params, int n) {
  if (n < 0) throw ParameterError("struct_constants: n must be non-negative");
  const double a = params.alpha();
  const double b = params.beta();
  StructConstants sc;
  sc.h_n = matrix_norm_h(params, n);
  sc.kappa_n = leading_coefficient(params, n);
  sc.A_n = recurrence_a(a, b, n) * Matrix2::Identity();
  sc.B_n = recurrence_b(a, b, n) * t_matrix();
  sc.C_n = recurrence_c(a, b, n) * Matrix2::Identity();
  const double m = n + 1.0;
  sc.gamma_n = 2.0 * (m + a) * (m + b) / (a + b + 2.0 * m);
  sc.gamma_tilde_n = sc.gamma_n * std::sqrt(sc.h_n / matrix_norm_h(params, n + 1));
  sc.Lambda_n = d_eigenvalue(a, b, n);
  return sc;
}

// --- weight -------------------------------------------------------------------

namespace {

void require_open_interval(double x, const char* who) {
  if (!(std::abs(x) < 1.0)) {
    throw DomainError(std::string(who) + ": x must lie in (-1, 1) (got " + std::to_string(x) +
                      ")");
  }
}

double scale_of(std::initializer_list<double> norms) {
  return 1.0 + std::max(norms);
}

}  // namespace

Matrix2 combine_sectors(double u, double v) {
  Matrix2 m;
  m << 0.5 * (u + v), 0.5 * (v - u), 0.5 * (v - u), 0.5 * (u + v);
  return m;
}

Matrix2 weight_W(const ModelParams& params, double x) {
  require_open_interval(x, "weight_W");
  return combine_sectors(jacobi_weight(params.jacobi(), x),
                         jacobi_weight(params.jacobi_swapped(), x));
}

Matrix2 weight_W_derivative(const ModelParams& params, double x) {
  require_open_interval(x, "weight_W_derivative");
  const double a = params.alpha();
  const double b = params.beta();
  const double wab = jacobi_weight(params.jacobi(), x);
  const double wba = jacobi_weight(params.jacobi_swapped(), x);
  const double dab = wab * (-a / (1.0 - x) + b / (1.0 + x));
  const double dba = wba * (-b / (1.0 - x) + a / (1.0 + x));
  return combine_sectors(dab, dba);
}

Matrix2 weight_p(const ModelParams& params, double x) {
  if (!(std::abs(x) <= 1.0)) {
    throw DomainError("weight_p: x must lie in [-1, 1] (got " + std::to_string(x) + ")");
  }
  const double a = params.alpha();
  const double b = params.beta();
  const double pab = std::pow(1.0 - x, a + 1.0) * std::pow(1.0 + x, b + 1.0);
  const double pba = std::pow(1.0 - x, b + 1.0) * std::pow(1.0 + x, a + 1.0);
  return combine_sectors(pab, pba);
}

// --- polynomials --------------------------------------------------------------

PolyHandle P_n(const ModelParams& params, int n) {
  if (n < 0) throw ParameterError("P_n: degree must be non-negative");
  const JacobiParams ab = params.jacobi();
  const JacobiParams ba = params.jacobi_swapped();
  return PolyHandle(n, [ab, ba, n](double x, int order) -> Matrix2 {
    if (order == 0) return combine_sectors(jacobi_eval(ab, n, x), jacobi_eval(ba, n, x));
    return combine_sectors(jacobi_deriv(ab, n, x, order), jacobi_deriv(ba, n, x, order));
  });
}

PolyHandle Q_n(const ModelParams& params, int n) {
  if (n < 0) throw ParameterError("Q_n: degree must be non-negative");
  const double inv_sqrt_h = 1.0 / std::sqrt(matrix_norm_h(params, n));
  PolyHandle p = P_n(params, n);
  return PolyHandle(n, [p = std::move(p), inv_sqrt_h](double x, int order) -> Matrix2 {
    switch (order) {
      case 0: return inv_sqrt_h * p.eval(x);
      case 1: return inv_sqrt_h * p.deriv1(x);
      default: return inv_sqrt_h * p.deriv2(x);
    }
  });
}

QTable q_table(const ModelParams& params, int nmax, double x) {
  const JacobiTable u = jacobi_table(params.jacobi(), nmax, x);
  const JacobiTable v = jacobi_table(params.jacobi_swapped(), nmax, x);
  QTable t;
  const auto len = static_cast<std::size_t>(nmax) + 1;
  const std::vector<double> h = scalar_jacobi_norms(params.jacobi(), nmax);
  t.value.reserve(len);
  t.deriv1.reserve(len);
  t.deriv2.reserve(len);
  for (std::size_t k = 0; k < len; ++k) {
    const double s = 1.0 / std::sqrt(h[k]);
    t.value.push_back(s * combine_sectors(u.value[k], v.value[k]));
    t.deriv1.push_back(s * combine_sectors(u.deriv1[k], v.deriv1[k]));
    t.deriv2.push_back(s * combine_sectors(u.deriv2[k], v.deriv2[k]));
  }
  return t;
}

// --- D and identities -----------------------------------------------------------

Matrix2 apply_D(const ModelParams& params, const PolyHandle& f, double x) {
  require_open_interval(x, "apply_D");
  const double a = params.alpha();
  const double b = params.beta();
  const Matrix2 first =
      -x * (a + b + 2.0) * Matrix2::Identity() + (a - b) * t_matrix();
  return f.deriv2(x) * (1.0 - x * x) + f.deriv1(x) * first;
}

double recurrence_residual(const ModelParams& params, int n, double x) {
  const StructConstants sc = struct_constants(params, n);
  const Matrix2 lhs = x * P_n(params, n).eval(x);
  const Matrix2 t1 = sc.A_n * P_n(params, n + 1).eval(x);
  const Matrix2 t2 = sc.B_n * P_n(params, n).eval(x);
  const Matrix2 t3 = n > 0 ? Matrix2(sc.C_n * P_n(params, n - 1).eval(x)) : Matrix2::Zero();
  return (lhs - t1 - t2 - t3).norm() /
         scale_of({lhs.norm(), t1.norm(), t2.norm(), t3.norm()});
}

namespace {

// (1-x^2) F_n' + n x F_n + c_n T F_n - g F_{n-1}, with F = P (g = gamma) or Q (g = gamma~).
double difform_residual_impl(const ModelParams& params, int n, double x, bool orthonormal) {
  const auto family = [&](int k) { return orthonormal ? Q_n(params, k) : P_n(params, k); };
  const PolyHandle f = family(n);
  const Matrix2 lhs = (1.0 - x * x) * f.deriv1(x);
  const Matrix2 t1 = -n * x * f.eval(x);
  const Matrix2 t2 =
      -difform_t_coefficient(params.alpha(), params.beta(), n) * t_matrix() * f.eval(x);
  Matrix2 t3 = Matrix2::Zero();
  if (n > 0) {
    const StructConstants prev = struct_constants(params, n - 1);
    t3 = (orthonormal ? prev.gamma_tilde_n : prev.gamma_n) * family(n - 1).eval(x);
  }
  return (lhs - t1 - t2 - t3).norm() /
         scale_of({lhs.norm(), t1.norm(), t2.norm(), t3.norm()});
}

}  // namespace

double difform_residual(const ModelParams& params, int n, double x) {
  return difform_residual_impl(params, n, x, false);
}

double orthonormal_difform_residual(const ModelParams& params, int n, double x) {
  return difform_residual_impl(params, n, x, true);
}

double d_eigen_residual(const ModelParams& params, int n, double x) {
  const PolyHandle p = P_n(params, n);
  const Matrix2 lhs = apply_D(params, p, x);
  const Matrix2 rhs = d_eigenvalue(params.alpha(), params.beta(), n) * p.eval(x);
  return (lhs - rhs).norm() / scale_of({lhs.norm(), rhs.norm()});
}

double secord_residual(const ModelParams& params, int n, double x) {
  require_open_interval(x, "secord_residual");
  const PolyHandle p = P_n(params, n);
  const Matrix2 w = weight_W(params, x);
  const Matrix2 dw = weight_W_derivative(params, x);
  const Matrix2 inner_derivative =
      p.deriv2(x) * (1.0 - x * x) * w + p.deriv1(x) * (-2.0 * x * w + (1.0 - x * x) * dw);
  const Matrix2 factored = inner_derivative * w.inverse();
  const Matrix2 direct = apply_D(params, p, x);
  return (factored - direct).norm() / scale_of({factored.norm(), direct.norm()});
}

double proof_constant_residual(const ModelParams& params, int n) {
  if (n < 1) throw ParameterError("proof_constant_residual: n must be >= 1");
  const StructConstants prev = struct_constants(params, n - 1);
  const double kappa_ratio = std::exp(log_leading_coefficient(params.jacobi(), n) -
                                      log_leading_coefficient(params.jacobi(), n - 1));
  const double value = prev.gamma_tilde_n * kappa_ratio *
                       std::sqrt(matrix_norm_h(params, n - 1) / matrix_norm_h(params, n));
  const double expected = params.alpha() + params.beta() + 2.0 * n + 1.0;
  return std::abs(value - expected);
}

double cd_residual(const ModelParams& params, int n, double x, double y) {
  if (n < 1) throw ParameterError("cd_residual: n must be >= 1");
  if (x == y) throw ParameterError("cd_residual: x and y must differ");
  const double kappa_ratio = std::exp(log_leading_coefficient(params.jacobi(), n - 1) -
                                      log_leading_coefficient(params.jacobi(), n));
  const PolyHandle pn = P_n(params, n);
  const PolyHandle pm = P_n(params, n - 1);
  const Matrix2 lhs = kappa_ratio / matrix_norm_h(params, n - 1) *
                      (pm.eval(y).transpose() * pn.eval(x) - pn.eval(y).transpose() * pm.eval(x));
  Matrix2 sum = Matrix2::Zero();
  for (int k = 0; k < n; ++k) {
    const PolyHandle pk = P_n(params, k);
    sum += pk.eval(y).transpose() * pk.eval(x) / matrix_norm_h(params, k);
  }
  const Matrix2 rhs = (x - y) * sum;
  return (lhs - rhs).norm() / scale_of({lhs.norm(), rhs.norm()});
}

double first_order_ode_residual(const ModelParams& params, int n, std::span<const double> xs,
                                double corner_sign) {
  const double a = params.alpha();
  if (std::abs(params.beta() - (a - 1.0)) > 1e-14 || !(a > 0.0)) {
    throw ParameterError("first-order equation requires beta = alpha - 1 with alpha > 0");
  }
  const PolyHandle p = P_n(params, n);
  Matrix2 zeroth;
  zeroth << -2.0 * a, 0.0, 0.0, 0.0;
  Matrix2 left;
  left << -2.0 * a - n, 0.0, 0.0, static_cast<double>(n);
  double worst = 0.0;
  for (double x : xs) {
    Matrix2 first;
    first << -x, 1.0, -1.0, corner_sign * x;
    const Matrix2 t1 = p.deriv1(x) * first;
    const Matrix2 t2 = p.eval(x) * zeroth;
    const Matrix2 rhs = left * p.eval(x);
    worst = std::max(worst,
                     (t1 + t2 - rhs).norm() / scale_of({t1.norm(), t2.norm(), rhs.norm()}));
  }
  return worst;
}

double check_first_order_ode(const ModelParams& params, int n, std::span<const double> xs) {
  return first_order_ode_residual(params, n, xs, 1.0);
}

std::vector<double> chebyshev_sample_points(int count) {
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    // ascending order
    xs[k] = -0.99 * std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * count));
  }
  return xs;
}

}  // namespace mvop
