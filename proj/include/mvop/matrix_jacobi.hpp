#pragma once

#include "mvop/matrix2.hpp"
#include "mvop/scalar_orthopoly.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace mvop {

/// One instance of the time-and-band limiting problem.
class ModelParams {
 public:
  /// Validates alpha, beta > -1, Omega in (-1, 1], N >= 0, tol > 0 and
  /// quad_order >= 2N + 16. The default quad_order is max(64, 2N + 16).
  /// Throws ParameterError naming the violated constraint.
  static ModelParams make(double alpha, double beta, int N, double omega,
                          std::optional<int> quad_order = std::nullopt, double tol = 1e-10);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  int N() const noexcept { return n_; }
  double omega() const noexcept { return omega_; }
  int quad_order() const noexcept { return quad_order_; }
  double tol() const noexcept { return tol_; }

  /// Scalar family of the -1 sector of T: (alpha, beta).
  JacobiParams jacobi() const noexcept { return JacobiParams(alpha_, beta_); }
  /// Scalar family of the +1 sector of T: (beta, alpha).
  JacobiParams jacobi_swapped() const noexcept { return JacobiParams(beta_, alpha_); }

  ModelParams with_omega(double omega) const;
  ModelParams with_N(int N) const;
  ModelParams with_quad_order(int quad_order) const;

  static int default_quad_order(int N);

 private:
  ModelParams() = default;

  double alpha_ = 0.0;
  double beta_ = 0.0;
  int n_ = 0;
  double omega_ = 1.0;
  int quad_order_ = 64;
  double tol_ = 1e-10;
};

/// A matrix polynomial seen through its value and first two derivatives.
/// Immutable; safe to evaluate from several threads.
class PolyHandle {
 public:
  /// evaluator(x, order) returns the order-th derivative (0, 1 or 2) at x.
  using Evaluator = std::function<Matrix2(double x, int order)>;

  PolyHandle(int degree, Evaluator evaluator);

  int degree() const noexcept { return degree_; }
  Matrix2 eval(double x) const { return evaluator_(x, 0); }
  Matrix2 deriv1(double x) const { return evaluator_(x, 1); }
  Matrix2 deriv2(double x) const { return evaluator_(x, 2); }

 private:
  int degree_;
  Evaluator evaluator_;
};

/// Structural constants of P_n.
///
/// The recurrence is x P_n = A_n P_{n+1} + B_n P_n + C_n P_{n-1}; at n = 0 the
/// limits A_0 = 2/(a+b+2) Id, B_0 = (a-b)/(a+b+2) T, C_0 = 0 are used.
/// gamma_n is the difform coefficient of P_n in (1-x^2) P_{n+1}', i.e.
/// 2(n+1+a)(n+1+b)/(a+b+2n+2); gamma_tilde_n = gamma_n (h_n / h_{n+1})^{1/2}
/// is its orthonormal counterpart.
struct StructConstants {
  double h_n = 0.0;
  double kappa_n = 0.0;
  Matrix2 A_n = Matrix2::Zero();
  Matrix2 B_n = Matrix2::Zero();
  Matrix2 C_n = Matrix2::Zero();
  double gamma_n = 0.0;
  double gamma_tilde_n = 0.0;
  double Lambda_n = 0.0;
};

StructConstants struct_constants(const ModelParams& params, int n);

/// Scalar pieces of the recurrence constants (A_n = a Id, B_n = b T, C_n = c Id).
double recurrence_a(double alpha, double beta, int n);
double recurrence_b(double alpha, double beta, int n);
double recurrence_c(double alpha, double beta, int n);

/// Orthonormal recurrence coefficient a~_n = A_n (h_{n+1}/h_n)^{1/2}; equals c~_{n+1}.
double orthonormal_recurrence_a(double alpha, double beta, int n);

/// n (alpha - beta) / (alpha + beta + 2n), the T coefficient in the
/// differentiation formula; 0 at n = 0.
double difform_t_coefficient(double alpha, double beta, int n);

/// Lambda_n = -n (n + alpha + beta + 1).
double d_eigenvalue(double alpha, double beta, int n);

/// Squared matrix norm h_n (the same for both sectors).
double matrix_norm_h(const ModelParams& params, int n);
/// Leading coefficient kappa_n of P_n.
double leading_coefficient(const ModelParams& params, int n);

// --- weight ---------------------------------------------------------------

/// W(x); throws DomainError unless |x| < 1.
Matrix2 weight_W(const ModelParams& params, double x);
/// W'(x) for |x| < 1.
Matrix2 weight_W_derivative(const ModelParams& params, double x);
/// p(x) = (1 - x^2) W(x), continuous on [-1, 1]; throws DomainError for |x| > 1.
Matrix2 weight_p(const ModelParams& params, double x);

// --- polynomials ------------------------------------------------------------

/// Assembles 0.5 [[u + v, v - u], [v - u, u + v]] from the (alpha, beta) value u
/// and the (beta, alpha) value v.
Matrix2 combine_sectors(double u, double v);

PolyHandle P_n(const ModelParams& params, int n);
PolyHandle Q_n(const ModelParams& params, int n);

/// Q_0..Q_nmax and their derivatives at one point.
struct QTable {
  std::vector<Matrix2> value;
  std::vector<Matrix2> deriv1;
  std::vector<Matrix2> deriv2;
};
QTable q_table(const ModelParams& params, int nmax, double x);

// --- differential operator D and identity residuals -------------------------

/// Right action of D: f''(x)(1 - x^2) + f'(x)(-x(a+b+2) Id + (a-b) T).
Matrix2 apply_D(const ModelParams& params, const PolyHandle& f, double x);

/// All residual functions below return ||LHS - RHS||_F / scale with
/// scale = 1 + max norm of the terms involved.

double recurrence_residual(const ModelParams& params, int n, double x);
double difform_residual(const ModelParams& params, int n, double x);
/// Same identity for Q_n with gamma_tilde.
double orthonormal_difform_residual(const ModelParams& params, int n, double x);
/// ||apply_D(P_n) - Lambda_n P_n||.
double d_eigen_residual(const ModelParams& params, int n, double x);
/// Compares the product-rule expansion of d/dx(P_n'(1-x^2)W) W^{-1} with apply_D.
double secord_residual(const ModelParams& params, int n, double x);
/// |gamma_tilde_{n-1} kappa_n h_{n-1}^{1/2} / (kappa_{n-1} h_n^{1/2}) - (a+b+2n+1)|, n >= 1.
double proof_constant_residual(const ModelParams& params, int n);

/// Christoffel-Darboux residual for n >= 1, x != y.
double cd_residual(const ModelParams& params, int n, double x, double y);

/// Max residual over xs of the first-order equation satisfied when beta = alpha - 1:
///   P_n'(x) [[-x, 1], [-1, x]] + P_n(x) diag(-2a, 0) = diag(-2a - n, n) P_n(x).
/// Throws ParameterError unless beta == alpha - 1 and alpha > 0.
double check_first_order_ode(const ModelParams& params, int n, std::span<const double> xs);

/// The same residual with the (2,2) entry of the first-order coefficient set to
/// corner_sign * x. Only corner_sign = +1 annihilates P_n for n >= 1; the other
/// sign is kept as a diagnostic.
double first_order_ode_residual(const ModelParams& params, int n, std::span<const double> xs,
                                double corner_sign);

/// Default identity-check sample set: count points distributed as Chebyshev
/// roots on (-0.99, 0.99).
std::vector<double> chebyshev_sample_points(int count = 33);

}  // namespace mvop
