#pragma once

#include <span>
#include <utility>
#include <vector>

namespace mvop {

/// Exponents of the scalar Jacobi weight (1-x)^alpha (1+x)^beta.
class JacobiParams {
 public:
  /// Throws ParameterError unless alpha > -1 and beta > -1.
  JacobiParams(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  /// The same family with the two exponents exchanged.
  JacobiParams swapped() const noexcept { return JacobiParams(beta_, alpha_, Unchecked{}); }
  /// (alpha + k, beta + k); used by the derivative identity.
  JacobiParams shifted(int k) const noexcept {
    return JacobiParams(alpha_ + k, beta_ + k, Unchecked{});
  }

 private:
  struct Unchecked {};
  JacobiParams(double a, double b, Unchecked) noexcept : alpha_(a), beta_(b) {}

  double alpha_;
  double beta_;
};

/// w_{alpha,beta}(x) = (1-x)^alpha (1+x)^beta for x in [-1, 1].
double jacobi_weight(const JacobiParams& params, double x);

/// p_n^{(alpha,beta)}(x) in the classical normalization p_n(1) = (alpha+1)_n / n!.
double jacobi_eval(const JacobiParams& params, int n, double x);

/// First (order = 1) or second (order = 2) derivative of p_n^{(alpha,beta)} at x.
double jacobi_deriv(const JacobiParams& params, int n, double x, int order);

/// Values and derivatives of p_0 .. p_nmax at a single point.
struct JacobiTable {
  std::vector<double> value;
  std::vector<double> deriv1;
  std::vector<double> deriv2;
};

/// Fills p_k(x), p_k'(x), p_k''(x) for k = 0..nmax with three recurrence sweeps.
JacobiTable jacobi_table(const JacobiParams& params, int nmax, double x);

/// Writes p_0(x) .. p_{out.size()-1}(x) into out.
void jacobi_eval_all(const JacobiParams& params, double x, std::span<double> out);

/// h_n = int_{-1}^{1} p_n^2 w_{alpha,beta} dx, evaluated in the log domain.
double scalar_jacobi_norm(const JacobiParams& params, int n);

/// h_0 .. h_nmax in one pass.
std::vector<double> scalar_jacobi_norms(const JacobiParams& params, int nmax);

/// log of the leading coefficient k_n of p_n^{(alpha,beta)}; k_0 = 1.
double log_leading_coefficient(const JacobiParams& params, int n);

/// Zeroth moment 2^{a+b+1} B(a+1, b+1) of the weight on (-1, 1).
double jacobi_zeroth_moment(double a, double b);

/// Weighted Gauss rule on (lo, hi). The weight is (hi - x)^a (x - lo)^b.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::pair<double, double> domain{-1.0, 1.0};
  std::pair<double, double> endpoint_exponents{0.0, 0.0};

  std::size_t size() const noexcept { return nodes.size(); }
};

/// m-point Gauss-Jacobi rule for (1-x)^a (1+x)^b on (-1, 1) by Golub-Welsch.
///
/// Rules are memoized behind a mutex; the returned rule is a copy and equals
/// the uncached computation bit for bit.
QuadratureRule gauss_jacobi_rule(double a, double b, int m);

/// Affine image of a rule on (-1, 1) onto (lo, hi), with the weights rescaled by
/// ((hi - lo) / 2)^{a + b + 1} so that the endpoint powers keep their meaning.
QuadratureRule map_rule(const QuadratureRule& rule, double lo, double hi);

/// Chebyshev polynomial of the second kind; U_{-1} = 0.
double chebyshev_U(int n, double x);

}  // namespace mvop
