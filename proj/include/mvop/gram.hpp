#pragma once

#include "mvop/block_matrix.hpp"
#include "mvop/matrix_jacobi.hpp"

namespace mvop {

/// <f, g>_Omega = int_{-1}^{Omega} f(x) W(x) g(x)^T dx.
///
/// W splits as 0.5 (Id - T) w_{a,b} + 0.5 (Id + T) w_{b,a}; each scalar piece is
/// integrated by a Gauss-Jacobi rule of params.quad_order() points. For Omega < 1
/// the rule carries only the (1+x) singularity and is mapped to (-1, Omega); the
/// smooth (1-x) power is folded into the integrand. At Omega = 1 the rules carry
/// both exponents and polynomial integrands are integrated exactly.
Matrix2 inner_product_Omega(const ModelParams& params, const PolyHandle& f, const PolyHandle& g);

/// Nodes, weights and sector projector for evaluating <., .>_Omega.
struct WeightedRule {
  QuadratureRule rule;  ///< combined weight, including any folded smooth factor
  Matrix2 projector;    ///< 0.5 (Id -+ T)
};

/// The two rules used by inner_product_Omega for params (w_{a,b} piece first).
std::array<WeightedRule, 2> omega_rules(const ModelParams& params);

/// Block Gram matrix M_{m,n} = <Q_m, Q_n>_Omega, 0 <= m, n <= N.
BlockMatrix gram_M(const ModelParams& params);

struct ConvergenceReport {
  int quad_order = 0;
  double max_difference = 0.0;  ///< between quad_order and 2 quad_order
  double tol = 0.0;
  bool converged = false;
};

/// Rebuilds M with twice the quadrature order and compares entrywise.
ConvergenceReport convergence_check(const ModelParams& params);

}  // namespace mvop
