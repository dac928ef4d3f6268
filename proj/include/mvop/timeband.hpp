#pragma once

#include "mvop/block_matrix.hpp"
#include "mvop/matrix_jacobi.hpp"

#include <span>
#include <utility>
#include <vector>

namespace mvop {

/// Coefficients of the commuting operator in the expanded form
///   f D~ = f'' E2 + f' E1 + f E0.
struct DtildeCoeffs {
  Matrix2 E2;
  Matrix2 E1;
  Matrix2 E0;
};

/// E2 = (x - Omega)(1 - x^2) Id,
/// E1 = (-(3+a+b) x^2 + Omega (2+a+b) x + 1) Id + (a-b)(x - Omega) T,
/// E0 = x N (N+a+b+2) Id.
DtildeCoeffs dtilde_coeffs(const ModelParams& params, double x);

/// mu_n = N(N+a+b+2) - n(n+a+b+2); the factor multiplying x Q_n in Q_n D~.
double dtilde_mu(const ModelParams& params, int n);

/// The scalar A = N(N+a+b+2) of the zeroth-order term.
double dtilde_shift(const ModelParams& params);

/// k(x, y) = sum_{w=0}^{N} Q_w(x)^T Q_w(y).
Matrix2 kernel_k(const ModelParams& params, double x, double y);

/// Coefficients of f S for f = sum_m A_m Q_m: the product A M.
/// `coeffs` has 2(N+1) columns (blocks side by side) and 1 or 2 rows.
Eigen::MatrixXd apply_S_coeffs(const BlockMatrix& m, const Eigen::MatrixXd& coeffs);

/// (f D~)(x) from the expanded coefficients; DomainError unless |x| < 1.
Matrix2 apply_Dtilde(const ModelParams& params, const PolyHandle& f, double x);

/// (f D~)(x) through (x - Omega) f D + (1 - x^2) f' + x A f.
Matrix2 apply_Dtilde_decomposed(const ModelParams& params, const PolyHandle& f, double x);

/// Block tridiagonal L~ with Q_m D~ = sum_k L~_{m,k} Q_k:
///   L~_{n,n+1} = mu_n a~_n Id,
///   L~_{n,n}   = (mu_n b_n - c_n) T - Lambda_n Omega Id,
///   L~_{n,n-1} = (mu_n c~_n + gamma~_{n-1}) Id,
/// with a~, c~ the orthonormal recurrence coefficients and c_n the difform T
/// coefficient. mu_N = 0 removes the coupling to Q_{N+1}.
BlockMatrix build_Ltilde(const ModelParams& params);

/// L~ times block-diagonal T.
BlockMatrix build_Ltilde_T_variant(const ModelParams& params);

/// ||M L - L M||_F / (1 + ||M||_F ||L||_F).
double commutator_residual(const BlockMatrix& m, const BlockMatrix& l);

/// ||L M - M L^T||_F / (1 + ||L||_F ||M||_F).
double symmetry_form_residual(const BlockMatrix& l, const BlockMatrix& m);

/// ||L - L^T||_F / (1 + ||L||_F).
double transpose_residual(const BlockMatrix& l);

/// Max over (x, y) samples of
///   || sum_w Q_w(y)^T (Q_w D~)(x) - (sum_w Q_w(x)^T (Q_w D~)(y))^T ||_F,
/// i.e. (k(x,y)^T) D~_x against (k(x,y) D~_y)^T. The x-side operator uses
/// Omega + omega_shift_x; a non-zero shift exists to show the check can fail.
double kernel_intertwining_residual(const ModelParams& params,
                                    std::span<const std::pair<double, double>> samples,
                                    double omega_shift_x = 0.0);

/// n fixed-seed sample pairs inside (-0.95, 0.95)^2.
std::vector<std::pair<double, double>> interior_sample_pairs(int count, unsigned long long seed);

}  // namespace mvop
