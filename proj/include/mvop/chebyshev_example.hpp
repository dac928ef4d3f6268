#pragma once

#include "mvop/matrix_jacobi.hpp"
#include "mvop/timeband.hpp"

// Closed forms of the alpha = 1/2, beta = -1/2 instance, used as golden
// references for the general machinery.

namespace mvop::chebyshev {

/// (1 / sqrt(1 - x^2)) [[1, x], [x, 1]].
Matrix2 weight(double x);

/// Monic family 2^{-n} [[U_n, -U_{n-1}], [-U_{n-1}, U_n]].
PolyHandle monic_P(int n);

/// sqrt(pi) / 2^n.
double monic_norm(int n);

/// sum_n 4^n P~_n(x)^T P~_n(y) / pi; equals kernel_k for this instance.
Matrix2 kernel(int N, double x, double y);

/// E2 = (1-x^2)(x-Omega), E1 = (-3x^2 + 2 Omega x + 1) Id + (x - Omega) T, E0 = N(N+2) x.
DtildeCoeffs dtilde_coeffs(int N, double omega, double x);

/// Model parameters with alpha = 1/2, beta = -1/2.
ModelParams params(int N, double omega);

}  // namespace mvop::chebyshev
