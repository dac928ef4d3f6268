#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

namespace mvop {

/// Implicit QL iteration with Wilkinson-type shifts on a symmetric tridiagonal
/// matrix (EISPACK tql2 ordering).
///
/// On entry `diag` holds the diagonal and `offdiag[i]` the (i, i+1) entry,
/// i = 0..n-2. On exit `diag` holds the eigenvalues in ascending order.
/// `vectors` must have n columns; its rows are rotated alongside, so starting
/// from the first r rows of the identity yields the first r components of
/// every eigenvector (column j belongs to eigenvalue j). Pass a 0 x n matrix
/// to skip eigenvectors.
///
/// Throws NumericalError when an eigenvalue needs more than `max_iterations`
/// sweeps.
void tridiagonal_ql(std::span<double> diag, std::span<const double> offdiag,
                    Eigen::MatrixXd& vectors, int max_iterations = 60);

struct TridiagEigen {
  Eigen::VectorXd values;   ///< ascending
  Eigen::MatrixXd vectors;  ///< orthonormal columns
};

/// Full eigendecomposition of a symmetric tridiagonal matrix given as a dense
/// matrix. Throws StructureError if the input is not symmetric to 1e-11
/// (relative to its largest entry) or has entries outside the three bands.
TridiagEigen eig_sym_tridiag(const Eigen::MatrixXd& a);

/// Same, from the bands directly.
TridiagEigen eig_sym_tridiag(std::span<const double> diag, std::span<const double> offdiag);

}  // namespace mvop
