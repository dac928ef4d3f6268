#pragma once

#include "mvop/block_matrix.hpp"
#include "mvop/matrix_jacobi.hpp"

#include <Eigen/Core>

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace mvop {

/// Restrictions of a T-commuting block matrix to the +1 and -1 eigenspaces of T.
/// With U = [[1, 1], [1, -1]] / sqrt(2), (Id (x) U) B (Id (x) U) has
/// plus(m, n) at position (2m, 2n) and minus(m, n) at (2m+1, 2n+1).
struct SectorPair {
  Eigen::MatrixXd plus;
  Eigen::MatrixXd minus;
};

/// Throws StructureError if some block fails to commute with T to
/// 1e-11 (1 + max |entry|).
SectorPair sector_decompose(const BlockMatrix& b);
BlockMatrix sector_compose(const SectorPair& s);

/// Row vector (1, sector) / sqrt(2): the left T-eigenvector of the sector.
Eigen::RowVector2d sector_direction(int sector);

/// Joint eigenvector of L~ and M.
struct ProlatePair {
  double chi = 0.0;     ///< eigenvalue of L~
  double lambda = 0.0;  ///< Rayleigh quotient against M (not clamped)
  Eigen::RowVectorXd coeffs;  ///< 2(N+1) entries; entries 2n, 2n+1 multiply Q_n
  int sector = 1;             ///< +1 or -1
  double residual = 0.0;      ///< ||v M - lambda v||
  bool flagged = false;       ///< obtained by joint diagonalization on a chi-cluster
};

/// Eigenpairs of M obtained by diagonalizing the sectors of L~ and matching each
/// eigenvector to M through its Rayleigh quotient. Clusters of chi closer than
/// 1e-9 ||L~_sector|| and pairs whose residual exceeds 1e-8 (1 + ||M||_F) are
/// re-diagonalized jointly with M. Sorted by descending lambda.
std::vector<ProlatePair> prolate_eigenpairs(const ModelParams& params);
std::vector<ProlatePair> prolate_eigenpairs(const BlockMatrix& m, const BlockMatrix& ltilde);

/// Residual bound applied to each pair: 1e-8 (1 + ||M||_F).
double eigen_residual_bound(const BlockMatrix& m);

/// phi(x) = sum_n coeffs_n Q_n(x) at each grid point.
std::vector<Eigen::RowVector2d> eigenfunction_sample(const ModelParams& params,
                                                     const ProlatePair& pair,
                                                     std::span<const double> grid);

/// || int_{-1}^{Omega} phi(y) W(y) k(x, y)^T dy - lambda phi(x) || by quadrature in y.
double integral_equation_residual(const ModelParams& params, const ProlatePair& pair, double x);

struct SectorSpectrum {
  int sector = 1;
  std::vector<double> lambda;  ///< eigenvalues of the M sector, descending
  std::vector<double> chi;     ///< eigenvalues of the L~ sector, ascending
  double gap_M = 0.0;
  double gap_Ltilde = 0.0;
  std::optional<double> ratio;  ///< gap_Ltilde / gap_M; empty when gap_M == 0
  /// gap_M below 8 eps max|lambda|: the M spectrum does not resolve in double precision.
  bool m_gap_unresolved = false;
  /// Diagnostic only: chi is monotone (either direction) when the sector's
  /// eigenpairs are ordered by descending lambda.
  bool chi_monotone_in_lambda = false;
};

struct SpectrumReport {
  std::array<SectorSpectrum, 2> sectors;  ///< plus first
};

SpectrumReport spectrum_report(const ModelParams& params);

/// Smallest difference between consecutive entries of a sorted list; 0 for < 2 entries.
double min_consecutive_gap(std::span<const double> sorted);

}  // namespace mvop
