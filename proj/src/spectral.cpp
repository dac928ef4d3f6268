#include "mvop/spectral.hpp"

#include "mvop/errors.hpp"
#include "mvop/gram.hpp"
#include "mvop/timeband.hpp"
#include "mvop/tridiagonal_eigen.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mvop {

SectorPair sector_decompose(const BlockMatrix& b) {
  const int n = b.order();
  const double tol = 1e-11 * (1.0 + (n > 0 ? b.flat().cwiseAbs().maxCoeff() : 0.0));
  SectorPair s{Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Matrix2 blk = b.block(i, j);
      if (t_commutator_norm(blk) > tol) {
        throw StructureError("sector_decompose: block (" + std::to_string(i) + ", " +
                             std::to_string(j) + ") does not commute with T");
      }
      s.plus(i, j) = 0.5 * (blk(0, 0) + blk(0, 1) + blk(1, 0) + blk(1, 1));
      s.minus(i, j) = 0.5 * (blk(0, 0) - blk(0, 1) - blk(1, 0) + blk(1, 1));
    }
  }
  return s;
}

BlockMatrix sector_compose(const SectorPair& s) {
  if (s.plus.rows() != s.minus.rows() || s.plus.rows() != s.plus.cols() ||
      s.minus.rows() != s.minus.cols()) {
    throw DimensionError("sector_compose: sectors must be square of equal order");
  }
  const int n = static_cast<int>(s.plus.rows());
  BlockMatrix b(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double sum = 0.5 * (s.plus(i, j) + s.minus(i, j));
      const double dif = 0.5 * (s.plus(i, j) - s.minus(i, j));
      Matrix2 blk;
      blk << sum, dif, dif, sum;
      b.set_block(i, j, blk);
    }
  }
  return b;
}

Eigen::RowVector2d sector_direction(int sector) {
  if (sector != 1 && sector != -1) throw ParameterError("sector must be +1 or -1");
  return Eigen::RowVector2d(1.0, static_cast<double>(sector)) / std::numbers::sqrt2;
}

double min_consecutive_gap(std::span<const double> sorted) {
  if (sorted.size() < 2) return 0.0;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < sorted.size(); ++k) gap = std::min(gap, std::abs(sorted[k] - sorted[k - 1]));
  return gap;
}

double eigen_residual_bound(const BlockMatrix& m) { return 1e-8 * (1.0 + m.flat().norm()); }

namespace {

struct SectorEigen {
  Eigen::VectorXd chi;
  Eigen::MatrixXd vectors;
  std::vector<bool> flagged;
};

double residual_of(const Eigen::MatrixXd& ms, const Eigen::VectorXd& v) {
  const double lambda = v.dot(ms * v);
  return (ms * v - lambda * v).norm();
}

// Replaces columns [lo, hi) of vecs by eigenvectors of M restricted to their span.
void joint_diagonalize(const Eigen::MatrixXd& ls, const Eigen::MatrixXd& ms, Eigen::Index lo,
                       Eigen::Index hi, SectorEigen& se) {
  const Eigen::MatrixXd basis = se.vectors.middleCols(lo, hi - lo);
  const Eigen::MatrixXd restricted = basis.transpose() * ms * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (restricted + restricted.transpose()));
  if (es.info() != Eigen::Success) {
    throw NumericalError("prolate_eigenpairs: joint diagonalization failed on a chi-cluster");
  }
  const Eigen::MatrixXd rotated = basis * es.eigenvectors();
  for (Eigen::Index k = 0; k < hi - lo; ++k) {
    Eigen::VectorXd v = rotated.col(k).normalized();
    se.vectors.col(lo + k) = v;
    se.chi(lo + k) = v.dot(ls * v);
    se.flagged[static_cast<std::size_t>(lo + k)] = true;
  }
}

SectorEigen solve_sector(const Eigen::MatrixXd& ls, const Eigen::MatrixXd& ms, double bound) {
  TridiagEigen te = eig_sym_tridiag(ls);
  const Eigen::Index n = te.values.size();
  SectorEigen se{te.values, te.vectors, std::vector<bool>(static_cast<std::size_t>(n), false)};
  if (n == 0) return se;

  const double lnorm = std::max(std::abs(te.values(0)), std::abs(te.values(n - 1)));
  const double cluster_tol = 1e-9 * lnorm;

  // clusters of numerically coincident chi
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    if (k == n || te.values(k) - te.values(k - 1) > cluster_tol) {
      if (k - start > 1) joint_diagonalize(ls, ms, start, k, se);
      start = k;
    }
  }

  // pairs that still miss the bound: grow a window around them until they pass
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index lo = k;
    Eigen::Index hi = k + 1;
    while (residual_of(ms, se.vectors.col(k)) > bound && (lo > 0 || hi < n)) {
      if (lo > 0) --lo;
      if (hi < n) ++hi;
      joint_diagonalize(ls, ms, lo, hi, se);
    }
  }
  return se;
}

}  // namespace

std::vector<ProlatePair> prolate_eigenpairs(const BlockMatrix& m, const BlockMatrix& ltilde) {
  if (m.order() != ltilde.order()) throw DimensionError("prolate_eigenpairs: order mismatch");
  const SectorPair ms = sector_decompose(m);
  const SectorPair ls = sector_decompose(ltilde);
  const double bound = eigen_residual_bound(m);
  const int n = m.order();

  std::vector<ProlatePair> pairs;
  pairs.reserve(static_cast<std::size_t>(2 * n));
  for (int sector : {1, -1}) {
    const Eigen::MatrixXd& msec = sector == 1 ? ms.plus : ms.minus;
    const Eigen::MatrixXd& lsec = sector == 1 ? ls.plus : ls.minus;
    const SectorEigen se = solve_sector(lsec, msec, bound);
    const Eigen::RowVector2d dir = sector_direction(sector);
    for (Eigen::Index k = 0; k < se.chi.size(); ++k) {
      const Eigen::VectorXd v = se.vectors.col(k);
      ProlatePair p;
      p.sector = sector;
      p.chi = se.chi(k);
      p.lambda = v.dot(msec * v);
      p.residual = (msec * v - p.lambda * v).norm();
      p.flagged = se.flagged[static_cast<std::size_t>(k)];
      p.coeffs.resize(2 * n);
      for (int j = 0; j < n; ++j) p.coeffs.segment<2>(2 * j) = v(j) * dir;
      pairs.push_back(std::move(p));
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const ProlatePair& a, const ProlatePair& b) {
    return a.lambda > b.lambda;
  });
  return pairs;
}

std::vector<ProlatePair> prolate_eigenpairs(const ModelParams& params) {
  return prolate_eigenpairs(gram_M(params), build_Ltilde(params));
}

std::vector<Eigen::RowVector2d> eigenfunction_sample(const ModelParams& params,
                                                     const ProlatePair& pair,
                                                     std::span<const double> grid) {
  if (pair.coeffs.size() != 2 * (params.N() + 1)) {
    throw DimensionError("eigenfunction_sample: coefficient length does not match N");
  }
  std::vector<Eigen::RowVector2d> out;
  out.reserve(grid.size());
  for (double x : grid) {
    const QTable q = q_table(params, params.N(), x);
    Eigen::RowVector2d phi = Eigen::RowVector2d::Zero();
    for (int n = 0; n <= params.N(); ++n) phi += pair.coeffs.segment<2>(2 * n) * q.value[n];
    out.push_back(phi);
  }
  return out;
}

double integral_equation_residual(const ModelParams& params, const ProlatePair& pair, double x) {
  const QTable qx = q_table(params, params.N(), x);
  Eigen::RowVector2d phi_x = Eigen::RowVector2d::Zero();
  for (int n = 0; n <= params.N(); ++n) phi_x += pair.coeffs.segment<2>(2 * n) * qx.value[n];

  Eigen::RowVector2d integral = Eigen::RowVector2d::Zero();
  for (const WeightedRule& wr : omega_rules(params)) {
    for (std::size_t k = 0; k < wr.rule.size(); ++k) {
      const double y = wr.rule.nodes[k];
      const QTable qy = q_table(params, params.N(), y);
      Eigen::RowVector2d phi_y = Eigen::RowVector2d::Zero();
      Matrix2 kernel_t = Matrix2::Zero();  // k(x, y)^T
      for (int n = 0; n <= params.N(); ++n) {
        phi_y += pair.coeffs.segment<2>(2 * n) * qy.value[n];
        kernel_t += qy.value[n].transpose() * qx.value[n];
      }
      integral += wr.rule.weights[k] * (phi_y * wr.projector * kernel_t);
    }
  }
  return (integral - pair.lambda * phi_x).norm();
}

SpectrumReport spectrum_report(const ModelParams& params) {
  const SectorPair ms = sector_decompose(gram_M(params));
  const SectorPair ls = sector_decompose(build_Ltilde(params));
  const std::vector<ProlatePair> pairs = prolate_eigenpairs(params);
  SpectrumReport rep;
  for (int idx = 0; idx < 2; ++idx) {
    const int sector = idx == 0 ? 1 : -1;
    const Eigen::MatrixXd& msec = idx == 0 ? ms.plus : ms.minus;
    const Eigen::MatrixXd& lsec = idx == 0 ? ls.plus : ls.minus;
    SectorSpectrum& s = rep.sectors[idx];
    s.sector = sector;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(msec, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("spectrum_report: eigensolver failed");
    s.lambda.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    const TridiagEigen te = eig_sym_tridiag(lsec);
    s.chi.assign(te.values.data(), te.values.data() + te.values.size());

    s.gap_M = min_consecutive_gap(s.lambda);
    s.gap_Ltilde = min_consecutive_gap(s.chi);
    std::reverse(s.lambda.begin(), s.lambda.end());
    if (s.gap_M > 0.0) s.ratio = s.gap_Ltilde / s.gap_M;
    double lmax = 0.0;
    for (double l : s.lambda) lmax = std::max(lmax, std::abs(l));
    s.m_gap_unresolved =
        s.lambda.size() >= 2 && s.gap_M <= 8.0 * std::numeric_limits<double>::epsilon() * lmax;

    std::vector<double> chi_by_lambda;
    for (const ProlatePair& p : pairs) {
      if (p.sector == sector) chi_by_lambda.push_back(p.chi);
    }
    s.chi_monotone_in_lambda =
        std::is_sorted(chi_by_lambda.begin(), chi_by_lambda.end()) ||
        std::is_sorted(chi_by_lambda.rbegin(), chi_by_lambda.rend());
  }
  return rep;
}

}  // namespace mvop
