#include "mvop/gram.hpp"

#include "mvop/errors.hpp"

#include <cmath>
#include <vector>

namespace mvop {

BlockMatrix::BlockMatrix(int order)
    : flat_(Eigen::MatrixXd::Zero(2 * order, 2 * order)) {
  if (order < 0) throw DimensionError("BlockMatrix: negative order");
}

BlockMatrix::BlockMatrix(Eigen::MatrixXd flat) : flat_(std::move(flat)) {
  if (flat_.rows() != flat_.cols() || flat_.rows() % 2 != 0) {
    throw DimensionError("BlockMatrix: flattened view must be square with even size");
  }
}

BlockMatrix BlockMatrix::identity(int order) {
  return BlockMatrix(Eigen::MatrixXd(Eigen::MatrixXd::Identity(2 * order, 2 * order)));
}

BlockMatrix BlockMatrix::block_t(int order) {
  BlockMatrix out(order);
  for (int k = 0; k < order; ++k) out.set_block(k, k, t_matrix());
  return out;
}

BlockMatrix BlockMatrix::operator*(const BlockMatrix& rhs) const {
  if (order() != rhs.order()) throw DimensionError("BlockMatrix product: order mismatch");
  return BlockMatrix(Eigen::MatrixXd(flat_ * rhs.flat_));
}

std::array<WeightedRule, 2> omega_rules(const ModelParams& params) {
  const double omega = params.omega();
  if (!(omega > -1.0 && omega <= 1.0)) {
    throw ParameterError("Omega must lie in (-1, 1]");
  }
  const Matrix2 id = Matrix2::Identity();
  const Matrix2 t = t_matrix();
  // (hi-side exponent, lo-side exponent) of w_{a,b} and w_{b,a}
  const std::array<std::pair<double, double>, 2> exps{
      std::pair{params.alpha(), params.beta()}, std::pair{params.beta(), params.alpha()}};
  const std::array<Matrix2, 2> projectors{0.5 * (id - t), 0.5 * (id + t)};

  std::array<WeightedRule, 2> out;
  for (std::size_t s = 0; s < 2; ++s) {
    const auto [hi_exp, lo_exp] = exps[s];
    WeightedRule wr;
    wr.projector = projectors[s];
    if (omega == 1.0) {
      wr.rule = gauss_jacobi_rule(hi_exp, lo_exp, params.quad_order());
    } else {
      wr.rule = map_rule(gauss_jacobi_rule(0.0, lo_exp, params.quad_order()), -1.0, omega);
      for (std::size_t k = 0; k < wr.rule.size(); ++k) {
        wr.rule.weights[k] *= std::pow(1.0 - wr.rule.nodes[k], hi_exp);
      }
      wr.rule.endpoint_exponents = {0.0, lo_exp};
    }
    out[s] = std::move(wr);
  }
  return out;
}

Matrix2 inner_product_Omega(const ModelParams& params, const PolyHandle& f, const PolyHandle& g) {
  Matrix2 acc = Matrix2::Zero();
  for (const WeightedRule& wr : omega_rules(params)) {
    for (std::size_t k = 0; k < wr.rule.size(); ++k) {
      const double x = wr.rule.nodes[k];
      acc += wr.rule.weights[k] * (f.eval(x) * wr.projector * g.eval(x).transpose());
    }
  }
  return acc;
}

namespace {

// In the sector basis every Q_n is diagonal: the -1 sector of T carries the
// (a, b) family and the +1 sector the (b, a) family. The w_{a,b} piece only
// sees the -1 sector and the w_{b,a} piece only the +1 sector, so M is
// assembled from two scalar Gram matrices.
Eigen::MatrixXd scalar_gram(const ModelParams& params, const JacobiParams& family,
                            const QuadratureRule& rule) {
  const int n = params.N() + 1;
  Eigen::MatrixXd values(n, static_cast<Eigen::Index>(rule.size()));
  std::vector<double> buf(static_cast<std::size_t>(n));
  const std::vector<double> h = scalar_jacobi_norms(params.jacobi(), params.N());
  for (std::size_t k = 0; k < rule.size(); ++k) {
    jacobi_eval_all(family, rule.nodes[k], buf);
    const double sw = std::sqrt(rule.weights[k]);
    for (int j = 0; j < n; ++j) {
      values(j, static_cast<Eigen::Index>(k)) = buf[j] * sw / std::sqrt(h[j]);
    }
  }
  Eigen::MatrixXd g = values * values.transpose();
  return 0.5 * (g + g.transpose());
}

}  // namespace

BlockMatrix gram_M(const ModelParams& params) {
  const auto rules = omega_rules(params);
  const Eigen::MatrixXd minus = scalar_gram(params, params.jacobi(), rules[0].rule);
  const Eigen::MatrixXd plus = scalar_gram(params, params.jacobi_swapped(), rules[1].rule);
  const int n = params.N() + 1;
  BlockMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // U diag(plus, minus) U with U = [[1, 1], [1, -1]] / sqrt(2)
      const double s = 0.5 * (plus(i, j) + minus(i, j));
      const double d = 0.5 * (plus(i, j) - minus(i, j));
      Matrix2 b;
      b << s, d, d, s;
      m.set_block(i, j, b);
    }
  }
  return m;
}

ConvergenceReport convergence_check(const ModelParams& params) {
  ConvergenceReport rep;
  rep.quad_order = params.quad_order();
  rep.tol = params.tol();
  const BlockMatrix base = gram_M(params);
  const BlockMatrix fine = gram_M(params.with_quad_order(2 * params.quad_order()));
  rep.max_difference = (base.flat() - fine.flat()).cwiseAbs().maxCoeff();
  rep.converged = rep.max_difference <= rep.tol;
  return rep;
}

}  // namespace mvop
