#include "mvop/verify.hpp"

#include "mvop/chebyshev_example.hpp"
#include "mvop/errors.hpp"
#include "mvop/gram.hpp"
#include "mvop/spectral.hpp"
#include "mvop/timeband.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace mvop {

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerifyReport::find(const std::string& name) const {
  for (const CheckResult& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Eigen::MatrixXd ltilde_quadrature_oracle(const ModelParams& params) {
  const int big_n = params.N();
  const ModelParams full = params.with_N(big_n + 1).with_omega(1.0);
  const int order = std::max(params.quad_order(), big_n + 4);
  const std::array<std::pair<double, double>, 2> exps{
      std::pair{params.alpha(), params.beta()}, std::pair{params.beta(), params.alpha()}};
  const Matrix2 id = Matrix2::Identity();
  const Matrix2 t = t_matrix();
  const std::array<Matrix2, 2> projectors{0.5 * (id - t), 0.5 * (id + t)};

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * (big_n + 1), 2 * (big_n + 2));
  for (std::size_t s = 0; s < 2; ++s) {
    const QuadratureRule rule = gauss_jacobi_rule(exps[s].first, exps[s].second, order);
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double x = rule.nodes[j];
      const QTable q = q_table(full, big_n + 1, x);
      const DtildeCoeffs c = dtilde_coeffs(params, x);
      for (int m = 0; m <= big_n; ++m) {
        const Matrix2 image = q.deriv2[m] * c.E2 + q.deriv1[m] * c.E1 + q.value[m] * c.E0;
        for (int k = 0; k <= big_n + 1; ++k) {
          out.block<2, 2>(2 * m, 2 * k) +=
              rule.weights[j] * (image * projectors[s] * q.value[k].transpose());
        }
      }
    }
  }
  return out;
}

namespace {

using Runner = std::function<double()>;

void run_check(VerifyReport& rep, std::string name, double threshold, const Runner& body) {
  CheckResult c;
  c.name = std::move(name);
  c.threshold = threshold;
  try {
    c.residual = body();
    c.passed = std::isfinite(c.residual) && c.residual <= threshold;
    if (!std::isfinite(c.residual)) {
      c.error = true;
      c.detail = "non-finite residual";
    }
  } catch (const std::exception& e) {
    c.error = true;
    c.passed = false;
    c.detail = e.what();
  }
  rep.checks.push_back(std::move(c));
}

template <class F>
double max_over(int lo, int hi, F&& f) {
  double worst = 0.0;
  for (int n = lo; n <= hi; ++n) worst = std::max(worst, f(n));
  return worst;
}

}  // namespace

VerifyReport run_verify(const ModelParams& params, const VerifyOptions& options) {
  VerifyReport rep;
  const int big_n = params.N();
  const int nmax = std::max(big_n, options.min_identity_degree);
  const std::vector<double> xs = chebyshev_sample_points();
  const auto pairs = interior_sample_pairs(options.intertwining_samples, options.seed);
  const double a = params.alpha();
  const double b = params.beta();

  const auto over_samples = [&](auto&& f) {
    return [&, f](int n) {
      double worst = 0.0;
      for (double x : xs) worst = std::max(worst, f(n, x));
      return worst;
    };
  };

  // --- matrix orthogonal polynomial identities ---
  run_check(rep, "weight_positive_definite", 0.0, [&] {
    double failures = 0.0;
    for (int k = 0; k < 64; ++k) {
      const double x = -0.995 + 1.99 * (k + 0.5) / 64.0;
      const Matrix2 w = weight_W(params, x);
      if (!is_symmetric(w, 0.0) || !is_positive_definite(w)) failures += 1.0;
    }
    return failures;
  });
  run_check(rep, "orthonormality", 1e-12, [&] {
    const BlockMatrix g = gram_M(params.with_N(nmax).with_omega(1.0));
    return (g.flat() - Eigen::MatrixXd::Identity(g.flat().rows(), g.flat().cols()))
        .cwiseAbs()
        .maxCoeff();
  });
  run_check(rep, "three_term_recurrence", 1e-11, [&] {
    return max_over(1, nmax, over_samples([&](int n, double x) {
                      return recurrence_residual(params, n, x);
                    }));
  });
  run_check(rep, "differentiation_formula", 1e-11, [&] {
    return max_over(0, nmax, over_samples([&](int n, double x) {
                      return difform_residual(params, n, x);
                    }));
  });
  run_check(rep, "orthonormal_differentiation_formula", 1e-11, [&] {
    return max_over(0, nmax, over_samples([&](int n, double x) {
                      return orthonormal_difform_residual(params, n, x);
                    }));
  });
  run_check(rep, "christoffel_darboux", 1e-11, [&] {
    return max_over(1, nmax, [&](int n) {
      double worst = 0.0;
      for (const auto& [x, y] : pairs) {
        if (x != y) worst = std::max(worst, cd_residual(params, n, x, y));
      }
      return worst;
    });
  });
  run_check(rep, "d_eigenfunction", 1e-11, [&] {
    return max_over(0, nmax, over_samples([&](int n, double x) {
                      return d_eigen_residual(params, n, x);
                    }));
  });
  run_check(rep, "factorization", 1e-10, [&] {
    return max_over(0, nmax, over_samples([&](int n, double x) {
                      return secord_residual(params, n, x);
                    }));
  });
  run_check(rep, "proof_constant", 1e-12,
            [&] { return max_over(1, nmax, [&](int n) { return proof_constant_residual(params, n); }); });
  if (std::abs(b - (a - 1.0)) <= 1e-14 && a > 0.0) {
    run_check(rep, "first_order_ode", 1e-11, [&] {
      return max_over(0, nmax, [&](int n) { return check_first_order_ode(params, n, xs); });
    });
  }
  if (a == 0.5 && b == -0.5) {
    run_check(rep, "chebyshev_weight", 1e-13, [&] {
      double worst = 0.0;
      for (double x : xs) worst = std::max(worst, (weight_W(params, x) - chebyshev::weight(x)).norm());
      return worst;
    });
    run_check(rep, "chebyshev_monic_norm", 1e-12, [&] {
      const ModelParams full = params.with_omega(1.0);
      return max_over(0, std::min(nmax, 10), [&](int n) {
        const PolyHandle p = chebyshev::monic_P(n);
        const Matrix2 g = inner_product_Omega(full, p, p);
        const double expected = std::pow(chebyshev::monic_norm(n), 2);
        return (g - expected * Matrix2::Identity()).norm() / expected;
      });
    });
    run_check(rep, "chebyshev_monic_relation", 1e-12, [&] {
      return max_over(0, nmax, over_samples([&](int n, double x) {
                        const Matrix2 lhs = P_n(params, n).eval(x);
                        const Matrix2 rhs = leading_coefficient(params, n) * chebyshev::monic_P(n).eval(x);
                        return (lhs - rhs).norm() / (1.0 + lhs.norm());
                      }));
    });
    run_check(rep, "chebyshev_dtilde_coefficients", 1e-13, [&] {
      double worst = 0.0;
      for (double x : xs) {
        const DtildeCoeffs g = dtilde_coeffs(params, x);
        const DtildeCoeffs c = chebyshev::dtilde_coeffs(big_n, params.omega(), x);
        worst = std::max({worst, (g.E2 - c.E2).norm(), (g.E1 - c.E1).norm(),
                          (g.E0 - c.E0).norm() / (1.0 + c.E0.norm())});
      }
      return worst;
    });
    run_check(rep, "chebyshev_kernel", 1e-12, [&] {
      double worst = 0.0;
      for (const auto& [x, y] : pairs) {
        const Matrix2 k = kernel_k(params, x, y);
        worst = std::max(worst, (k - chebyshev::kernel(big_n, x, y)).norm() / (1.0 + k.norm()));
      }
      return worst;
    });
  }

  // --- Gram matrix ---
  BlockMatrix m(big_n + 1);
  run_check(rep, "gram_symmetry", 1e-13, [&] {
    m = gram_M(params);
    return (m.flat() - m.flat().transpose()).norm() / std::max(1.0, m.flat().norm());
  });
  run_check(rep, "gram_spectrum_bounds", 1e-12, [&] {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.flat(), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    // excess outside [0, 1]
    return std::max({0.0, -lo, hi - 1.0});
  });
  run_check(rep, "gram_blocks_commute_with_T", 1e-12, [&] {
    double worst = 0.0;
    for (int i = 0; i <= big_n; ++i) {
      for (int j = 0; j <= big_n; ++j) worst = std::max(worst, t_commutator_norm(m.block(i, j)));
    }
    return worst;
  });
  run_check(rep, "quadrature_convergence", params.tol(),
            [&] { return convergence_check(params).max_difference; });

  // --- commuting operator ---
  BlockMatrix l = build_Ltilde(params);
  if (options.ltilde_fault) {
    const LtildeFault& f = *options.ltilde_fault;
    if (f.row < 0 || f.col < 0 || f.row >= l.flat().rows() || f.col >= l.flat().cols()) {
      throw ParameterError("fault injection index outside L~");
    }
    l.flat()(f.row, f.col) += f.delta;
  }
  run_check(rep, "dtilde_decomposition", 1e-11, [&] {
    return max_over(0, big_n, over_samples([&](int n, double x) {
                      const PolyHandle q = Q_n(params, n);
                      const Matrix2 u = apply_Dtilde(params, q, x);
                      const Matrix2 v = apply_Dtilde_decomposed(params, q, x);
                      return (u - v).norm() / (1.0 + std::max(u.norm(), v.norm()));
                    }));
  });
  run_check(rep, "ltilde_oracle", 1e-11, [&] {
    const Eigen::MatrixXd oracle = ltilde_quadrature_oracle(params);
    const auto cols = l.flat().cols();
    return (oracle.leftCols(cols) - l.flat()).cwiseAbs().maxCoeff();
  });
  run_check(rep, "ltilde_truncation", 1e-11, [&] {
    const Eigen::MatrixXd oracle = ltilde_quadrature_oracle(params);
    return oracle.rightCols(2).cwiseAbs().maxCoeff() +
           std::abs(dtilde_mu(params, big_n));
  });
  run_check(rep, "ltilde_symmetry", 1e-11, [&] { return transpose_residual(l); });
  run_check(rep, "symmetry_form", 1e-11, [&] { return symmetry_form_residual(l, m); });
  run_check(rep, "commutator", 1e-11, [&] { return commutator_residual(m, l); });
  run_check(rep, "commutator_T", 1e-12,
            [&] { return commutator_residual(m, BlockMatrix::block_t(big_n + 1)); });
  run_check(rep, "commutator_Ltilde_T", 1e-11,
            [&] { return commutator_residual(m, l * BlockMatrix::block_t(big_n + 1)); });
  run_check(rep, "kernel_intertwining", 1e-10,
            [&] { return kernel_intertwining_residual(params, pairs); });

  // --- shared eigenvectors ---
  const double bound = eigen_residual_bound(m);
  run_check(rep, "shared_eigenvectors", bound, [&] {
    double worst = 0.0;
    for (const ProlatePair& p : prolate_eigenpairs(m, l)) worst = std::max(worst, p.residual);
    return worst;
  });
  return rep;
}

}  // namespace mvop
