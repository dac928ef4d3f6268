#include "mvop/chebyshev_example.hpp"
#include "mvop/errors.hpp"
#include "mvop/gram.hpp"
#include "mvop/timeband.hpp"
#include "mvop/verify.hpp"
#include "ltilde_oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace mvop;
using doctest::Approx;

namespace {

const double kGridValues[] = {-0.5, 0.0, 0.5, 1.7};
const double kGridOmegas[] = {-0.6, 0.0, 0.3, 0.9};
const int kGridNs[] = {1, 4, 9};

}  // namespace

TEST_CASE("dtilde_coeffs match the closed forms") {
  for (double a : kGridValues) {
    for (double b : kGridValues) {
      for (double omega : kGridOmegas) {
        const ModelParams p = ModelParams::make(a, b, 4, omega);
        for (double x : {-0.9, -0.2, 0.35, 0.8}) {
          const DtildeCoeffs got = dtilde_coeffs(p, x);
          const DtildeCoeffs ref = oracle::reference_coeffs(a, b, 4, omega, x);
          CHECK((got.E2 - ref.E2).norm() <= 1e-14);
          CHECK((got.E1 - ref.E1).norm() <= 1e-14);
          CHECK((got.E0 - ref.E0).norm() <= 1e-13);
        }
      }
    }
  }
  CHECK(dtilde_shift(ModelParams::make(0.5, -0.5, 3, 0.2)) == 15.0);
}

TEST_CASE("Chebyshev dtilde coefficients have zeroth-order term N(N+2)x") {
  for (int N : {0, 2, 7}) {
    for (double omega : {-0.3, 0.7}) {
      const ModelParams p = chebyshev::params(N, omega);
      for (double x : {-0.6, 0.1, 0.95}) {
        const DtildeCoeffs got = dtilde_coeffs(p, x);
        const DtildeCoeffs golden = chebyshev::dtilde_coeffs(N, omega, x);
        CHECK((got.E2 - golden.E2).norm() <= 1e-13);
        CHECK((got.E1 - golden.E1).norm() <= 1e-13);
        CHECK((got.E0 - golden.E0).norm() <= 1e-13);
        CHECK(got.E0(0, 0) == Approx(N * (N + 2) * x));
      }
    }
  }
}

TEST_CASE("apply_Dtilde decomposition") {
  for (double a : kGridValues) {
    for (double b : kGridValues) {
      const ModelParams p = ModelParams::make(a, b, 6, 0.3);
      for (int n = 0; n <= 6; ++n) {
        for (double x : chebyshev_sample_points(9)) {
          const Matrix2 direct = apply_Dtilde(p, Q_n(p, n), x);
          const Matrix2 split = apply_Dtilde_decomposed(p, Q_n(p, n), x);
          CHECK((direct - split).norm() <= 1e-11 * (1 + direct.norm()));
        }
      }
    }
  }
  const ModelParams p0 = ModelParams::make(0.3, 1.2, 0, 0.4);
  CHECK(apply_Dtilde(p0, Q_n(p0, 0), 0.2).norm() == 0.0);
  CHECK_THROWS_AS(apply_Dtilde(p0, Q_n(p0, 0), 1.0), DomainError);
}

TEST_CASE("kernel_k examples") {
  for (double a : kGridValues) {
    const ModelParams p = ModelParams::make(a, 0.5, 0, 0.3);
    const double h0 = matrix_norm_h(p, 0);
    CHECK((kernel_k(p, 0.2, -0.7) - Matrix2::Identity() / h0).norm() <= 1e-15);
  }
  for (int N : {1, 2, 6}) {
    const ModelParams p = chebyshev::params(N, 1.0);
    for (double x : {-0.9, 0.0, 0.4}) {
      for (double y : {-0.5, 0.3, 0.99}) {
        const Matrix2 k = kernel_k(p, x, y);
        CHECK((k - chebyshev::kernel(N, x, y)).norm() <= 1e-12 * (1 + k.norm()));
        CHECK((k.transpose() - kernel_k(p, y, x)).norm() <= 1e-13 * (1 + k.norm()));
      }
    }
  }
}

TEST_CASE("kernel_k reproduces polynomials of degree <= N") {
  // int f(y) W(y) k(x, y)^T dy = f(x) on the full interval.
  const ModelParams p = ModelParams::make(0.3, 1.2, 5, 1.0);
  const auto rules = omega_rules(p);
  for (int n : {0, 3, 5}) {
    const PolyHandle f = Q_n(p, n);
    for (double x : {-0.4, 0.6}) {
      Matrix2 acc = Matrix2::Zero();
      for (const auto& r : rules) {
        for (std::size_t i = 0; i < r.rule.size(); ++i) {
          const double y = r.rule.nodes[i];
          acc += r.rule.weights[i] * f.eval(y) * r.projector * kernel_k(p, x, y).transpose();
        }
      }
      CHECK((acc - f.eval(x)).norm() <= 1e-12);
    }
  }
}

TEST_CASE("apply_S_coeffs examples") {
  const ModelParams full = ModelParams::make(0.5, 1.7, 3, 1.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 8);
  a(0, 1) = 0.3;
  a(1, 6) = -2.0;
  a(0, 7) = 1.1;
  CHECK((apply_S_coeffs(gram_M(full), a) - a).cwiseAbs().maxCoeff() <= 1e-12);

  const BlockMatrix half = gram_M(ModelParams::make(0, 0, 0, 0.0));
  Eigen::MatrixXd e0 = Eigen::MatrixXd::Identity(2, 2);
  CHECK((apply_S_coeffs(half, e0) - 0.5 * e0).cwiseAbs().maxCoeff() <= 1e-15);

  // S is a concentration operator, not a projection, when Omega < 1.
  const BlockMatrix m = gram_M(ModelParams::make(0.5, 1.7, 3, 0.2));
  const Eigen::MatrixXd once = apply_S_coeffs(m, a);
  CHECK((apply_S_coeffs(m, once) - once).norm() > 1e-3);

  CHECK_THROWS_AS(apply_S_coeffs(m, Eigen::MatrixXd::Zero(2, 6)), DimensionError);
}

TEST_CASE("build_Ltilde small cases") {
  CHECK(build_Ltilde(ModelParams::make(0.3, 1.2, 0, 0.4)).flat().norm() == 0.0);
  CHECK(build_Ltilde_T_variant(ModelParams::make(0.3, 1.2, 0, 0.4)).flat().norm() == 0.0);
  for (double omega : {0.0, 0.35}) {
    const BlockMatrix l = build_Ltilde(ModelParams::make(0, 0, 1, omega));
    const double r3 = std::sqrt(3.0);
    CHECK((l.block(0, 0)).norm() <= 1e-15);
    CHECK((l.block(0, 1) - r3 * Matrix2::Identity()).norm() <= 1e-14);
    CHECK((l.block(1, 0) - r3 * Matrix2::Identity()).norm() <= 1e-14);
    CHECK((l.block(1, 1) - 2 * omega * Matrix2::Identity()).norm() <= 1e-14);
  }
}

TEST_CASE("mu_N vanishes exactly") {
  for (double a : kGridValues) {
    for (double b : kGridValues) {
      for (int N : {0, 1, 4, 9, 20}) {
        const ModelParams p = ModelParams::make(a, b, N, 0.3);
        CHECK(dtilde_mu(p, N) == 0.0);
        CHECK(dtilde_mu(p, 0) == Approx(N * (N + a + b + 2)));
      }
    }
  }
}

TEST_CASE("Q_n D~ expands on Q_{n-1}, Q_n, Q_{n+1} with the L~ blocks") {
  for (double a : kGridValues) {
    for (double b : kGridValues) {
      const ModelParams p = ModelParams::make(a, b, 5, -0.6);
      const BlockMatrix l = build_Ltilde(p);
      for (double x : {-0.7, 0.15, 0.8}) {
        const QTable q = q_table(p, 6, x);
        for (int n = 0; n <= 5; ++n) {
          Matrix2 rhs = Matrix2::Zero();
          for (int k = std::max(0, n - 1); k <= std::min(5, n + 1); ++k) rhs += l.block(n, k) * q.value[k];
          const Matrix2 lhs = apply_Dtilde(p, Q_n(p, n), x);
          CHECK((lhs - rhs).norm() <= 1e-11 * (1 + lhs.norm()));
        }
      }
    }
  }
}

TEST_CASE("build_Ltilde agrees with an independent integral oracle") {
  struct Case {
    double a, b;
    int N;
    double omega;
  };
  for (const Case c : {Case{0.3, 1.2, 6, 0.4}, Case{0.5, -0.5, 5, 0.7}}) {
    const ModelParams p = ModelParams::make(c.a, c.b, c.N, c.omega);
    const Eigen::MatrixXd oracle_l = oracle::boost_ltilde_oracle(c.a, c.b, c.N, c.omega);
    const Eigen::MatrixXd l = build_Ltilde(p).flat();
    const int d = 2 * (c.N + 1);
    CHECK((oracle_l.leftCols(d) - l).cwiseAbs().maxCoeff() <= 1e-11);
    CHECK(oracle_l.rightCols(2).cwiseAbs().maxCoeff() <= 1e-11);
    // The library's own quadrature oracle agrees with the Boost one.
    CHECK((ltilde_quadrature_oracle(p) - oracle_l).cwiseAbs().maxCoeff() <= 1e-11);
  }
}

TEST_CASE("commutator examples") {
  const BlockMatrix l = build_Ltilde(ModelParams::make(0.3, 1.2, 6, 0.4));
  CHECK(commutator_residual(BlockMatrix::identity(7), l) == 0.0);
  const ModelParams legendre = ModelParams::make(0, 0, 8, 0.2);
  CHECK(commutator_residual(gram_M(legendre), build_Ltilde(legendre)) <= 1e-11);
  const ModelParams cheb = chebyshev::params(5, 0.7);
  CHECK(commutator_residual(gram_M(cheb), build_Ltilde(cheb)) <= 1e-11);
  // Pairing M with L~ from another Omega breaks commutation.
  CHECK(commutator_residual(gram_M(legendre), build_Ltilde(legendre.with_omega(0.3))) > 1e-6);
}

TEST_CASE("T and L~ T commute with M") {
  const ModelParams p = ModelParams::make(0.3, 1.2, 6, 0.4);
  const BlockMatrix m = gram_M(p);
  const BlockMatrix t = BlockMatrix::block_t(7);
  CHECK(commutator_residual(m, t) <= 1e-12);
  const BlockMatrix lt = build_Ltilde_T_variant(p);
  CHECK((lt.flat() - (build_Ltilde(p) * t).flat()).norm() == 0.0);
  CHECK(commutator_residual(m, lt) <= 1e-11);
}

TEST_CASE("commutation and symmetry over the parameter grid") {
  for (double a : kGridValues) {
    for (double b : kGridValues) {
      for (double omega : kGridOmegas) {
        for (int N : kGridNs) {
          const ModelParams p = ModelParams::make(a, b, N, omega);
          const BlockMatrix m = gram_M(p);
          const BlockMatrix l = build_Ltilde(p);
          INFO("a=" << a << " b=" << b << " omega=" << omega << " N=" << N);
          CHECK(commutator_residual(m, l) <= 1e-10);
          CHECK(symmetry_form_residual(l, m) <= 1e-11);
          CHECK(transpose_residual(l) <= 1e-11);
        }
      }
    }
  }
}

TEST_CASE("kernel intertwining") {
  const auto samples = interior_sample_pairs(25, kDefaultSeed);
  REQUIRE(samples.size() == 25);
  for (const auto& [x, y] : samples) {
    CHECK(std::abs(x) < 0.95);
    CHECK(std::abs(y) < 0.95);
  }
  CHECK(interior_sample_pairs(25, kDefaultSeed) == samples);
  CHECK(interior_sample_pairs(25, kDefaultSeed + 1) != samples);

  CHECK(kernel_intertwining_residual(ModelParams::make(0.3, 1.2, 0, 0.4), samples) <= 1e-14);
  const ModelParams legendre = ModelParams::make(0, 0, 6, 0.2);
  CHECK(kernel_intertwining_residual(legendre, samples) <= 1e-10);
  CHECK(kernel_intertwining_residual(legendre, samples, 1e-3) > 1e-5);
  for (double a : kGridValues) {
    for (double b : kGridValues) {
      for (double omega : kGridOmegas) {
        for (int N : {1, 4, 8}) {
          const ModelParams p = ModelParams::make(a, b, N, omega);
          CHECK(kernel_intertwining_residual(p, samples) <= 1e-10);
        }
      }
    }
  }
}
