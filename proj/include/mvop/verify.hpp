#pragma once

#include "mvop/block_matrix.hpp"
#include "mvop/matrix_jacobi.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mvop {

inline constexpr unsigned long long kDefaultSeed = 20240521ULL;

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
  /// Set when the check threw; `detail` then carries the message.
  bool error = false;
  std::string detail;
};

/// Adds `delta` to one flattened entry of L~ before any check consumes it.
struct LtildeFault {
  int row = 0;
  int col = 0;
  double delta = 1e-6;
};

struct VerifyOptions {
  unsigned long long seed = kDefaultSeed;
  int intertwining_samples = 25;
  /// Identity checks cover 0 <= n <= max(N, min_identity_degree).
  int min_identity_degree = 12;
  std::optional<LtildeFault> ltilde_fault;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  const CheckResult* find(const std::string& name) const;
};

/// Runs every identity, structure and commutation check for one instance.
VerifyReport run_verify(const ModelParams& params, const VerifyOptions& options = {});

/// L~_{m,k} = int_{-1}^{1} (Q_m D~)(x) W(x) Q_k(x)^T dx by full-interval Gauss-Jacobi
/// rules (exact for these polynomial integrands), for 0 <= m <= N and
/// 0 <= k <= N + 1. Returns a 2(N+1) x 2(N+2) matrix; the last block column is
/// the projection onto Q_{N+1}.
Eigen::MatrixXd ltilde_quadrature_oracle(const ModelParams& params);

}  // namespace mvop
