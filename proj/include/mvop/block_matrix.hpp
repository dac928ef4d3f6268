#pragma once

#include "mvop/matrix2.hpp"

#include <Eigen/Core>

namespace mvop {

/// (N+1) x (N+1) array of 2x2 blocks, stored as its 2(N+1) x 2(N+1)
/// flattened matrix. Block (m, n) occupies rows 2m..2m+1, cols 2n..2n+1.
class BlockMatrix {
 public:
  /// Zero matrix with `order` block rows.
  explicit BlockMatrix(int order);
  /// Throws DimensionError unless flat is square with even size.
  explicit BlockMatrix(Eigen::MatrixXd flat);

  static BlockMatrix identity(int order);
  /// Block diagonal with T in every diagonal block.
  static BlockMatrix block_t(int order);

  int order() const noexcept { return static_cast<int>(flat_.rows() / 2); }

  Matrix2 block(int m, int n) const { return flat_.block<2, 2>(2 * m, 2 * n); }
  void set_block(int m, int n, const Matrix2& b) { flat_.block<2, 2>(2 * m, 2 * n) = b; }

  const Eigen::MatrixXd& flat() const noexcept { return flat_; }
  Eigen::MatrixXd& flat() noexcept { return flat_; }

  BlockMatrix operator*(const BlockMatrix& rhs) const;
  BlockMatrix transpose() const { return BlockMatrix(Eigen::MatrixXd(flat_.transpose())); }

 private:
  Eigen::MatrixXd flat_;
};

}  // namespace mvop
