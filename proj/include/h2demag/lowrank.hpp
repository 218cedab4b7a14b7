#pragma once

#include "h2demag/geometry.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace h2demag {

using Matrix = Eigen::MatrixXd;

/// Factorized block A * B^T.
struct LowRankBlock {
  Matrix a;  // rows x k
  Matrix b;  // cols x k

  Index rank() const { return a.cols(); }
  Matrix dense() const { return a * b.transpose(); }
  std::size_t num_reals() const { return static_cast<std::size_t>(a.size() + b.size()); }
};

/// Row/column access to a matrix block, in local block coordinates.
class BlockEvaluator {
 public:
  virtual ~BlockEvaluator() = default;
  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
  virtual void row(Index i, Eigen::Ref<Eigen::VectorXd> out) const = 0;
  virtual void col(Index j, Eigen::Ref<Eigen::VectorXd> out) const = 0;
};

/// Adapter turning an entry function into a BlockEvaluator.
class EntryEvaluator final : public BlockEvaluator {
 public:
  EntryEvaluator(Index rows, Index cols, std::function<double(Index, Index)> entry)
      : rows_(rows), cols_(cols), entry_(std::move(entry)) {}
  Index rows() const override { return rows_; }
  Index cols() const override { return cols_; }
  void row(Index i, Eigen::Ref<Eigen::VectorXd> out) const override {
    for (Index j = 0; j < cols_; ++j) out[j] = entry_(i, j);
  }
  void col(Index j, Eigen::Ref<Eigen::VectorXd> out) const override {
    for (Index i = 0; i < rows_; ++i) out[i] = entry_(i, j);
  }

 private:
  Index rows_, cols_;
  std::function<double(Index, Index)> entry_;
};

struct AcaResult {
  LowRankBlock block;
  bool converged = false;  // false when max_rank was reached first
};

/// Adaptive cross approximation with partial pivoting. Stops once
/// |a_k| |b_k| <= eps * |A_k B_k^T|_F (running Frobenius estimate).
AcaResult aca(const BlockEvaluator& block, double eps, Index max_rank);

/// Cross approximation with full pivoting on an explicit matrix. Returns the
/// pivot rows/columns in selection order; stops once the largest remaining
/// entry drops below eps times the first pivot.
struct CrossPivots {
  std::vector<Index> rows;
  std::vector<Index> cols;
};
CrossPivots aca_full_pivot(const Matrix& m, double eps, Index max_rank);

/// Recompresses A B^T by QR + SVD, dropping singular values <= eps * sigma_1.
LowRankBlock truncate(const LowRankBlock& block, double eps);

}  // namespace h2demag
