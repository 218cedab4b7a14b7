#pragma once

#include "h2demag/geometry.hpp"

#include <Eigen/Core>

#include <vector>

namespace h2demag {

using Vector = Eigen::VectorXd;

/// Square sparse matrix in compressed-row form. Column indices are sorted and
/// unique within each row.
class CsrMatrix {
 public:
  struct Triplet {
    Index row, col;
    double value;
  };

  CsrMatrix() = default;
  /// Sums duplicate entries.
  static CsrMatrix from_triplets(Index n, std::vector<Triplet> triplets);

  Index rows() const { return n_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }

  const std::vector<Index>& row_offsets() const { return offsets_; }
  const std::vector<Index>& col_indices() const { return cols_; }
  const std::vector<double>& values() const { return values_; }

  double coeff(Index i, Index j) const;
  Vector diagonal() const;
  void multiply(const Vector& x, Vector& y) const;
  Vector operator*(const Vector& x) const;

  /// Principal submatrix on `keep` (ascending indices).
  CsrMatrix submatrix(const std::vector<Index>& keep) const;
  bool is_symmetric(double tol) const;

 private:
  Index n_ = 0;
  std::vector<Index> offsets_{0};
  std::vector<Index> cols_;
  std::vector<double> values_;
};

}  // namespace h2demag
