#pragma once

#include "h2demag/bem.hpp"
#include "h2demag/h2matrix.hpp"
#include "h2demag/hmatrix.hpp"

#include <string>
#include <variant>

namespace h2demag {

enum class Backend { dense, h, h2 };

std::string to_string(Backend b);
/// Accepts "dense", "h", "h2" (case-insensitive).
Backend parse_backend(const std::string& name);

/// The boundary operator M in one of three storage formats. Immutable after
/// construction; apply() is const and thread-safe.
class BoundaryOperator {
 public:
  explicit BoundaryOperator(Matrix dense);
  explicit BoundaryOperator(HMatrix h);
  explicit BoundaryOperator(H2Matrix h2);

  /// Dense refuses N > dense_cap with CapacityError.
  static BoundaryOperator assemble(const BoundaryKernel& kernel, Backend backend,
                                   const CompressionConfig& config = {}, Index dense_cap = kDefaultDenseCap);

  Backend backend() const;
  Index size() const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Payload reals times 8.
  std::size_t storage_bytes() const;

  const Matrix* dense() const { return std::get_if<Matrix>(&op_); }
  const HMatrix* hmatrix() const { return std::get_if<HMatrix>(&op_); }
  const H2Matrix* h2matrix() const { return std::get_if<H2Matrix>(&op_); }

 private:
  std::variant<Matrix, HMatrix, H2Matrix> op_;
};

/// r = 1 - bytes / (8 N^2).
double compression_ratio(std::size_t bytes, Index n);

}  // namespace h2demag
