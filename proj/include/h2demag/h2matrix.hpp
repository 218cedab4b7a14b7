#pragma once

#include "h2demag/hmatrix.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <vector>

namespace h2demag {

/// Nested cluster basis. Leaves store their basis explicitly; every other
/// cluster is represented only through its children's transfer matrices:
///   V_t = [V_c1 E_c1; V_c2 E_c2].
struct ClusterBasis {
  std::vector<Index> rank;        // k_t per cluster
  std::vector<Matrix> leaf;       // |t| x k_t on leaves, empty elsewhere
  std::vector<Matrix> transfer;   // k_t x k_parent, empty on the root

  std::size_t storage_reals() const;
  /// Expands V_t explicitly (tests and diagnostics only).
  Matrix expand(const ClusterTree& tree, Index t) const;
};

struct H2Block {
  Index row = 0;
  Index col = 0;
  bool admissible = false;
  Matrix data;  // coupling k_t x k_s when admissible, dense |t| x |s| otherwise
};

class H2Matrix {
 public:
  H2Matrix() = default;
  H2Matrix(ClusterTree row_tree, ClusterTree col_tree, ClusterBasis row_basis,
           ClusterBasis col_basis, std::vector<H2Block> blocks);

  Index size() const { return row_tree_.num_points(); }
  const ClusterTree& row_tree() const { return row_tree_; }
  const ClusterTree& col_tree() const { return col_tree_; }
  const ClusterBasis& row_basis() const { return row_basis_; }
  const ClusterBasis& col_basis() const { return col_basis_; }
  const std::vector<H2Block>& blocks() const { return blocks_; }

  /// y = M x in the original numbering.
  Eigen::VectorXd matvec(const Eigen::VectorXd& x) const;
  Matrix to_dense() const;

  std::size_t storage_reals() const;
  std::size_t storage_bytes() const { return 8 * storage_reals(); }
  Index max_rank() const;

 private:
  ClusterTree row_tree_;
  ClusterTree col_tree_;
  ClusterBasis row_basis_;
  ClusterBasis col_basis_;
  std::vector<H2Block> blocks_;
};

/// Algebraic H -> H2 conversion: nested row and column bases from truncated SVDs
/// of the agglomerated (blockwise normalised) low-rank factors, bottom-up over
/// the cluster tree, keeping singular values > eps_rec * sigma_1. Couplings are
/// projections of the low-rank blocks onto the bases; dense blocks are copied.
H2Matrix recompress_h2(const HMatrix& h, double eps_rec);

class H2FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CRC-64/XZ of a byte range.
std::uint64_t crc64(const void* data, std::size_t size);

/// Serialises to the "H2MS" v1 little-endian format (see README).
std::vector<char> serialize_h2(const H2Matrix& op);
H2Matrix deserialize_h2(const std::vector<char>& bytes, std::optional<Index> expected_size = {});

/// Writes atomically (temporary file + rename).
void save_h2(const H2Matrix& op, const std::filesystem::path& path);
H2Matrix load_h2(const std::filesystem::path& path, std::optional<Index> expected_size = {});

}  // namespace h2demag
