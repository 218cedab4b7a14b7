#pragma once

#include "h2demag/bem.hpp"
#include "h2demag/cluster.hpp"
#include "h2demag/lowrank.hpp"

#include <stdexcept>
#include <vector>

namespace h2demag {

/// Compression parameters shared by the H and H2 backends.
struct CompressionConfig {
  Index leaf_size = 32;
  double eta = 2.0;
  int cheb_order = 4;
  double eps = 1e-5;      // ACA / HCA tolerance
  double eps_rec = 1e-5;  // H -> H2 truncation
  bool use_hca = true;    // false: plain ACA on every admissible block
};

/// Raised when the interpolation cross of an HCA block is too ill-conditioned to
/// invert; callers fall back to plain ACA.
class HcaBreakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor Chebyshev points of the given order in a box; flat axes get a single
/// point.
std::vector<Point3> chebyshev_points(const Box& box, int order);

/// Hybrid cross approximation of the admissible block (row cluster t, column
/// cluster s): full-pivot cross approximation of G on Chebyshev grids in t's box
/// and s's support box, with the interpolation reversed so that
///   A(i, a) = sum_b G(xi_i, y'_b) W(b, a),   B(j, a) = double layer of phi_j seen from y_a.
/// Throws std::invalid_argument for an inadmissible pair.
LowRankBlock hca_block(const BoundaryKernel& kernel, const ClusterTree& tree, Index t, Index s,
                       int order, double eps, double eta);

struct HLeaf {
  Index row = 0;  // cluster ids
  Index col = 0;
  bool admissible = false;
  Matrix dense;          // inadmissible (or low-rank fallback) blocks
  LowRankBlock lowrank;  // admissible blocks
  bool is_lowrank() const { return admissible && dense.size() == 0; }
};

struct HStats {
  Index hca_blocks = 0;
  Index aca_fallbacks = 0;
  Index dense_fallbacks = 0;
};

/// H-matrix: block partition with low-rank admissible leaves and dense near
/// field. Operates in the original (boundary) numbering.
class HMatrix {
 public:
  Index size() const { return tree_.num_points(); }
  const ClusterTree& tree() const { return tree_; }
  const BlockTree& block_tree() const { return blocks_; }
  const std::vector<HLeaf>& leaves() const { return leaves_; }
  const HStats& stats() const { return stats_; }

  Eigen::VectorXd matvec(const Eigen::VectorXd& x) const;
  Matrix to_dense() const;
  std::size_t storage_reals() const;
  std::size_t storage_bytes() const { return 8 * storage_reals(); }
  Index max_rank() const;

 private:
  friend HMatrix assemble_h(const BoundaryKernel&, const CompressionConfig&);
  ClusterTree tree_;
  BlockTree blocks_;
  std::vector<HLeaf> leaves_;
  HStats stats_;
};

HMatrix assemble_h(const BoundaryKernel& kernel, const CompressionConfig& config = {});

}  // namespace h2demag
