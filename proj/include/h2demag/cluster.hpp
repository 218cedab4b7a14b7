#pragma once

#include "h2demag/geometry.hpp"

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace h2demag {

struct ClusterNode {
  Index begin = 0;  // range [begin, end) in tree ordering
  Index end = 0;
  Box box;          // bounding box of the member points
  Box support;      // bounding box of whatever the members' basis functions touch
  std::array<Index, 2> children{-1, -1};
  Index parent = -1;
  int level = 0;

  bool is_leaf() const { return children[0] < 0; }
  Index size() const { return end - begin; }
};

/// Binary geometric cluster tree. Nodes are stored in preorder, so every child
/// has a larger id than its parent and the root is node 0.
class ClusterTree {
 public:
  ClusterTree() = default;

  /// Recursive median bisection along the longest box axis (lowest axis on
  /// ties); points with equal coordinates are ordered by index.
  static ClusterTree build(std::span<const Point3> points, Index leaf_size);

  /// Rebuilds a tree from its preorder node list and permutation (used when
  /// loading from disk). Validates the structure.
  static ClusterTree from_preorder(std::vector<ClusterNode> nodes, std::vector<Index> permutation);

  const std::vector<ClusterNode>& nodes() const { return nodes_; }
  const ClusterNode& node(Index id) const { return nodes_[id]; }
  Index size() const { return static_cast<Index>(nodes_.size()); }
  Index num_points() const { return static_cast<Index>(perm_.size()); }

  /// perm[k] is the original index of the point at tree position k.
  const std::vector<Index>& permutation() const { return perm_; }
  std::vector<Index> leaves() const;
  int depth() const;

  /// Sets every node's support box from per-point boxes (original numbering).
  void set_support(const std::function<Box(Index)>& point_support);

 private:
  std::vector<ClusterNode> nodes_;
  std::vector<Index> perm_;
};

struct BlockNode {
  Index row = 0;  // cluster ids
  Index col = 0;
  bool admissible = false;
  std::vector<Index> children;

  bool is_leaf() const { return children.empty(); }
};

/// Block partition of rows x cols. A block is admissible when
///   max(diam(row box), diam(col support)) <= eta * dist(row box, col support)
/// with positive distance; inadmissible blocks are split until both clusters
/// are leaves.
class BlockTree {
 public:
  static BlockTree build(const ClusterTree& rows, const ClusterTree& cols, double eta);

  const std::vector<BlockNode>& nodes() const { return nodes_; }
  std::vector<Index> leaves() const;
  Index num_admissible() const;
  Index num_inadmissible() const;

 private:
  std::vector<BlockNode> nodes_;
};

bool is_admissible(const ClusterNode& row, const ClusterNode& col, double eta);

}  // namespace h2demag
