#include "h2demag/cluster.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace h2demag {

namespace {

void split(std::vector<ClusterNode>& nodes, std::vector<Index>& perm, std::span<const Point3> pts,
           Index id, Index leaf_size) {
  ClusterNode& self = nodes[id];
  for (Index k = self.begin; k < self.end; ++k) self.box.extend(pts[perm[k]]);
  self.support = self.box;
  if (self.size() <= leaf_size) return;

  const Point3 ext = self.box.extent();
  int axis = 0;
  for (int d = 1; d < 3; ++d)
    if (ext[d] > ext[axis]) axis = d;
  const Index begin = self.begin, end = self.end, level = self.level;
  std::sort(perm.begin() + begin, perm.begin() + end, [&](Index a, Index b) {
    const double xa = pts[a][axis], xb = pts[b][axis];
    return xa != xb ? xa < xb : a < b;
  });
  const Index mid = begin + (end - begin) / 2;

  for (int c = 0; c < 2; ++c) {
    ClusterNode child;
    child.begin = c == 0 ? begin : mid;
    child.end = c == 0 ? mid : end;
    child.parent = id;
    child.level = static_cast<int>(level) + 1;
    nodes.push_back(child);
    const Index cid = static_cast<Index>(nodes.size()) - 1;
    nodes[id].children[c] = cid;  // `self` may dangle after push_back
    split(nodes, perm, pts, cid, leaf_size);
  }
}

}  // namespace

ClusterTree ClusterTree::build(std::span<const Point3> points, Index leaf_size) {
  if (points.empty()) throw std::invalid_argument("cluster tree needs at least one point");
  if (leaf_size < 1) throw std::invalid_argument("leaf size must be at least 1");
  ClusterTree tree;
  tree.perm_.resize(points.size());
  std::iota(tree.perm_.begin(), tree.perm_.end(), Index{0});
  ClusterNode root;
  root.begin = 0;
  root.end = static_cast<Index>(points.size());
  tree.nodes_.push_back(root);
  split(tree.nodes_, tree.perm_, points, 0, leaf_size);
  return tree;
}

ClusterTree ClusterTree::from_preorder(std::vector<ClusterNode> nodes, std::vector<Index> permutation) {
  if (nodes.empty()) throw std::invalid_argument("cluster tree has no nodes");
  const Index n = static_cast<Index>(permutation.size());
  std::vector<char> seen(n, 0);
  for (Index p : permutation) {
    if (p < 0 || p >= n || seen[p]) throw std::invalid_argument("cluster permutation is not a bijection");
    seen[p] = 1;
  }
  // Children of a non-leaf follow it in preorder: first child at id+1, second
  // child right after the first child's subtree.
  Index next = 0;
  std::function<void(Index, int)> link = [&](Index id, int level) {
    if (id >= static_cast<Index>(nodes.size())) throw std::invalid_argument("truncated cluster tree");
    ClusterNode& node = nodes[id];
    node.level = level;
    next = id + 1;
    if (node.children[0] < 0) return;
    for (int c = 0; c < 2; ++c) {
      const Index cid = next;
      if (cid >= static_cast<Index>(nodes.size())) throw std::invalid_argument("truncated cluster tree");
      nodes[id].children[c] = cid;
      nodes[cid].parent = id;
      link(cid, level + 1);
    }
    const ClusterNode& a = nodes[nodes[id].children[0]];
    const ClusterNode& b = nodes[nodes[id].children[1]];
    if (a.begin != nodes[id].begin || a.end != b.begin || b.end != nodes[id].end)
      throw std::invalid_argument("cluster children do not partition their parent");
  };
  if (nodes[0].begin != 0 || nodes[0].end != n) throw std::invalid_argument("cluster root does not cover all points");
  link(0, 0);
  if (next != static_cast<Index>(nodes.size())) throw std::invalid_argument("cluster tree has trailing nodes");
  for (ClusterNode& node : nodes) node.support = node.box;

  ClusterTree tree;
  tree.nodes_ = std::move(nodes);
  tree.perm_ = std::move(permutation);
  return tree;
}

std::vector<Index> ClusterTree::leaves() const {
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i)
    if (nodes_[i].is_leaf()) out.push_back(i);
  return out;
}

int ClusterTree::depth() const {
  int d = 0;
  for (const ClusterNode& n : nodes_) d = std::max(d, n.level);
  return d;
}

void ClusterTree::set_support(const std::function<Box(Index)>& point_support) {
  for (Index id = size() - 1; id >= 0; --id) {
    ClusterNode& node = nodes_[id];
    Box b;
    if (node.is_leaf()) {
      for (Index k = node.begin; k < node.end; ++k) b.extend(point_support(perm_[k]));
    } else {
      b.extend(nodes_[node.children[0]].support);
      b.extend(nodes_[node.children[1]].support);
    }
    node.support = b;
  }
}

bool is_admissible(const ClusterNode& row, const ClusterNode& col, double eta) {
  const double dist = row.box.distance(col.support);
  if (!(dist > 0.0)) return false;
  return std::max(row.box.diameter(), col.support.diameter()) <= eta * dist;
}

BlockTree BlockTree::build(const ClusterTree& rows, const ClusterTree& cols, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("admissibility parameter eta must be positive");
  BlockTree tree;
  std::function<Index(Index, Index)> descend = [&](Index r, Index c) -> Index {
    const Index id = static_cast<Index>(tree.nodes_.size());
    tree.nodes_.push_back({r, c, false, {}});
    const ClusterNode& rn = rows.node(r);
    const ClusterNode& cn = cols.node(c);
    if (is_admissible(rn, cn, eta)) {
      tree.nodes_[id].admissible = true;
      return id;
    }
    if (rn.is_leaf() && cn.is_leaf()) return id;
    std::vector<Index> rs = rn.is_leaf() ? std::vector<Index>{r}
                                         : std::vector<Index>{rn.children[0], rn.children[1]};
    std::vector<Index> cs = cn.is_leaf() ? std::vector<Index>{c}
                                         : std::vector<Index>{cn.children[0], cn.children[1]};
    std::vector<Index> kids;
    for (Index rr : rs)
      for (Index cc : cs) kids.push_back(descend(rr, cc));
    tree.nodes_[id].children = std::move(kids);
    return id;
  };
  descend(0, 0);
  return tree;
}

std::vector<Index> BlockTree::leaves() const {
  std::vector<Index> out;
  for (Index i = 0; i < static_cast<Index>(nodes_.size()); ++i)
    if (nodes_[i].is_leaf()) out.push_back(i);
  return out;
}

Index BlockTree::num_admissible() const {
  return std::count_if(nodes_.begin(), nodes_.end(),
                       [](const BlockNode& b) { return b.is_leaf() && b.admissible; });
}

Index BlockTree::num_inadmissible() const {
  return std::count_if(nodes_.begin(), nodes_.end(),
                       [](const BlockNode& b) { return b.is_leaf() && !b.admissible; });
}

}  // namespace h2demag
