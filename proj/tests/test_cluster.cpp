#include "h2demag/cluster.hpp"

#include <doctest.h>

#include <functional>
#include <set>

using namespace h2demag;

namespace {

std::vector<Point3> line(Index n) {
  std::vector<Point3> p;
  for (Index i = 0; i < n; ++i) p.emplace_back(static_cast<double>(i), 0.0, 0.0);
  return p;
}

// Independent partition of [0,n)^2 for points on the integer line: halve
// intervals until the pair is admissible or both halves are leaf-sized.
void reference_blocks(Index r0, Index rn, Index c0, Index cn, Index leaf, double eta, Index& adm,
                      Index& near) {
  const double diam = static_cast<double>(std::max(rn, cn) - 1);
  double gap = 0.0;
  if (c0 >= r0 + rn) gap = static_cast<double>(c0 - (r0 + rn - 1));
  if (r0 >= c0 + cn) gap = static_cast<double>(r0 - (c0 + cn - 1));
  if (gap > 0.0 && diam <= eta * gap) {
    ++adm;
    return;
  }
  const bool rl = rn <= leaf, cl = cn <= leaf;
  if (rl && cl) {
    ++near;
    return;
  }
  std::vector<std::pair<Index, Index>> rs = rl ? std::vector<std::pair<Index, Index>>{{r0, rn}}
                                               : std::vector<std::pair<Index, Index>>{{r0, rn / 2}, {r0 + rn / 2, rn - rn / 2}};
  std::vector<std::pair<Index, Index>> cs = cl ? std::vector<std::pair<Index, Index>>{{c0, cn}}
                                               : std::vector<std::pair<Index, Index>>{{c0, cn / 2}, {c0 + cn / 2, cn - cn / 2}};
  for (auto [a, m] : rs)
    for (auto [b, k] : cs) reference_blocks(a, m, b, k, leaf, eta, adm, near);
}

}  // namespace

TEST_CASE("a small cloud is a single leaf") {
  const auto pts = line(5);
  const ClusterTree t = ClusterTree::build(pts, 8);
  CHECK(t.size() == 1);
  CHECK(t.node(0).is_leaf());
  CHECK(t.depth() == 0);
  const BlockTree b = BlockTree::build(t, t, 2.0);
  CHECK(b.num_admissible() == 0);
  CHECK(b.num_inadmissible() == 1);
}

TEST_CASE("two separated clouds split at the root") {
  std::vector<Point3> pts;
  for (int i = 0; i < 10; ++i) pts.emplace_back(0.01 * i, 0.0, 0.0);
  for (int i = 0; i < 10; ++i) pts.emplace_back(5.0 + 0.01 * i, 0.0, 0.0);
  const ClusterTree t = ClusterTree::build(pts, 10);
  REQUIRE(t.size() == 3);
  for (Index k = t.node(1).begin; k < t.node(1).end; ++k) CHECK(t.permutation()[k] < 10);
  const BlockTree b = BlockTree::build(t, t, 1.0);
  CHECK(b.num_admissible() == 2);
  CHECK(b.num_inadmissible() == 2);
}

TEST_CASE("duplicate points are ordered by index") {
  const std::vector<Point3> pts(7, Point3(1, 2, 3));
  const ClusterTree t = ClusterTree::build(pts, 2);
  for (Index k = 0; k < 7; ++k) CHECK(t.permutation()[k] == k);
  for (Index leaf : t.leaves()) CHECK(t.node(leaf).size() <= 2);
  // Coincident clusters are never admissible.
  const BlockTree b = BlockTree::build(t, t, 10.0);
  CHECK(b.num_admissible() == 0);
}

TEST_CASE("tree structure invariants") {
  std::vector<Point3> pts;
  for (int i = 0; i < 300; ++i) pts.emplace_back(std::sin(1.3 * i), std::cos(0.7 * i), 0.01 * i);
  const ClusterTree t = ClusterTree::build(pts, 16);
  std::set<Index> perm(t.permutation().begin(), t.permutation().end());
  CHECK(perm.size() == 300);
  for (Index id = 0; id < t.size(); ++id) {
    const ClusterNode& n = t.node(id);
    for (Index k = n.begin; k < n.end; ++k) CHECK(n.box.contains(pts[t.permutation()[k]]));
    if (n.is_leaf()) {
      CHECK(n.size() <= 16);
    } else {
      CHECK(n.children[0] > id);
      CHECK(t.node(n.children[0]).begin == n.begin);
      CHECK(t.node(n.children[0]).end == t.node(n.children[1]).begin);
      CHECK(t.node(n.children[1]).end == n.end);
    }
  }
  const ClusterTree copy = ClusterTree::from_preorder(t.nodes(), t.permutation());
  CHECK(copy.size() == t.size());
  CHECK(copy.leaves() == t.leaves());
  std::vector<ClusterNode> broken = t.nodes();
  broken[1].end += 1;
  CHECK_THROWS_AS(ClusterTree::from_preorder(broken, t.permutation()), std::invalid_argument);
}

TEST_CASE("block partition of a 1D grid") {
  const auto pts = line(64);
  const ClusterTree t = ClusterTree::build(pts, 8);
  const BlockTree b = BlockTree::build(t, t, 1.0);
  Index adm = 0, near = 0;
  reference_blocks(0, 64, 0, 64, 8, 1.0, adm, near);
  CHECK(b.num_admissible() == adm);
  CHECK(b.num_inadmissible() == near);
  // Near field: the 8 diagonal and 14 neighbouring leaf pairs.
  CHECK(near == 22);

  // Leaves cover every (i, j) exactly once.
  std::vector<int> hits(64 * 64, 0);
  for (Index id : b.leaves()) {
    const ClusterNode& r = t.node(b.nodes()[id].row);
    const ClusterNode& c = t.node(b.nodes()[id].col);
    for (Index i = r.begin; i < r.end; ++i)
      for (Index j = c.begin; j < c.end; ++j) ++hits[t.permutation()[i] * 64 + t.permutation()[j]];
  }
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
}

TEST_CASE("admissibility examples") {
  ClusterNode a, b;
  a.box.extend(Point3(0, 0, 0));
  a.box.extend(Point3(1, 0, 0));
  a.support = a.box;
  b.box.extend(Point3(3, 0, 0));
  b.box.extend(Point3(4, 0, 0));
  b.support = b.box;
  // diameters 1, distance 2
  CHECK(is_admissible(a, b, 0.5));
  CHECK_FALSE(is_admissible(a, b, 0.49));
  CHECK_FALSE(is_admissible(a, a, 100.0));
  // A wider column support shrinks the gap.
  b.support.extend(Point3(1.5, 0, 0));
  CHECK_FALSE(is_admissible(a, b, 0.5));
  CHECK(is_admissible(a, b, 5.0));
}
