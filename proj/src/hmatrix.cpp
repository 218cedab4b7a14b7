#include "h2demag/hmatrix.hpp"

#include <cmath>

namespace h2demag {

std::vector<Point3> chebyshev_points(const Box& box, int order) {
  if (order < 1) throw std::invalid_argument("Chebyshev order must be at least 1");
  const Point3 mid = 0.5 * (box.lo + box.hi);
  const Point3 half = 0.5 * box.extent();
  const double flat = 1e-12 * std::max(box.diameter(), 1e-300);
  std::array<std::vector<double>, 3> axis;
  for (int d = 0; d < 3; ++d) {
    const int m = half[d] > flat ? order : 1;
    for (int k = 0; k < m; ++k)
      axis[d].push_back(m == 1 ? mid[d] : mid[d] + half[d] * std::cos((2.0 * k + 1.0) * kPi / (2.0 * m)));
  }
  std::vector<Point3> pts;
  pts.reserve(axis[0].size() * axis[1].size() * axis[2].size());
  for (double x : axis[0])
    for (double y : axis[1])
      for (double z : axis[2]) pts.emplace_back(x, y, z);
  return pts;
}

namespace {

std::span<const Index> members(const ClusterTree& tree, Index id) {
  const ClusterNode& n = tree.node(id);
  return {tree.permutation().data() + n.begin, static_cast<std::size_t>(n.size())};
}

}  // namespace

LowRankBlock hca_block(const BoundaryKernel& kernel, const ClusterTree& tree, Index t, Index s,
                       int order, double eps, double eta) {
  const ClusterNode& rn = tree.node(t);
  const ClusterNode& cn = tree.node(s);
  if (!is_admissible(rn, cn, eta)) throw std::invalid_argument("hca_block: cluster pair is not admissible");

  const auto row_pts = chebyshev_points(rn.box, order);
  const auto col_pts = chebyshev_points(cn.support, order);
  Matrix grid(row_pts.size(), col_pts.size());
  for (Index a = 0; a < grid.rows(); ++a)
    for (Index b = 0; b < grid.cols(); ++b) grid(a, b) = green(row_pts[a], col_pts[b]);

  const CrossPivots piv = aca_full_pivot(grid, eps, std::min(grid.rows(), grid.cols()));
  const Index k = static_cast<Index>(piv.rows.size());
  const auto rows = members(tree, t);
  const auto cols = members(tree, s);
  LowRankBlock out;
  if (k == 0) {
    out.a.resize(rows.size(), 0);
    out.b.resize(cols.size(), 0);
    return out;
  }

  Matrix cross(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b) cross(a, b) = grid(piv.rows[a], piv.cols[b]);
  Eigen::FullPivLU<Matrix> lu(cross);
  if (!lu.isInvertible() || lu.rcond() < 1e-13) throw HcaBreakdown("hca_block: singular interpolation cross");
  const Matrix weights = lu.inverse();  // indexed (sigma, tau)

  Matrix gx(rows.size(), k);
  for (Index i = 0; i < gx.rows(); ++i)
    for (Index b = 0; b < k; ++b) gx(i, b) = green(kernel.points()[rows[i]], col_pts[piv.cols[b]]);
  out.a = gx * weights;
  out.b.resize(cols.size(), k);
  for (Index a = 0; a < k; ++a) kernel.collocate(row_pts[piv.rows[a]], cols, out.b.col(a));
  return truncate(out, eps);
}

HMatrix assemble_h(const BoundaryKernel& kernel, const CompressionConfig& config) {
  HMatrix h;
  h.tree_ = ClusterTree::build(kernel.points(), config.leaf_size);
  h.tree_.set_support([&](Index j) { return kernel.support_box(j); });
  h.blocks_ = BlockTree::build(h.tree_, h.tree_, config.eta);

  for (Index id : h.blocks_.leaves()) {
    const BlockNode& b = h.blocks_.nodes()[id];
    HLeaf leaf;
    leaf.row = b.row;
    leaf.col = b.col;
    leaf.admissible = b.admissible;
    const auto rows = members(h.tree_, b.row);
    const auto cols = members(h.tree_, b.col);
    if (b.admissible) {
      bool done = false;
      if (config.use_hca) {
        try {
          leaf.lowrank = hca_block(kernel, h.tree_, b.row, b.col, config.cheb_order, config.eps, config.eta);
          ++h.stats_.hca_blocks;
          done = true;
        } catch (const HcaBreakdown&) {
          ++h.stats_.aca_fallbacks;
        }
      }
      if (!done) {
        const KernelBlock eval(kernel, rows, cols);
        AcaResult res = aca(eval, config.eps, std::min(eval.rows(), eval.cols()) / 2);
        if (res.converged) {
          leaf.lowrank = truncate(res.block, config.eps);
        } else {
          ++h.stats_.dense_fallbacks;
          kernel.fill_block(rows, cols, leaf.dense);
        }
      }
    } else {
      kernel.fill_block(rows, cols, leaf.dense);
    }
    h.leaves_.push_back(std::move(leaf));
  }
  return h;
}

Eigen::VectorXd HMatrix::matvec(const Eigen::VectorXd& x) const {
  const Index n = size();
  if (x.size() != n) throw std::invalid_argument("H-matrix matvec: dimension mismatch");
  const auto& perm = tree_.permutation();
  Eigen::VectorXd xt(n), yt = Eigen::VectorXd::Zero(n);
  for (Index k = 0; k < n; ++k) xt[k] = x[perm[k]];
  for (const HLeaf& leaf : leaves_) {
    const ClusterNode& r = tree_.node(leaf.row);
    const ClusterNode& c = tree_.node(leaf.col);
    const auto xs = xt.segment(c.begin, c.size());
    auto ys = yt.segment(r.begin, r.size());
    if (leaf.is_lowrank()) {
      if (leaf.lowrank.rank() > 0) ys.noalias() += leaf.lowrank.a * (leaf.lowrank.b.transpose() * xs);
    } else {
      ys.noalias() += leaf.dense * xs;
    }
  }
  Eigen::VectorXd y(n);
  for (Index k = 0; k < n; ++k) y[perm[k]] = yt[k];
  return y;
}

Matrix HMatrix::to_dense() const {
  const Index n = size();
  Matrix m(n, n);
  for (Index j = 0; j < n; ++j) m.col(j) = matvec(Eigen::VectorXd::Unit(n, j));
  return m;
}

std::size_t HMatrix::storage_reals() const {
  std::size_t total = 0;
  for (const HLeaf& leaf : leaves_)
    total += leaf.is_lowrank() ? leaf.lowrank.num_reals() : static_cast<std::size_t>(leaf.dense.size());
  return total;
}

Index HMatrix::max_rank() const {
  Index k = 0;
  for (const HLeaf& leaf : leaves_)
    if (leaf.is_lowrank()) k = std::max(k, leaf.lowrank.rank());
  return k;
}

}  // namespace h2demag
