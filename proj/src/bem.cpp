#include "h2demag/bem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace h2demag {

double green(const Point3& x, const Point3& y) {
  const double r = (x - y).norm();
  if (r == 0.0) throw std::domain_error("green: coincident points");
  return -1.0 / (4.0 * kPi * r);
}

std::array<double, 3> double_layer_weights(const Point3& x, const Point3& a, const Point3& b,
                                           const Point3& c) {
  const std::array<const Point3*, 3> v{&a, &b, &c};
  const Point3 cr = (b - a).cross(c - a);
  const double twice_area = cr.norm();
  if (!(twice_area > 0.0)) throw std::invalid_argument("double layer: degenerate triangle");
  const Point3 n = cr / twice_area;

  std::array<double, 3> rho;
  for (int k = 0; k < 3; ++k) rho[k] = (*v[k] - x).norm();
  const double h = n.dot(x - a);
  const double scale = std::max({rho[0], rho[1], rho[2]});
  if (std::abs(h) <= 1e-12 * scale) return {0.0, 0.0, 0.0};

  const double omega = triangle_solid_angle(x, a, b, c);
  const Point3 p = x - h * n;

  // Edge k runs from v[k] to v[k+1]; nu is its outward in-plane normal and
  // log_term the line integral of 1/r along it.
  std::array<Point3, 3> nu;
  std::array<double, 3> log_term;
  for (int k = 0; k < 3; ++k) {
    const Point3 e = *v[(k + 1) % 3] - *v[k];
    const double s = e.norm();
    nu[k] = e.cross(n) / s;
    const double sum = rho[k] + rho[(k + 1) % 3];
    log_term[k] = std::log((sum + s) / (sum - s));
  }

  std::array<double, 3> w;
  for (int j = 0; j < 3; ++j) {
    const Point3& p1 = *v[(j + 1) % 3];
    const Point3& p2 = *v[(j + 2) % 3];
    const Point3 opposite = p2 - p1;
    const double phi_p = opposite.cross(p - p1).dot(n) / twice_area;
    const Point3 grad = n.cross(opposite) / twice_area;
    double edge_sum = 0.0;
    for (int k = 0; k < 3; ++k) edge_sum += grad.dot(nu[k]) * log_term[k];
    w[j] = (phi_p * omega + h * edge_sum) / (4.0 * kPi);
  }
  return w;
}

double double_layer_triangle(const Point3& x, const Point3& a, const Point3& b, const Point3& c,
                             int local_vertex) {
  if (local_vertex < 0 || local_vertex > 2) throw std::out_of_range("local vertex must be 0, 1 or 2");
  return double_layer_weights(x, a, b, c)[local_vertex];
}

double double_layer_constant(const Point3& x, const Point3& a, const Point3& b, const Point3& c) {
  return triangle_solid_angle(x, a, b, c) / (4.0 * kPi);
}

BoundaryKernel::BoundaryKernel(std::vector<Point3> points, const SurfaceMesh& surface,
                               std::vector<double> solid_angles)
    : points_(std::move(points)), triangles_(surface.triangles), solid_angles_(std::move(solid_angles)) {
  const Index n = size();
  if (static_cast<Index>(solid_angles_.size()) != n)
    throw std::invalid_argument("boundary kernel: one solid angle per boundary node required");
  adj_offsets_.assign(n + 1, 0);
  for (const Triangle& t : triangles_)
    for (Index v : t) {
      if (v < 0 || v >= n) throw std::invalid_argument("boundary kernel: triangle index out of range");
      ++adj_offsets_[v + 1];
    }
  for (Index i = 0; i < n; ++i) adj_offsets_[i + 1] += adj_offsets_[i];
  adj_.resize(adj_offsets_[n]);
  std::vector<Index> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (Index t = 0; t < static_cast<Index>(triangles_.size()); ++t)
    for (Index v : triangles_[t]) adj_[fill[v]++] = t;
}

BoundaryKernel::BoundaryKernel(const TetMesh& mesh)
    : BoundaryKernel(mesh.boundary_points(), mesh.surface, boundary_solid_angles(mesh)) {}

Box BoundaryKernel::support_box(Index j) const {
  Box b;
  b.extend(points_[j]);
  for (Index t : node_triangles(j))
    for (Index v : triangles_[t]) b.extend(points_[v]);
  return b;
}

namespace {

int local_index(const Triangle& t, Index node) {
  for (int k = 0; k < 3; ++k)
    if (t[k] == node) return k;
  return -1;
}

struct TriangleUse {
  Index triangle;
  int local;
  Index col;  // position in the caller's column list
};

std::vector<TriangleUse> gather_triangles(const BoundaryKernel& kernel, std::span<const Index> cols) {
  std::vector<TriangleUse> uses;
  for (Index c = 0; c < static_cast<Index>(cols.size()); ++c)
    for (Index t : kernel.node_triangles(cols[c]))
      uses.push_back({t, local_index(kernel.triangles()[t], cols[c]), c});
  std::sort(uses.begin(), uses.end(),
            [](const TriangleUse& x, const TriangleUse& y) { return x.triangle < y.triangle; });
  return uses;
}

// Accumulates the operator kernel (negated double-layer weights) seen from x
// into out[col]; triangles having
// `skip_node` as a corner are coplanar with x and contribute nothing.
template <class Out>
void accumulate(const BoundaryKernel& kernel, const std::vector<TriangleUse>& uses, const Point3& x,
                Index skip_node, Out&& out) {
  const auto& pts = kernel.points();
  for (std::size_t k = 0; k < uses.size();) {
    std::size_t e = k + 1;
    while (e < uses.size() && uses[e].triangle == uses[k].triangle) ++e;
    const Triangle& t = kernel.triangles()[uses[k].triangle];
    if (local_index(t, skip_node) < 0) {
      const auto w = double_layer_weights(x, pts[t[0]], pts[t[1]], pts[t[2]]);
      for (std::size_t q = k; q < e; ++q) out(uses[q].col) -= w[uses[q].local];
    }
    k = e;
  }
}

}  // namespace

double BoundaryKernel::entry(Index i, Index j) const {
  double v = (i == j) ? diagonal(i) : 0.0;
  for (Index t : node_triangles(j)) {
    const Triangle& tri = triangles_[t];
    if (local_index(tri, i) >= 0) continue;
    v -= double_layer_weights(points_[i], points_[tri[0]], points_[tri[1]], points_[tri[2]])[local_index(tri, j)];
  }
  return v;
}

void BoundaryKernel::fill_block(std::span<const Index> rows, std::span<const Index> cols,
                                Matrix& out) const {
  out.setZero(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  const auto uses = gather_triangles(*this, cols);
  std::vector<std::pair<Index, Index>> col_pos;
  col_pos.reserve(cols.size());
  for (Index c = 0; c < static_cast<Index>(cols.size()); ++c) col_pos.emplace_back(cols[c], c);
  std::sort(col_pos.begin(), col_pos.end());

  for (Index r = 0; r < static_cast<Index>(rows.size()); ++r) {
    const Index i = rows[r];
    accumulate(*this, uses, points_[i], i, [&](Index c) -> double& { return out(r, c); });
    const auto it = std::lower_bound(col_pos.begin(), col_pos.end(), std::pair<Index, Index>{i, -1});
    if (it != col_pos.end() && it->first == i) out(r, it->second) += diagonal(i);
  }
}

void BoundaryKernel::collocate(const Point3& x, std::span<const Index> cols,
                               Eigen::Ref<Eigen::VectorXd> out) const {
  out.setZero();
  const auto uses = gather_triangles(*this, cols);
  accumulate(*this, uses, x, -1, [&](Index c) -> double& { return out[c]; });
}

Matrix BoundaryKernel::dense() const {
  const Index n = size();
  Matrix m = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (const Triangle& t : triangles_) {
      if (local_index(t, i) >= 0) continue;
      const auto w = double_layer_weights(points_[i], points_[t[0]], points_[t[1]], points_[t[2]]);
      for (int k = 0; k < 3; ++k) m(i, t[k]) -= w[k];
    }
    m(i, i) += diagonal(i);
  }
  return m;
}

void KernelBlock::row(Index i, Eigen::Ref<Eigen::VectorXd> out) const {
  Matrix tmp;
  kernel_.fill_block(rows_.subspan(i, 1), cols_, tmp);
  out = tmp.row(0).transpose();
}

void KernelBlock::col(Index j, Eigen::Ref<Eigen::VectorXd> out) const {
  const Index node = cols_[j];
  for (Index r = 0; r < static_cast<Index>(rows_.size()); ++r) out[r] = kernel_.entry(rows_[r], node);
}

Matrix assemble_dense(const BoundaryKernel& kernel, Index cap) {
  if (kernel.size() > cap)
    throw CapacityError("dense boundary operator with N = " + std::to_string(kernel.size()) +
                        " exceeds the cap of " + std::to_string(cap) +
                        " nodes; use the h2 backend instead");
  return kernel.dense();
}

}  // namespace h2demag
