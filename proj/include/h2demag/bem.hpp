#pragma once

#include "h2demag/lowrank.hpp"
#include "h2demag/mesh.hpp"

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

namespace h2demag {

/// G(x, y) = -1 / (4 pi |x - y|). Throws std::domain_error for x == y.
double green(const Point3& x, const Point3& y);

/// Integrals over the planar triangle (a, b, c) of phi_k(y) dG(x, y)/dn_y for the
/// three linear nodal shape functions phi_k, evaluated in closed form. The
/// normal is (b-a)x(c-a) normalised. Points coplanar with the triangle give
/// exactly zero.
std::array<double, 3> double_layer_weights(const Point3& x, const Point3& a, const Point3& b,
                                           const Point3& c);

/// Single shape-function entry of double_layer_weights.
double double_layer_triangle(const Point3& x, const Point3& a, const Point3& b, const Point3& c,
                             int local_vertex);

/// Constant-density double layer of the triangle: signed solid angle / (4 pi).
double double_layer_constant(const Point3& x, const Point3& a, const Point3& b, const Point3& c);

/// Collocation discretisation of the boundary operator mapping u1 to u2 on a
/// closed surface,
///   m_ij = -sum_{T contains j} int_T phi_j dG(xi_i, .)/dn + (Psi_i / 4 pi - 1) delta_ij,
/// i.e. the normal derivative is taken with respect to the collocation point
/// xi_i. With this sign every row of m sums to -1 (a constant u1 yields u = 0).
/// Indices are boundary-node numbers.
class BoundaryKernel {
 public:
  BoundaryKernel(std::vector<Point3> points, const SurfaceMesh& surface,
                 std::vector<double> solid_angles);
  BoundaryKernel(const TetMesh& mesh);

  Index size() const { return static_cast<Index>(points_.size()); }
  const std::vector<Point3>& points() const { return points_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<double>& solid_angles() const { return solid_angles_; }
  /// Diagonal term Psi_i / (4 pi) - 1.
  double diagonal(Index i) const { return solid_angles_[i] / (4.0 * kPi) - 1.0; }
  /// Triangles containing node j.
  std::span<const Index> node_triangles(Index j) const {
    return {adj_.data() + adj_offsets_[j], adj_.data() + adj_offsets_[j + 1]};
  }
  /// Bounding box of the support of phi_j.
  Box support_box(Index j) const;

  double entry(Index i, Index j) const;

  /// Dense block on rows x cols (boundary indices). The diagonal term is added
  /// where a row index equals a column index.
  void fill_block(std::span<const Index> rows, std::span<const Index> cols, Matrix& out) const;

  /// Off-diagonal kernel (negated double-layer potentials) of the basis
  /// functions in `cols` at an arbitrary point x away from their supports.
  void collocate(const Point3& x, std::span<const Index> cols, Eigen::Ref<Eigen::VectorXd> out) const;

  /// Dense operator including the diagonal (N x N).
  Matrix dense() const;

 private:
  std::vector<Point3> points_;
  std::vector<Triangle> triangles_;
  std::vector<double> solid_angles_;
  std::vector<Index> adj_offsets_;
  std::vector<Index> adj_;
};

/// Block evaluator for m on a rows x cols index subset.
class KernelBlock final : public BlockEvaluator {
 public:
  KernelBlock(const BoundaryKernel& kernel, std::span<const Index> rows, std::span<const Index> cols)
      : kernel_(kernel), rows_(rows), cols_(cols) {}
  Index rows() const override { return static_cast<Index>(rows_.size()); }
  Index cols() const override { return static_cast<Index>(cols_.size()); }
  void row(Index i, Eigen::Ref<Eigen::VectorXd> out) const override;
  void col(Index j, Eigen::Ref<Eigen::VectorXd> out) const override;

 private:
  const BoundaryKernel& kernel_;
  std::span<const Index> rows_;
  std::span<const Index> cols_;
};

inline constexpr Index kDefaultDenseCap = 20000;

/// Raised when a dense operator is requested above the size cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense assembly of m (O(N^2) memory); refuses N above `cap`.
Matrix assemble_dense(const BoundaryKernel& kernel, Index cap = kDefaultDenseCap);

}  // namespace h2demag
