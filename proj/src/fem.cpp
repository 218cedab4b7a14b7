#include "h2demag/fem.hpp"

#include <cmath>
#include <string>

namespace h2demag {

namespace {

std::array<Point3, 4> corners(const TetMesh& mesh, Index t) {
  const Tet& tet = mesh.tets[t];
  return {mesh.nodes[tet[0]], mesh.nodes[tet[1]], mesh.nodes[tet[2]], mesh.nodes[tet[3]]};
}

double signed_volume(const std::array<Point3, 4>& p) { return tet_signed_volume(p[0], p[1], p[2], p[3]); }

double max_edge(const std::array<Point3, 4>& p) {
  double h = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) h = std::max(h, (p[a] - p[b]).norm());
  return h;
}

bool degenerate(const std::array<Point3, 4>& p) {
  const double h = max_edge(p);
  return !(std::abs(signed_volume(p)) > 1e-14 * h * h * h);
}

}  // namespace

Eigen::Matrix<double, 4, 3> shape_gradients(const std::array<Point3, 4>& p) {
  if (degenerate(p)) throw MeshError("degenerate tetrahedron (zero volume)");
  Eigen::Matrix3d j;
  j.col(0) = p[1] - p[0];
  j.col(1) = p[2] - p[0];
  j.col(2) = p[3] - p[0];
  const Eigen::Matrix3d inv = j.inverse();
  Eigen::Matrix<double, 4, 3> g;
  g.bottomRows<3>() = inv;
  g.row(0) = -inv.colwise().sum();
  return g;
}

Eigen::Matrix4d element_stiffness(const std::array<Point3, 4>& p) {
  const auto g = shape_gradients(p);
  return std::abs(signed_volume(p)) * g * g.transpose();
}

CsrMatrix assemble_stiffness(const TetMesh& mesh) {
  std::vector<CsrMatrix::Triplet> trip;
  trip.reserve(16 * mesh.tets.size());
  for (Index t = 0; t < mesh.num_tets(); ++t) {
    const auto p = corners(mesh, t);
    if (degenerate(p)) throw MeshError("degenerate tetrahedron " + std::to_string(t) + " (zero volume)");
    const Eigen::Matrix4d k = element_stiffness(p);
    const Tet& tet = mesh.tets[t];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) trip.push_back({tet[a], tet[b], k(a, b)});
  }
  return CsrMatrix::from_triplets(mesh.num_nodes(), std::move(trip));
}

Vector assemble_u1_rhs(const TetMesh& mesh, const VectorField& m) {
  if (static_cast<Index>(m.size()) != mesh.num_nodes())
    throw std::invalid_argument("magnetisation must have one vector per node");
  Vector b = Vector::Zero(mesh.num_nodes());
  for (Index t = 0; t < mesh.num_tets(); ++t) {
    const auto p = corners(mesh, t);
    const auto g = shape_gradients(p);
    const Tet& tet = mesh.tets[t];
    const Point3 mc = 0.25 * (m[tet[0]] + m[tet[1]] + m[tet[2]] + m[tet[3]]);
    const Eigen::Vector4d local = std::abs(signed_volume(p)) * (g * mc);
    for (int a = 0; a < 4; ++a) b[tet[a]] += local[a];
  }
  return b;
}

SolveResult solve_u1(const CsrMatrix& stiffness, const Vector& b, const KrylovOptions& opts) {
  SolveResult res = cg_solve(stiffness, b, opts, true);
  if (!res.report.converged)
    throw SolverError("u1 solve did not converge: residual " + std::to_string(res.report.residual) + " after " +
                      std::to_string(res.report.iterations) + " iterations");
  return res;
}

SolveResult solve_u2(const TetMesh& mesh, const CsrMatrix& stiffness, const Vector& boundary_values,
                     const KrylovOptions& opts) {
  if (boundary_values.size() != mesh.num_boundary())
    throw std::invalid_argument("Dirichlet data must have one value per boundary node");
  Vector g = Vector::Zero(mesh.num_nodes());
  for (Index k = 0; k < mesh.num_boundary(); ++k) g[mesh.boundary_nodes[k]] = boundary_values[k];

  std::vector<Index> interior;
  for (Index i = 0; i < mesh.num_nodes(); ++i)
    if (!mesh.is_boundary(i)) interior.push_back(i);
  SolveResult out;
  out.x = g;
  out.report.converged = true;
  if (interior.empty()) return out;

  const Vector kg = stiffness * g;
  Vector rhs(static_cast<Index>(interior.size()));
  for (Index k = 0; k < rhs.size(); ++k) rhs[k] = -kg[interior[k]];
  const CsrMatrix kii = stiffness.submatrix(interior);
  SolveResult inner = cg_solve(kii, rhs, opts, false);
  if (!inner.report.converged)
    throw SolverError("u2 solve did not converge: residual " + std::to_string(inner.report.residual) + " after " +
                      std::to_string(inner.report.iterations) + " iterations");
  for (Index k = 0; k < rhs.size(); ++k) out.x[interior[k]] = inner.x[k];
  out.report = inner.report;
  return out;
}

VectorField compute_field(const TetMesh& mesh, const Vector& u) {
  if (u.size() != mesh.num_nodes()) throw std::invalid_argument("potential must have one value per node");
  VectorField h(mesh.tets.size());
  for (Index t = 0; t < mesh.num_tets(); ++t) {
    const auto g = shape_gradients(corners(mesh, t));
    const Tet& tet = mesh.tets[t];
    const Eigen::Vector4d ul(u[tet[0]], u[tet[1]], u[tet[2]], u[tet[3]]);
    h[t] = -(g.transpose() * ul);
  }
  return h;
}

Energy magnetostatic_energy(const TetMesh& mesh, const VectorField& m, const VectorField& h) {
  if (static_cast<Index>(m.size()) != mesh.num_nodes() || static_cast<Index>(h.size()) != mesh.num_tets())
    throw std::invalid_argument("energy: field sizes do not match the mesh");
  double e = 0.0, vol = 0.0;
  for (Index t = 0; t < mesh.num_tets(); ++t) {
    const Tet& tet = mesh.tets[t];
    const double v = mesh.tet_volume(t);
    const Point3 mc = 0.25 * (m[tet[0]] + m[tet[1]] + m[tet[2]] + m[tet[3]]);
    e += -0.5 * v * mc.dot(h[t]);
    vol += v;
  }
  Energy out;
  out.total = e;
  out.density = e / vol;
  out.over_kd = out.density / 0.5;
  return out;
}

VectorField uniform_magnetization(const TetMesh& mesh, const Point3& direction) {
  if (!(direction.norm() > 0.0)) throw std::invalid_argument("magnetisation direction must be non-zero");
  return VectorField(mesh.nodes.size(), direction.normalized());
}

VectorField azimuthal_magnetization(const TetMesh& mesh) {
  VectorField m(mesh.nodes.size(), Point3::Zero());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Point3& p = mesh.nodes[i];
    const double rho = std::hypot(p.x(), p.y());
    if (rho > 0.0) m[i] = Point3(-p.y() / rho, p.x() / rho, 0.0);
  }
  return m;
}

}  // namespace h2demag
