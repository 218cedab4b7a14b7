#pragma once

#include "h2demag/mesh.hpp"
#include "h2demag/solver.hpp"
#include "h2demag/sparse.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace h2demag {

/// One 3-vector per node (magnetisation, interpolated P1) or per tet (field).
using VectorField = std::vector<Point3>;

/// Rows are the constant gradients of the four P1 shape functions. Throws
/// MeshError when the tet is degenerate.
Eigen::Matrix<double, 4, 3> shape_gradients(const std::array<Point3, 4>& p);

/// Element matrix V * grad(phi_i) . grad(phi_j).
Eigen::Matrix4d element_stiffness(const std::array<Point3, 4>& p);

/// Global P1 Laplace stiffness. Degenerate tets raise MeshError naming the tet.
CsrMatrix assemble_stiffness(const TetMesh& mesh);

/// b_i = int M . grad(phi_i) for nodal M. This volume term carries both the
/// source div M and the Neumann flux M . n.
Vector assemble_u1_rhs(const TetMesh& mesh, const VectorField& m);

/// Zero-mean solution of the pure Neumann problem K u1 = b (deflated CG).
/// Throws SolverError if the iteration does not reach opts.tol.
SolveResult solve_u1(const CsrMatrix& stiffness, const Vector& b, const KrylovOptions& opts = {});

/// Harmonic extension of Dirichlet data given per boundary node (boundary
/// numbering): eliminates boundary rows and solves K_II u_I = -K_IB g by CG.
SolveResult solve_u2(const TetMesh& mesh, const CsrMatrix& stiffness, const Vector& boundary_values,
                     const KrylovOptions& opts = {});

/// Per-tet H = -grad u of the P1 interpolant of nodal u.
VectorField compute_field(const TetMesh& mesh, const Vector& u);

struct Energy {
  double total = 0.0;    // E = -1/2 int M . H dV (mu0 = Ms = 1)
  double density = 0.0;  // e_d = E / V
  double over_kd = 0.0;  // e_d / K_d with K_d = 1/2
};

/// Energy of nodal M in per-tet H; M is averaged to the tet centroid.
Energy magnetostatic_energy(const TetMesh& mesh, const VectorField& m, const VectorField& h);

/// Nodal magnetisation presets.
VectorField uniform_magnetization(const TetMesh& mesh, const Point3& direction);
/// Unit tangent e_phi = (-y, x, 0) / rho around the z axis; nodes on the axis
/// get zero.
VectorField azimuthal_magnetization(const TetMesh& mesh);

}  // namespace h2demag
