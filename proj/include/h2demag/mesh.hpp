#pragma once

#include "h2demag/geometry.hpp"

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace h2demag {

/// Raised for malformed or unsupported mesh input and for meshes that violate
/// the topological invariants (non-manifold surface, inverted tets).
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Triangle = std::array<Index, 3>;
using Tet = std::array<Index, 4>;

/// Closed, outward-oriented boundary triangulation. Triangle corners index the
/// boundary-node numbering of the owning TetMesh, not volume nodes.
struct SurfaceMesh {
  std::vector<Triangle> triangles;
  std::vector<Point3> normals;
  std::vector<double> areas;

  std::size_t size() const { return triangles.size(); }
  double total_area() const;
};

struct TetMesh {
  std::vector<Point3> nodes;
  std::vector<Tet> tets;
  /// Volume node index of each boundary node, ascending.
  std::vector<Index> boundary_nodes;
  /// Inverse of boundary_nodes; -1 for interior nodes.
  std::vector<Index> boundary_index;
  SurfaceMesh surface;

  Index num_nodes() const { return static_cast<Index>(nodes.size()); }
  Index num_tets() const { return static_cast<Index>(tets.size()); }
  Index num_boundary() const { return static_cast<Index>(boundary_nodes.size()); }
  bool is_boundary(Index node) const { return boundary_index.at(node) >= 0; }

  std::vector<Point3> boundary_points() const;
  double tet_volume(Index t) const;
  double volume() const;
};

/// Builds a mesh from raw connectivity: validates indices and orientation and
/// extracts the boundary surface.
TetMesh make_tet_mesh(std::vector<Point3> nodes, std::vector<Tet> tets);

/// Structured box [0,a]x[0,b]x[0,c] with nx*ny*nz cells, each split into 6 tets
/// around the cell's main diagonal.
TetMesh generate_prism_mesh(double a, double b, double c, int nx, int ny, int nz);

/// Ball of the given radius built from concentric icospheres. The surface is an
/// icosphere with `refinement` subdivisions; the number of radial layers is
/// 2^refinement.
TetMesh generate_sphere_mesh(double radius, int refinement);

/// Ball whose surface is a geodesic sphere: every icosahedron face is cut into
/// frequency^2 triangles (10 * frequency^2 + 2 surface nodes), with the given
/// number of radial layers.
TetMesh generate_geodesic_sphere_mesh(double radius, int frequency, int layers);

/// Torus of revolution around the z axis. The circular tube cross-section is a
/// polygon with n_poloidal sides and n_radial rings; n_toroidal stations go around
/// the axis.
TetMesh generate_torus_mesh(double major_radius, double minor_radius, int n_toroidal,
                            int n_poloidal, int n_radial);

/// Reads a Gmsh MSH 2.2 ASCII file containing 4-node tetrahedra.
TetMesh load_msh(const std::filesystem::path& path);

/// Writes the volume mesh as MSH 2.2 ASCII (nodes and tetrahedra only).
void save_msh(const TetMesh& mesh, const std::filesystem::path& path);

/// Boundary faces (faces owned by exactly one tet), oriented outward. Triangle
/// corners are returned as *volume* node indices.
std::vector<Triangle> extract_boundary_faces(const std::vector<Point3>& nodes,
                                             const std::vector<Tet>& tets);

/// Surface in the boundary numbering of `mesh` (what TetMesh::surface holds).
SurfaceMesh extract_surface(const TetMesh& mesh);

/// Interior solid angle at a node, summed over incident tets. 4*pi for interior
/// nodes.
double node_solid_angle(const TetMesh& mesh, Index node);

/// Solid angle at every boundary node, in boundary numbering.
std::vector<double> boundary_solid_angles(const TetMesh& mesh);

/// Number of distinct surface edges; every edge must have exactly two triangles.
/// Throws MeshError otherwise.
Index check_surface_manifold(const SurfaceMesh& surface);

}  // namespace h2demag
