#include "h2demag/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace h2demag {

double triangle_solid_angle(const Point3& apex, const Point3& a, const Point3& b, const Point3& c) {
  const Point3 r1 = a - apex;
  const Point3 r2 = b - apex;
  const Point3 r3 = c - apex;
  const double l1 = r1.norm();
  const double l2 = r2.norm();
  const double l3 = r3.norm();
  const double det = r1.dot(r2.cross(r3));
  const double den = l1 * l2 * l3 + r1.dot(r2) * l3 + r1.dot(r3) * l2 + r2.dot(r3) * l1;
  return 2.0 * std::atan2(det, den);
}

double SurfaceMesh::total_area() const {
  return std::accumulate(areas.begin(), areas.end(), 0.0);
}

std::vector<Point3> TetMesh::boundary_points() const {
  std::vector<Point3> pts;
  pts.reserve(boundary_nodes.size());
  for (Index v : boundary_nodes) pts.push_back(nodes[v]);
  return pts;
}

double TetMesh::tet_volume(Index t) const {
  const Tet& k = tets.at(t);
  return tet_signed_volume(nodes[k[0]], nodes[k[1]], nodes[k[2]], nodes[k[3]]);
}

double TetMesh::volume() const {
  double v = 0.0;
  for (Index t = 0; t < num_tets(); ++t) v += tet_volume(t);
  return v;
}

namespace {

// Local faces of a tet, each listed with the vertex opposite to it.
constexpr std::array<std::array<int, 4>, 4> kTetFaces{{
    {1, 2, 3, 0},
    {0, 2, 3, 1},
    {0, 1, 3, 2},
    {0, 1, 2, 3},
}};

struct FaceRecord {
  std::array<Index, 3> key;  // sorted corners
  Triangle face;             // corners in tet order
  Index opposite;
};

void orient_positive(const std::vector<Point3>& nodes, Tet& t) {
  if (tet_signed_volume(nodes[t[0]], nodes[t[1]], nodes[t[2]], nodes[t[3]]) < 0.0)
    std::swap(t[2], t[3]);
}

// Splits the triangular prism bottom[k] -- top[k] into three tets. Each quad face
// is cut along the diagonal through its lowest-numbered vertex, so neighbouring
// prisms always agree on their shared faces.
void split_prism(std::array<Index, 3> bottom, std::array<Index, 3> top,
                 const std::vector<Point3>& nodes, std::vector<Tet>& out) {
  const Index lo_b = *std::min_element(bottom.begin(), bottom.end());
  const Index lo_t = *std::min_element(top.begin(), top.end());
  if (lo_t < lo_b) std::swap(bottom, top);
  const auto first = std::min_element(bottom.begin(), bottom.end()) - bottom.begin();
  std::rotate(bottom.begin(), bottom.begin() + first, bottom.end());
  std::rotate(top.begin(), top.begin() + first, top.end());

  const Index a = bottom[0], b = bottom[1], c = bottom[2];
  const Index a2 = top[0], b2 = top[1], c2 = top[2];
  std::array<Tet, 3> tets;
  tets[0] = {a, a2, b2, c2};
  if (std::min(b, c2) < std::min(c, b2)) {
    tets[1] = {a, b, c, c2};
    tets[2] = {a, b, c2, b2};
  } else {
    tets[1] = {a, b, c, b2};
    tets[2] = {a, c, c2, b2};
  }
  for (Tet& t : tets) {
    orient_positive(nodes, t);
    out.push_back(t);
  }
}

}  // namespace

std::vector<Triangle> extract_boundary_faces(const std::vector<Point3>& nodes,
                                             const std::vector<Tet>& tets) {
  std::vector<FaceRecord> faces;
  faces.reserve(4 * tets.size());
  for (const Tet& t : tets) {
    for (const auto& lf : kTetFaces) {
      FaceRecord r;
      r.face = {t[lf[0]], t[lf[1]], t[lf[2]]};
      r.key = r.face;
      std::sort(r.key.begin(), r.key.end());
      r.opposite = t[lf[3]];
      faces.push_back(r);
    }
  }
  std::sort(faces.begin(), faces.end(),
            [](const FaceRecord& x, const FaceRecord& y) { return x.key < y.key; });

  std::vector<Triangle> boundary;
  for (std::size_t i = 0; i < faces.size();) {
    std::size_t j = i + 1;
    while (j < faces.size() && faces[j].key == faces[i].key) ++j;
    const std::size_t count = j - i;
    if (count > 2) {
      std::ostringstream msg;
      msg << "non-manifold mesh: face (" << faces[i].key[0] << ", " << faces[i].key[1] << ", "
          << faces[i].key[2] << ") is shared by " << count << " tets";
      throw MeshError(msg.str());
    }
    if (count == 1) {
      Triangle f = faces[i].face;
      // Outward means the opposite vertex lies on the negative side of the normal.
      if (tet_signed_volume(nodes[f[0]], nodes[f[1]], nodes[f[2]], nodes[faces[i].opposite]) > 0.0)
        std::swap(f[1], f[2]);
      boundary.push_back(f);
    }
    i = j;
  }
  return boundary;
}

namespace {

SurfaceMesh surface_from_faces(const std::vector<Point3>& nodes, const std::vector<Triangle>& faces,
                               const std::vector<Index>& boundary_index) {
  SurfaceMesh s;
  s.triangles.reserve(faces.size());
  s.normals.reserve(faces.size());
  s.areas.reserve(faces.size());
  for (const Triangle& f : faces) {
    const Point3 n = (nodes[f[1]] - nodes[f[0]]).cross(nodes[f[2]] - nodes[f[0]]);
    const double twice_area = n.norm();
    if (!(twice_area > 0.0)) throw MeshError("degenerate boundary triangle");
    s.triangles.push_back({boundary_index[f[0]], boundary_index[f[1]], boundary_index[f[2]]});
    s.normals.push_back(n / twice_area);
    s.areas.push_back(0.5 * twice_area);
  }
  return s;
}

}  // namespace

SurfaceMesh extract_surface(const TetMesh& mesh) {
  return surface_from_faces(mesh.nodes, extract_boundary_faces(mesh.nodes, mesh.tets),
                            mesh.boundary_index);
}

Index check_surface_manifold(const SurfaceMesh& surface) {
  std::map<std::pair<Index, Index>, int> edges;
  for (const Triangle& t : surface.triangles)
    for (int k = 0; k < 3; ++k) {
      Index u = t[k], v = t[(k + 1) % 3];
      if (u > v) std::swap(u, v);
      ++edges[{u, v}];
    }
  for (const auto& [e, n] : edges)
    if (n != 2) {
      std::ostringstream msg;
      msg << "non-manifold surface: edge (" << e.first << ", " << e.second << ") has " << n
          << " triangles";
      throw MeshError(msg.str());
    }
  return static_cast<Index>(edges.size());
}

TetMesh make_tet_mesh(std::vector<Point3> nodes, std::vector<Tet> tets) {
  const Index n = static_cast<Index>(nodes.size());
  if (tets.empty()) throw MeshError("mesh has no tetrahedra");
  for (const Point3& p : nodes)
    if (!p.allFinite()) throw MeshError("non-finite node coordinate");
  for (std::size_t t = 0; t < tets.size(); ++t) {
    for (Index v : tets[t])
      if (v < 0 || v >= n) throw MeshError("tet " + std::to_string(t) + " has an invalid node index");
    const Tet& k = tets[t];
    const double vol = tet_signed_volume(nodes[k[0]], nodes[k[1]], nodes[k[2]], nodes[k[3]]);
    if (!(vol > 0.0))
      throw MeshError("tet " + std::to_string(t) + (vol < 0.0 ? " is inverted" : " is degenerate"));
  }

  TetMesh m;
  m.nodes = std::move(nodes);
  m.tets = std::move(tets);
  const auto faces = extract_boundary_faces(m.nodes, m.tets);
  m.boundary_index.assign(m.nodes.size(), -1);
  for (const Triangle& f : faces)
    for (Index v : f) m.boundary_index[v] = 0;
  for (Index v = 0; v < n; ++v)
    if (m.boundary_index[v] == 0) {
      m.boundary_index[v] = static_cast<Index>(m.boundary_nodes.size());
      m.boundary_nodes.push_back(v);
    }
  m.surface = surface_from_faces(m.nodes, faces, m.boundary_index);
  check_surface_manifold(m.surface);
  return m;
}

TetMesh generate_prism_mesh(double a, double b, double c, int nx, int ny, int nz) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw std::invalid_argument("prism dimensions must be positive");
  if (nx < 1 || ny < 1 || nz < 1) throw std::invalid_argument("prism subdivisions must be at least 1");

  const auto id = [&](int i, int j, int k) -> Index {
    return (static_cast<Index>(k) * (ny + 1) + j) * (nx + 1) + i;
  };
  std::vector<Point3> nodes;
  nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1) * (nz + 1));
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        nodes.emplace_back(a * i / nx, b * j / ny, c * k / nz);

  // Kuhn split: one tet per monotone path from corner 000 to 111.
  constexpr std::array<std::array<int, 3>, 6> kPaths{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::vector<Tet> tets;
  tets.reserve(6 * static_cast<std::size_t>(nx) * ny * nz);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        for (const auto& path : kPaths) {
          std::array<int, 3> off{0, 0, 0};
          Tet t;
          t[0] = id(i, j, k);
          for (int s = 0; s < 3; ++s) {
            off[path[s]] = 1;
            t[s + 1] = id(i + off[0], j + off[1], k + off[2]);
          }
          orient_positive(nodes, t);
          tets.push_back(t);
        }
  return make_tet_mesh(std::move(nodes), std::move(tets));
}

namespace {

struct Icosphere {
  std::vector<Point3> vertices;  // unit length
  std::vector<Triangle> faces;   // counter-clockwise seen from outside
};

Icosphere make_icosphere(int refinement) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  Icosphere ico;
  ico.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                  {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (Point3& v : ico.vertices) v.normalize();
  ico.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
               {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
               {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int level = 0; level < refinement; ++level) {
    std::map<std::pair<Index, Index>, Index> midpoint;
    const auto mid = [&](Index u, Index v) {
      const auto key = std::minmax(u, v);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      ico.vertices.push_back((ico.vertices[u] + ico.vertices[v]).normalized());
      const Index m = static_cast<Index>(ico.vertices.size()) - 1;
      midpoint.emplace(key, m);
      return m;
    };
    std::vector<Triangle> next;
    next.reserve(4 * ico.faces.size());
    for (const Triangle& f : ico.faces) {
      const Index ab = mid(f[0], f[1]);
      const Index bc = mid(f[1], f[2]);
      const Index ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    ico.faces = std::move(next);
  }
  return ico;
}

// Icosahedron faces subdivided into frequency^2 flat triangles, then projected
// to the unit sphere. Shared edge points are keyed by their barycentric weights
// on the icosahedron vertices.
Icosphere make_geodesic(int frequency) {
  const Icosphere base = make_icosphere(0);
  Icosphere geo;
  std::map<std::vector<std::pair<Index, int>>, Index> index;
  const int n = frequency;
  for (const Triangle& f : base.faces) {
    std::vector<Index> grid((n + 1) * (n + 1), -1);
    const auto at = [&](int i, int j) -> Index& { return grid[i * (n + 1) + j]; };
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n; ++j) {
        std::vector<std::pair<Index, int>> key;
        const int w[3] = {n - i - j, i, j};
        for (int c = 0; c < 3; ++c)
          if (w[c] > 0) key.emplace_back(f[c], w[c]);
        std::sort(key.begin(), key.end());
        auto [it, fresh] = index.emplace(key, static_cast<Index>(geo.vertices.size()));
        if (fresh) {
          Point3 p = Point3::Zero();
          for (int c = 0; c < 3; ++c) p += w[c] * base.vertices[f[c]];
          geo.vertices.push_back(p.normalized());
        }
        at(i, j) = it->second;
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; i + j < n; ++j) {
        geo.faces.push_back({at(i, j), at(i + 1, j), at(i, j + 1)});
        if (i + j + 1 < n) geo.faces.push_back({at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)});
      }
  }
  return geo;
}

// Ball made of `layers` scaled copies of a unit spherical shell triangulation:
// a tet fan to the centre inside the first shell, split prisms between shells.
TetMesh ball_from_shell(const Icosphere& shell, double radius, int layers) {
  const Index nv = static_cast<Index>(shell.vertices.size());
  std::vector<Point3> nodes;
  nodes.reserve(1 + nv * layers);
  nodes.emplace_back(0.0, 0.0, 0.0);
  for (int l = 1; l <= layers; ++l) {
    // The outermost layer uses the radius directly so surface nodes are exact.
    const double r = (l == layers) ? radius : radius * l / layers;
    for (const Point3& v : shell.vertices) nodes.push_back(r * v);
  }
  const auto id = [&](int layer, Index v) { return 1 + (layer - 1) * nv + v; };

  std::vector<Tet> tets;
  tets.reserve(shell.faces.size() * (3 * layers - 2));
  for (const Triangle& f : shell.faces) {
    Tet t{0, id(1, f[0]), id(1, f[1]), id(1, f[2])};
    orient_positive(nodes, t);
    tets.push_back(t);
    for (int l = 1; l < layers; ++l)
      split_prism({id(l, f[0]), id(l, f[1]), id(l, f[2])},
                  {id(l + 1, f[0]), id(l + 1, f[1]), id(l + 1, f[2])}, nodes, tets);
  }
  return make_tet_mesh(std::move(nodes), std::move(tets));
}

}  // namespace

TetMesh generate_sphere_mesh(double radius, int refinement) {
  if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
  if (refinement < 0) throw std::invalid_argument("sphere refinement must be non-negative");
  if (refinement > 8) throw std::invalid_argument("sphere refinement above 8 is not supported");
  return ball_from_shell(make_icosphere(refinement), radius, 1 << refinement);
}

TetMesh generate_geodesic_sphere_mesh(double radius, int frequency, int layers) {
  if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
  if (frequency < 1 || frequency > 1000) throw std::invalid_argument("geodesic frequency must be in [1, 1000]");
  if (layers < 1) throw std::invalid_argument("sphere needs at least one radial layer");
  return ball_from_shell(make_geodesic(frequency), radius, layers);
}

TetMesh generate_torus_mesh(double major_radius, double minor_radius, int n_toroidal,
                            int n_poloidal, int n_radial) {
  if (!(minor_radius > 0.0)) throw std::invalid_argument("torus minor radius must be positive");
  if (!(major_radius > minor_radius))
    throw std::invalid_argument("torus major radius must exceed the minor radius");
  if (n_toroidal < 3 || n_poloidal < 3 || n_radial < 1)
    throw std::invalid_argument("torus subdivisions must be at least (3, 3, 1)");

  // Cross-section: centre node plus n_radial rings of n_poloidal nodes.
  const Index per_ring = n_poloidal;
  const Index per_station = 1 + static_cast<Index>(n_radial) * per_ring;
  const auto ring = [&](int j, Index p) { return 1 + (j - 1) * per_ring + (p % per_ring); };
  std::vector<Triangle> section;
  for (Index p = 0; p < per_ring; ++p) {
    section.push_back({0, ring(1, p), ring(1, p + 1)});
    for (int j = 1; j < n_radial; ++j) {
      section.push_back({ring(j, p), ring(j + 1, p), ring(j + 1, p + 1)});
      section.push_back({ring(j, p), ring(j + 1, p + 1), ring(j, p + 1)});
    }
  }

  std::vector<Point3> nodes;
  nodes.reserve(per_station * n_toroidal);
  for (int i = 0; i < n_toroidal; ++i) {
    const double phi = 2.0 * kPi * i / n_toroidal;
    const double cp = std::cos(phi), sp = std::sin(phi);
    nodes.emplace_back(major_radius * cp, major_radius * sp, 0.0);
    for (int j = 1; j <= n_radial; ++j) {
      const double rho = (j == n_radial) ? minor_radius : minor_radius * j / n_radial;
      for (Index p = 0; p < per_ring; ++p) {
        const double theta = 2.0 * kPi * static_cast<double>(p) / n_poloidal;
        const double s = major_radius + rho * std::cos(theta);
        nodes.emplace_back(s * cp, s * sp, rho * std::sin(theta));
      }
    }
  }

  std::vector<Tet> tets;
  tets.reserve(3 * section.size() * n_toroidal);
  for (int i = 0; i < n_toroidal; ++i) {
    const Index lo = i * per_station;
    const Index hi = ((i + 1) % n_toroidal) * per_station;
    for (const Triangle& f : section)
      split_prism({lo + f[0], lo + f[1], lo + f[2]}, {hi + f[0], hi + f[1], hi + f[2]}, nodes, tets);
  }
  return make_tet_mesh(std::move(nodes), std::move(tets));
}

double node_solid_angle(const TetMesh& mesh, Index node) {
  if (node < 0 || node >= mesh.num_nodes())
    throw std::out_of_range("node index " + std::to_string(node) + " out of range");
  double total = 0.0;
  for (const Tet& t : mesh.tets)
    for (int k = 0; k < 4; ++k)
      if (t[k] == node) {
        const auto& lf = kTetFaces[k];
        total += std::abs(triangle_solid_angle(mesh.nodes[node], mesh.nodes[t[lf[0]]],
                                               mesh.nodes[t[lf[1]]], mesh.nodes[t[lf[2]]]));
      }
  return total;
}

std::vector<double> boundary_solid_angles(const TetMesh& mesh) {
  std::vector<double> psi(mesh.boundary_nodes.size(), 0.0);
  for (const Tet& t : mesh.tets)
    for (int k = 0; k < 4; ++k) {
      const Index b = mesh.boundary_index[t[k]];
      if (b < 0) continue;
      const auto& lf = kTetFaces[k];
      psi[b] += std::abs(triangle_solid_angle(mesh.nodes[t[k]], mesh.nodes[t[lf[0]]],
                                              mesh.nodes[t[lf[1]]], mesh.nodes[t[lf[2]]]));
    }
  return psi;
}

namespace {

std::string next_token(std::istream& in, const char* context) {
  std::string tok;
  if (!(in >> tok)) throw MeshError(std::string("unexpected end of file while reading ") + context);
  return tok;
}

void expect(std::istream& in, const std::string& tag) {
  const std::string tok = next_token(in, tag.c_str());
  if (tok != tag) throw MeshError("expected " + tag + ", found " + tok);
}

}  // namespace

TetMesh load_msh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path.string());

  std::unordered_map<long long, Point3> coords;
  std::vector<std::array<long long, 4>> raw_tets;
  bool have_format = false, have_nodes = false, have_elements = false;

  std::string section;
  while (in >> section) {
    if (section == "$MeshFormat") {
      const std::string version = next_token(in, "$MeshFormat");
      int file_type = 0, data_size = 0;
      if (!(in >> file_type >> data_size)) throw MeshError("malformed $MeshFormat section");
      if (version.rfind("2.", 0) != 0 && version != "2")
        throw MeshError("unsupported MSH version " + version + " (only 2.2 ASCII is supported)");
      if (file_type != 0) throw MeshError("binary MSH files are not supported");
      expect(in, "$EndMeshFormat");
      have_format = true;
    } else if (section == "$Nodes") {
      long long n = 0;
      if (!(in >> n) || n < 0) throw MeshError("malformed $Nodes header");
      for (long long i = 0; i < n; ++i) {
        long long tag;
        double x, y, z;
        if (!(in >> tag >> x >> y >> z)) throw MeshError("malformed node line in $Nodes");
        coords[tag] = Point3(x, y, z);
      }
      expect(in, "$EndNodes");
      have_nodes = true;
    } else if (section == "$Elements") {
      long long n = 0;
      if (!(in >> n) || n < 0) throw MeshError("malformed $Elements header");
      for (long long i = 0; i < n; ++i) {
        long long tag;
        int type, ntags;
        if (!(in >> tag >> type >> ntags) || ntags < 0) throw MeshError("malformed element line");
        for (int k = 0; k < ntags; ++k) next_token(in, "element tags");
        if (type == 4) {
          std::array<long long, 4> v;
          if (!(in >> v[0] >> v[1] >> v[2] >> v[3])) throw MeshError("malformed tetrahedron");
          raw_tets.push_back(v);
        } else if (type == 2) {
          long long ignored;
          for (int k = 0; k < 3; ++k)
            if (!(in >> ignored)) throw MeshError("malformed triangle");
        } else {
          throw MeshError("unsupported element type " + std::to_string(type) +
                          " (only tetrahedra and triangles are accepted)");
        }
      }
      expect(in, "$EndElements");
      have_elements = true;
    } else if (!section.empty() && section[0] == '$' && section.rfind("$End", 0) != 0) {
      // Unknown section (e.g. $PhysicalNames): skip to its end marker.
      const std::string end = "$End" + section.substr(1);
      std::string tok;
      while (in >> tok && tok != end) {
      }
    }
  }
  if (!have_format) throw MeshError("missing $MeshFormat section");
  if (!have_nodes) throw MeshError("missing $Nodes section");
  if (!have_elements || raw_tets.empty()) throw MeshError("no tetrahedra in mesh file");

  // Compact to the nodes referenced by tets, in ascending tag order.
  std::vector<long long> used;
  for (const auto& t : raw_tets) used.insert(used.end(), t.begin(), t.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::unordered_map<long long, Index> remap;
  std::vector<Point3> nodes;
  nodes.reserve(used.size());
  for (long long tag : used) {
    auto it = coords.find(tag);
    if (it == coords.end()) throw MeshError("element references undefined node " + std::to_string(tag));
    remap[tag] = static_cast<Index>(nodes.size());
    nodes.push_back(it->second);
  }
  std::vector<Tet> tets;
  tets.reserve(raw_tets.size());
  for (const auto& t : raw_tets) tets.push_back({remap[t[0]], remap[t[1]], remap[t[2]], remap[t[3]]});
  return make_tet_mesh(std::move(nodes), std::move(tets));
}

void save_msh(const TetMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file " + path.string());
  out.precision(17);
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n" << mesh.nodes.size() << "\n";
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    const Point3& p = mesh.nodes[i];
    out << i + 1 << ' ' << p.x() << ' ' << p.y() << ' ' << p.z() << "\n";
  }
  out << "$EndNodes\n$Elements\n" << mesh.tets.size() << "\n";
  for (std::size_t i = 0; i < mesh.tets.size(); ++i) {
    const Tet& t = mesh.tets[i];
    out << i + 1 << " 4 2 0 1 " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << ' ' << t[3] + 1
        << "\n";
  }
  out << "$EndElements\n";
  if (!out) throw MeshError("error writing mesh file " + path.string());
}

}  // namespace h2demag
