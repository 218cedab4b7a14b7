#include "h2demag/bem.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace h2demag;

namespace {

// Composite degree-2 rule (edge midpoints) on a 4^level subdivision of (a,b,c)
// applied to phi_k(y) dG(x,y)/dn_y with G = -1/(4 pi r).
std::array<double, 3> quadrature_weights(const Point3& x, const Point3& a, const Point3& b, const Point3& c,
                                         int level) {
  const Point3 n = (b - a).cross(c - a).normalized();
  const double area = 0.5 * (b - a).cross(c - a).norm();
  const int m = 1 << level;
  std::array<double, 3> w{0, 0, 0};
  const auto add = [&](double s, double t) {
    const Point3 y = a + s * (b - a) + t * (c - a);
    const Point3 d = x - y;
    const double r = d.norm();
    const double k = -d.dot(n) / (4.0 * kPi * r * r * r);
    const double sub = area / (m * m) / 3.0;
    w[0] += sub * (1.0 - s - t) * k;
    w[1] += sub * s * k;
    w[2] += sub * t * k;
  };
  const double h = 1.0 / m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; i + j < m; ++j) {
      // Upward sub-triangle (i,j), (i+1,j), (i,j+1).
      const double s0 = i * h, t0 = j * h;
      add(s0 + h / 2, t0);
      add(s0 + h / 2, t0 + h / 2);
      add(s0, t0 + h / 2);
      if (i + j + 2 <= m) {
        // Downward sub-triangle (i+1,j), (i+1,j+1), (i,j+1).
        add(s0 + h, t0 + h / 2);
        add(s0 + h / 2, t0 + h);
        add(s0 + h / 2, t0 + h / 2);
      }
    }
  return w;
}

double row_sum(const Matrix& m, Index i) { return m.row(i).sum(); }

}  // namespace

TEST_CASE("green function") {
  CHECK(green(Point3(0, 0, 0), Point3(2, 0, 0)) == doctest::Approx(-1.0 / (8.0 * kPi)));
  CHECK_THROWS_AS(green(Point3(1, 2, 3), Point3(1, 2, 3)), std::domain_error);
}

TEST_CASE("double layer weights against fine quadrature") {
  const Point3 a(0, 0, 0), b(1, 0, 0), c(0.2, 0.9, 0.1);
  for (const Point3& x : {Point3(0.3, 0.3, 0.5), Point3(1.5, -0.4, -0.7), Point3(0.4, 0.2, -0.25),
                          Point3(-3, 2, 4)}) {
    const auto exact = double_layer_weights(x, a, b, c);
    const auto quad = quadrature_weights(x, a, b, c, 8);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(exact[k] - quad[k]) <= 1e-6 * std::max(1e-3, std::abs(quad[k])));
      CHECK(double_layer_triangle(x, a, b, c, k) == doctest::Approx(exact[k]).epsilon(1e-14));
    }
    CHECK(exact[0] + exact[1] + exact[2] ==
          doctest::Approx(triangle_solid_angle(x, a, b, c) / (4.0 * kPi)).epsilon(1e-12));
    CHECK(double_layer_constant(x, a, b, c) == doctest::Approx(exact[0] + exact[1] + exact[2]).epsilon(1e-12));
  }
}

TEST_CASE("coplanar points see nothing") {
  const Point3 a(0, 0, 1), b(1, 0, 1), c(0, 1, 1);
  for (const Point3& x : {Point3(0.2, 0.2, 1), Point3(3, -1, 1), Point3(0, 0, 1), Point3(0.5, 0, 1)}) {
    for (double w : double_layer_weights(x, a, b, c)) CHECK(w == 0.0);
  }
}

TEST_CASE("row sums on closed surfaces") {
  for (const TetMesh& mesh : {generate_prism_mesh(1, 1, 1, 1, 1, 1), generate_prism_mesh(1, 2, 0.5, 3, 4, 2),
                              generate_sphere_mesh(1.0, 2)}) {
    const BoundaryKernel kernel(mesh);
    const Matrix m = kernel.dense();
    const auto& pts = kernel.points();
    for (Index i = 0; i < kernel.size(); ++i) {
      // Operator: constant u1 gives u = u1 + u2 = 0.
      CHECK(row_sum(m, i) == doctest::Approx(-1.0).epsilon(1e-12));
      // Literal weights sum to Psi/4pi, hence a literal row sums to Psi/2pi - 1.
      double literal = kernel.diagonal(i);
      for (const Triangle& t : kernel.triangles()) {
        for (double w : double_layer_weights(pts[i], pts[t[0]], pts[t[1]], pts[t[2]])) literal += w;
      }
      CHECK(literal == doctest::Approx(kernel.solid_angles()[i] / (2.0 * kPi) - 1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("surface integral of the double layer by brute-force quadrature") {
  // Off-surface point inside the closed icosphere: the full integral of
  // dG/dn' is 1; outside it is 0.
  const TetMesh mesh = generate_sphere_mesh(1.0, 2);
  const auto pts = mesh.boundary_points();
  for (const auto& [x, expected] : {std::pair{Point3(0.1, -0.2, 0.3), 1.0}, std::pair{Point3(1.6, 0.2, 0.1), 0.0}}) {
    double total = 0.0;
    for (const Triangle& t : mesh.surface.triangles) {
      for (double w : quadrature_weights(x, pts[t[0]], pts[t[1]], pts[t[2]], 5)) total += w;
    }
    CHECK(total == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("entries, blocks and collocation agree") {
  const BoundaryKernel kernel(generate_sphere_mesh(1.0, 1));
  const Matrix m = kernel.dense();
  std::vector<Index> rows{0, 5, 9, 17}, cols{5, 3, 40, 0};
  Matrix block;
  kernel.fill_block(rows, cols, block);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      CHECK(block(i, j) == doctest::Approx(m(rows[i], cols[j])).epsilon(1e-14));
      CHECK(kernel.entry(rows[i], cols[j]) == doctest::Approx(m(rows[i], cols[j])).epsilon(1e-14));
    }
  // Collocation at a distant point: the negated double layer of each hat function.
  const Point3 far(5, 1, -2);
  std::vector<Index> all(kernel.size());
  std::iota(all.begin(), all.end(), 0);
  Eigen::VectorXd out(kernel.size());
  kernel.collocate(far, all, out);
  CHECK(out.sum() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  const auto& pts = kernel.points();
  Eigen::VectorXd ref = Eigen::VectorXd::Zero(kernel.size());
  for (const Triangle& t : kernel.triangles()) {
    const auto w = double_layer_weights(far, pts[t[0]], pts[t[1]], pts[t[2]]);
    for (int k = 0; k < 3; ++k) ref[t[k]] -= w[k];
  }
  CHECK((out - ref).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("boundary trace of a uniformly magnetised ball") {
  // Exterior potential of M = z: u = z / 3 on the surface, so u2 = u - u1 = -2z/3.
  const BoundaryKernel kernel(generate_sphere_mesh(1.0, 3));
  Eigen::VectorXd z(kernel.size());
  for (Index i = 0; i < kernel.size(); ++i) z[i] = kernel.points()[i].z();
  const Eigen::VectorXd u2 = kernel.dense() * z;
  CHECK((u2 + (2.0 / 3.0) * z).cwiseAbs().maxCoeff() < 1e-2);
}

TEST_CASE("dense assembly refuses oversized problems") {
  const BoundaryKernel kernel(generate_sphere_mesh(1.0, 1));
  CHECK_THROWS_AS(assemble_dense(kernel, kernel.size() - 1), CapacityError);
  CHECK(assemble_dense(kernel, kernel.size()).rows() == kernel.size());
}
