// Acceptance driver: one PASS/FAIL line per criterion, non-zero exit if any fails.
#include "h2demag/analytic.hpp"
#include "h2demag/fem.hpp"
#include "h2demag/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <string>
#include <vector>

using namespace h2demag;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string join(const std::vector<double>& v, const char* f = "%.2e") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(f, v[i]);
  return s;
}

Eigen::VectorXd random_vector(Index n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = d(gen);
  return v;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

// Geometric mean of successive error ratios e_{k+1} / e_k.
double mean_ratio(const std::vector<double>& e) {
  double s = 0.0;
  for (std::size_t i = 1; i < e.size(); ++i) s += std::log(e[i] / e[i - 1]);
  return std::exp(s / static_cast<double>(e.size() - 1));
}

struct Ladder {
  std::vector<double> errors;
  std::vector<double> times;
  std::vector<Index> boundary;
  std::vector<Index> tets;
};

Ladder run_ladder(RunConfig c, const std::vector<int>& levels, bool absolute) {
  Ladder l;
  for (int k : levels) {
    c.refine = k;
    const RunResult r = run(c);
    l.errors.push_back(absolute ? r.abs_error() : r.rel_error());
    l.times.push_back(r.wall_time_s);
    l.boundary.push_back(r.n_boundary);
    l.tets.push_back(r.n_tets);
    std::printf("      %s level %d: tets %td, N %td, e_d/K_d %.10f, error %.3e, %.1f s\n", c.geometry.c_str(), k,
                r.n_tets, r.n_boundary, r.ed_over_kd, l.errors.back(), r.wall_time_s);
    std::fflush(stdout);
  }
  return l;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

RunConfig sphere_config() {
  RunConfig c;
  c.geometry = "sphere";
  return c;
}

RunConfig prism_config() {
  RunConfig c;
  c.geometry = "prism";
  c.prism = {10.0, 20.0, 1.0};
  c.magnetization = "uniform-z";
  return c;
}

RunConfig torus_config() {
  RunConfig c;
  c.geometry = "torus";
  c.magnetization = "azimuthal";
  return c;
}

// --- criteria ---------------------------------------------------------------

double sphere_mean_ratio = 0.0;

void sphere_energy() {
  const Ladder l = run_ladder(sphere_config(), {1, 2, 3, 4}, false);
  sphere_mean_ratio = mean_ratio(l.errors);
  const bool ok = strictly_decreasing(l.errors) && l.errors.back() <= 1e-2 && max_of(l.times) <= 600.0;
  report(ok, "sphere energy",
         "rel errors " + join(l.errors) + " (monotone, finest " + std::to_string(l.tets.back()) +
             " tets <= 1e-2), slowest level " + fmt("%.0f s", max_of(l.times)));
}

void torus_energy() {
  const Ladder l = run_ladder(torus_config(), {1, 2, 3, 4}, true);
  const bool ok = strictly_decreasing(l.errors) && l.errors.back() <= 1e-3;
  report(ok, "torus energy", "|e_d|/K_d " + join(l.errors) + " (decreasing, finest <= 1e-3)");
}

void prism_energy() {
  const double ref = prism_reference(10, 20, 1, 2).ed_over_kd;
  const double oracle = demag_factor_quadrature(1, 10, 20);
  const Ladder l = run_ladder(prism_config(), {1, 2, 3, 4}, false);
  const double pr = mean_ratio(l.errors);
  const bool ok = l.errors.back() <= 5e-2 && pr > sphere_mean_ratio && std::abs(ref - oracle) <= 1e-10;
  report(ok, "prism energy",
         "reference " + fmt("%.12f", ref) + " (quadrature oracle differs by " + fmt("%.1e", std::abs(ref - oracle)) +
             "), rel errors " + join(l.errors) + ", mean error ratio " + fmt("%.2f", pr) + " vs sphere " +
             fmt("%.2f", sphere_mean_ratio));
}

void backend_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const double tol = 10 * CompressionConfig{}.eps;
  struct Case {
    std::string name;
    RunConfig config;
    int level;
  };
  std::vector<Case> cases{{"sphere", sphere_config(), 4}, {"prism", prism_config(), 3}, {"torus", torus_config(), 4}};
  double worst = 0.0;
  std::string detail;
  bool sizes_ok = true;
  for (Case& c : cases) {
    c.config.refine = c.level;
    const TetMesh mesh = build_mesh(c.config);
    const BoundaryKernel kernel(mesh);
    const Matrix dense = assemble_dense(kernel);
    const H2Matrix h2 = recompress_h2(assemble_h(kernel), CompressionConfig{}.eps_rec);
    double e = 0.0;
    for (unsigned s = 0; s < 20; ++s) {
      const Eigen::VectorXd x = random_vector(kernel.size(), 1000 + s);
      const Eigen::VectorXd y = dense * x;
      e = std::max(e, (h2.matvec(x) - y).norm() / y.norm());
    }
    sizes_ok = sizes_ok && kernel.size() <= 5000;
    worst = std::max(worst, e);
    detail += c.name + " N=" + std::to_string(kernel.size()) + " " + fmt("%.1e", e) + "; ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(worst <= tol && sizes_ok && secs <= 300.0, "backend equivalence",
         detail + "tolerance " + fmt("%.0e", tol) + ", " + fmt("%.0f s", secs));
}

void compression() {
  RunConfig c;
  c.geometry = "geodesic";
  const auto rows = bench_scaling(c, {10, 14, 20, 28, 45}, {Backend::h, Backend::h2});
  std::vector<double> n, s2;
  double ratio = 0.0;
  bool h2_le_h = true;
  Index largest = 0;
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
    const BenchRow& h = rows[i];
    const BenchRow& h2 = rows[i + 1];
    std::printf("      N %td: H %zu bytes, H2 %zu bytes (r = %.4f, max rank %td)\n", h2.n_boundary, h.storage_bytes,
                h2.storage_bytes, h2.compression_ratio, h2.max_rank);
    n.push_back(static_cast<double>(h2.n_boundary));
    s2.push_back(static_cast<double>(h2.storage_bytes));
    h2_le_h = h2_le_h && h2.storage_bytes <= h.storage_bytes;
    ratio = h2.compression_ratio;
    largest = h2.n_boundary;
  }
  const double slope = loglog_slope(n, s2);
  const bool ok = largest >= 20000 && ratio >= 0.95 && h2_le_h && slope >= 0.9 && slope <= 1.25;
  report(ok, "compression",
         "N=" + std::to_string(largest) + " r=" + fmt("%.4f", ratio) + ", H2 <= H on every level: " +
             (h2_le_h ? "yes" : "no") + ", storage slope " + fmt("%.3f", slope));
}

// Fine-quadrature integral of phi_k dG/dn over a triangle (independent of the closed form).
std::array<double, 3> quadrature_weights(const Point3& x, const Point3& a, const Point3& b, const Point3& c) {
  const Point3 nrm = (b - a).cross(c - a).normalized();
  const double area = 0.5 * (b - a).cross(c - a).norm();
  const int m = 256;
  std::array<double, 3> w{0, 0, 0};
  for (int i = 0; i < m; ++i)
    for (int j = 0; i + j < m; ++j)
      for (int up = 0; up < (i + j + 1 < m ? 2 : 1); ++up) {
        // Sub-triangle centroids in barycentric (s, t).
        const double s = (i + (up ? 2.0 : 1.0) / 3.0) / m, t = (j + (up ? 2.0 : 1.0) / 3.0) / m;
        const Point3 y = a + s * (b - a) + t * (c - a);
        const Point3 d = x - y;
        const double r = d.norm();
        const double k = -d.dot(nrm) / (4.0 * kPi * r * r * r) * area / (m * m);
        w[0] += (1.0 - s - t) * k;
        w[1] += s * k;
        w[2] += t * k;
      }
  return w;
}

void row_sums() {
  // One-time check of the analytic triangle integrals against quadrature.
  const Point3 a(0, 0, 0), b(1, 0, 0), c(0.3, 0.8, 0.2);
  double qerr = 0.0;
  for (const Point3& x : {Point3(0.4, 0.3, 0.6), Point3(-0.5, 1.2, -0.4), Point3(2, 2, 1)}) {
    const auto ex = double_layer_weights(x, a, b, c);
    const auto q = quadrature_weights(x, a, b, c);
    for (int k = 0; k < 3; ++k) qerr = std::max(qerr, std::abs(ex[k] - q[k]));
  }

  double literal_err = 0.0, operator_err = 0.0;
  for (const TetMesh& mesh : {generate_prism_mesh(1, 1, 1, 4, 4, 4), generate_sphere_mesh(1.0, 3)}) {
    const BoundaryKernel kernel(mesh);
    const auto& p = kernel.points();
    // Dense matrix with the literal kernel sign: +phi_j dG/dn' plus the same diagonal.
    Matrix literal = Matrix::Zero(kernel.size(), kernel.size());
    for (Index i = 0; i < kernel.size(); ++i) {
      literal(i, i) += kernel.diagonal(i);
      for (const Triangle& t : kernel.triangles()) {
        const auto w = double_layer_weights(p[i], p[t[0]], p[t[1]], p[t[2]]);
        for (int k = 0; k < 3; ++k) literal(i, t[k]) += w[k];
      }
    }
    const Matrix op = assemble_dense(kernel);
    for (Index i = 0; i < kernel.size(); ++i) {
      literal_err = std::max(literal_err,
                             std::abs(literal.row(i).sum() - (kernel.solid_angles()[i] / (2 * kPi) - 1.0)));
      operator_err = std::max(operator_err, std::abs(op.row(i).sum() + 1.0));
    }
  }
  report(qerr <= 1e-6 && literal_err <= 1e-10, "row-sum identity",
         "quadrature check " + fmt("%.1e", qerr) + "; literal-sign dense rows vs Psi/2pi - 1: " +
             fmt("%.1e", literal_err) + " on cube and icosphere (production operator uses the opposite kernel "
             "sign, rows = -1 to " + fmt("%.1e", operator_err) + ")");
}

void solid_angles() {
  double interior = 0.0, prism_err = 0.0;
  std::vector<TetMesh> meshes{generate_prism_mesh(10, 20, 1, 10, 20, 2), generate_sphere_mesh(1.0, 3),
                              generate_geodesic_sphere_mesh(1.0, 10, 3), generate_torus_mesh(2, 1, 32, 16, 4)};
  for (const TetMesh& m : meshes)
    for (Index v = 0; v < m.num_nodes(); ++v)
      if (!m.is_boundary(v)) interior = std::max(interior, std::abs(node_solid_angle(m, v) / (4 * kPi) - 1.0));

  const TetMesh& p = meshes[0];
  const double dims[3] = {10, 20, 1};
  const auto psi = boundary_solid_angles(p);
  for (Index k = 0; k < p.num_boundary(); ++k) {
    const Point3& x = p.nodes[p.boundary_nodes[k]];
    int on = 0;
    for (int d = 0; d < 3; ++d) on += (x[d] == 0.0 || x[d] == dims[d]) ? 1 : 0;
    const double expected = on == 1 ? 2 * kPi : on == 2 ? kPi : kPi / 2;
    prism_err = std::max(prism_err, std::abs(psi[k] - expected));
  }
  report(interior <= 1e-10 && prism_err <= 1e-12, "solid angles",
         "interior nodes relative " + fmt("%.1e", interior) + ", prism face/edge/corner " + fmt("%.1e", prism_err));
}

void persistence() {
  const auto dir = std::filesystem::temp_directory_path() / "h2demag_acceptance_cache";
  std::filesystem::remove_all(dir);
  RunConfig c = sphere_config();
  c.refine = 3;
  const TetMesh mesh = build_mesh(c);
  const H2Matrix op = recompress_h2(assemble_h(BoundaryKernel(mesh)), 1e-5);
  std::filesystem::create_directories(dir);
  save_h2(op, dir / "op.h2");
  const H2Matrix back = load_h2(dir / "op.h2", op.size());
  const bool bytes_equal = serialize_h2(back) == serialize_h2(op);

  c.cache_dir = dir;
  const RunResult first = run(c);
  const RunResult second = run(c);
  const bool bits = std::memcmp(&first.ed_over_kd, &second.ed_over_kd, sizeof(double)) == 0;
  const bool statuses = first.cache == CacheStatus::miss && second.cache == CacheStatus::hit;
  std::filesystem::remove_all(dir);
  report(bytes_equal && bits && statuses, "persistence",
         std::string("round trip ") + (bytes_equal ? "bit-exact" : "differs") + ", cached re-run e_d/K_d " +
             format_real(second.ed_over_kd) + (bits ? " identical" : " differs") + (statuses ? "" : " (cache miss)"));
}

void fem_suite() {
  std::vector<std::pair<std::string, TetMesh>> meshes;
  for (int k = 1; k <= 3; ++k) meshes.emplace_back("sphere " + std::to_string(k), generate_sphere_mesh(1.0, k));
  for (int n : {10, 20}) meshes.emplace_back("geodesic " + std::to_string(n), generate_geodesic_sphere_mesh(1.0, n, 2));
  for (int r = 1; r <= 3; ++r) {
    RunConfig c = prism_config();
    c.refine = r;
    meshes.emplace_back("prism " + std::to_string(r), build_mesh(c));
    RunConfig t = torus_config();
    t.refine = r;
    meshes.emplace_back("torus " + std::to_string(r), build_mesh(t));
  }
  double row = 0.0, psd = std::numeric_limits<double>::infinity(), lin = 0.0;
  bool rejects = true;
  for (const auto& [name, m] : meshes) {
    const CsrMatrix k = assemble_stiffness(m);
    const double scale = k.diagonal().cwiseAbs().maxCoeff();
    row = std::max(row, (k * Eigen::VectorXd::Ones(m.num_nodes())).cwiseAbs().maxCoeff() / scale);
    for (unsigned s = 0; s < 20; ++s) {
      const Eigen::VectorXd x = random_vector(m.num_nodes(), s);
      psd = std::min(psd, x.dot(k * x) / (scale * x.squaredNorm()));
    }
    Eigen::VectorXd g(m.num_boundary()), exact(m.num_nodes());
    for (Index i = 0; i < m.num_nodes(); ++i) exact[i] = 1.0 + 0.5 * m.nodes[i].x() - m.nodes[i].y() + 2.0 * m.nodes[i].z();
    for (Index b = 0; b < g.size(); ++b) g[b] = exact[m.boundary_nodes[b]];
    KrylovOptions opts;
    opts.tol = 1e-13;
    lin = std::max(lin, (solve_u2(m, k, g, opts).x - exact).cwiseAbs().maxCoeff() / exact.cwiseAbs().maxCoeff());
    Eigen::VectorXd bad = Eigen::VectorXd::Zero(m.num_nodes());
    bad[0] = 1.0;
    try {
      solve_u1(k, bad);
      rejects = false;
    } catch (const std::invalid_argument&) {
    }
  }
  report(row <= 1e-12 && psd >= -1e-14 && lin <= 1e-9 && rejects, "FEM suite",
         std::to_string(meshes.size()) + " meshes: row sums " + fmt("%.1e", row) + ", min Rayleigh quotient " +
             fmt("%.1e", psd) + ", linear Dirichlet error " + fmt("%.1e", lin) + ", incompatible Neumann data " +
             (rejects ? "rejected" : "accepted"));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void()>>> criteria{
      {"sphere energy", sphere_energy}, {"torus energy", torus_energy},
      {"prism energy", prism_energy},   {"backend equivalence", backend_equivalence},
      {"compression", compression},     {"row-sum identity", row_sums},
      {"solid angles", solid_angles},   {"persistence", persistence},
      {"FEM suite", fem_suite}};
  for (const auto& [name, fn] : criteria) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(false, name, std::string("exception: ") + e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
