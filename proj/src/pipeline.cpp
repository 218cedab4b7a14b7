#include "h2demag/pipeline.hpp"

#include "h2demag/analytic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace h2demag {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool is_uniform(const std::string& m) { return m.rfind("uniform-", 0) == 0; }

int uniform_axis(const std::string& m) {
  if (m == "uniform-x") return 0;
  if (m == "uniform-y") return 1;
  if (m == "uniform-z") return 2;
  throw std::invalid_argument("unknown magnetization preset '" + m + "'");
}

}  // namespace

void RunConfig::validate() const {
  static const char* kinds[] = {"sphere", "geodesic", "prism", "torus", "msh"};
  if (std::find(std::begin(kinds), std::end(kinds), geometry) == std::end(kinds))
    throw std::invalid_argument("unknown geometry '" + geometry + "' (sphere, geodesic, prism, torus, msh)");
  if (geometry != "msh" && refine < (geometry == "sphere" ? 0 : 1))
    throw std::invalid_argument("refinement out of range for " + geometry);
  if (geometry == "msh" && msh_path.empty()) throw std::invalid_argument("msh geometry needs a mesh path");
  if (magnetization == "azimuthal") {
    if (geometry != "torus") throw std::invalid_argument("the azimuthal preset is only valid for the torus");
  } else {
    uniform_axis(magnetization);
  }
  if (compression.leaf_size < 1) throw std::invalid_argument("leaf size must be at least 1");
  if (!(compression.eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (compression.cheb_order < 1) throw std::invalid_argument("Chebyshev order must be at least 1");
  if (!(compression.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(compression.eps_rec >= 0.0)) throw std::invalid_argument("eps_rec must be non-negative");
}

TetMesh build_mesh(const RunConfig& c) {
  if (c.geometry == "sphere") return generate_sphere_mesh(c.radius, c.refine);
  if (c.geometry == "geodesic") return generate_geodesic_sphere_mesh(c.radius, c.refine, (c.refine + 1) / 2);
  if (c.geometry == "prism") {
    const double h = std::min({c.prism[0], c.prism[1], c.prism[2]});
    std::array<int, 3> n{};
    for (int d = 0; d < 3; ++d) n[d] = std::max(1, static_cast<int>(std::lround(c.prism[d] / h * c.refine)));
    return generate_prism_mesh(c.prism[0], c.prism[1], c.prism[2], n[0], n[1], n[2]);
  }
  if (c.geometry == "torus")
    return generate_torus_mesh(c.torus_major, c.torus_minor, 16 * c.refine, 8 * c.refine, 2 * c.refine);
  if (c.geometry == "msh") return load_msh(c.msh_path);
  throw std::invalid_argument("unknown geometry '" + c.geometry + "'");
}

VectorField build_magnetization(const RunConfig& c, const TetMesh& mesh) {
  if (c.magnetization == "azimuthal") return azimuthal_magnetization(mesh);
  return uniform_magnetization(mesh, Point3::Unit(uniform_axis(c.magnetization)));
}

std::optional<double> reference_energy(const RunConfig& c) {
  if (c.geometry == "sphere" || c.geometry == "geodesic") {
    if (is_uniform(c.magnetization)) return sphere_reference().ed_over_kd;
    return std::nullopt;
  }
  if (c.geometry == "prism" && is_uniform(c.magnetization))
    return prism_reference(c.prism[0], c.prism[1], c.prism[2], uniform_axis(c.magnetization)).ed_over_kd;
  if (c.geometry == "torus" && c.magnetization == "azimuthal") return torus_reference().ed_over_kd;
  return std::nullopt;
}

double RunResult::abs_error() const {
  return reference ? std::abs(ed_over_kd - *reference) : std::numeric_limits<double>::quiet_NaN();
}

double RunResult::rel_error() const {
  if (!reference || *reference == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return abs_error() / std::abs(*reference);
}

FieldSolution solve_field(const TetMesh& mesh, const VectorField& m, const BoundaryOperator& op,
                          const KrylovOptions& solver) {
  if (op.size() != mesh.num_boundary()) throw std::invalid_argument("boundary operator does not match the mesh");
  const CsrMatrix k = assemble_stiffness(mesh);
  const Vector b = assemble_u1_rhs(mesh, m);
  FieldSolution out;
  const SolveResult u1 = solve_u1(k, b, solver);
  Vector trace(mesh.num_boundary());
  for (Index i = 0; i < trace.size(); ++i) trace[i] = u1.x[mesh.boundary_nodes[i]];
  const SolveResult u2 = solve_u2(mesh, k, op.apply(trace), solver);
  out.u1 = u1.x;
  out.u2 = u2.x;
  out.h = compute_field(mesh, out.u1 + out.u2);
  out.energy = magnetostatic_energy(mesh, m, out.h);
  out.iterations = u1.report.iterations + u2.report.iterations;
  return out;
}

RunResult run(const RunConfig& config, std::ostream* log) {
  config.validate();
  const auto t0 = Clock::now();
  const TetMesh mesh = build_mesh(config);
  const VectorField m = build_magnetization(config, mesh);
  const BoundaryKernel kernel(mesh);

  RunResult r;
  const BoundaryOperator op =
      (config.backend == Backend::h2 && !config.cache_dir.empty())
          ? BoundaryOperator(cached_h2(kernel, mesh, config.compression, config.cache_dir, &r.cache, log))
          : BoundaryOperator::assemble(kernel, config.backend, config.compression, config.dense_cap);
  const FieldSolution sol = solve_field(mesh, m, op, config.solver);
  r.ed_over_kd = sol.energy.over_kd;
  r.solver_iterations = sol.iterations;
  r.storage_bytes = op.storage_bytes();
  r.geometry = config.geometry;
  r.n_nodes = mesh.num_nodes();
  r.n_tets = mesh.num_tets();
  r.n_boundary = mesh.num_boundary();
  r.backend = config.backend;
  r.reference = reference_energy(config);
  r.compression_ratio = compression_ratio(r.storage_bytes, r.n_boundary);
  r.wall_time_s = seconds_since(t0);
  return r;
}

// CSV -------------------------------------------------------------------------

const std::vector<std::string> kRunCsvHeader = {
    "geometry",   "n_nodes",       "n_tets",    "n_boundary",    "backend",
    "ed_over_kd", "reference_ed_over_kd", "abs_error", "rel_error", "storage_bytes",
    "compression_ratio", "solver_iterations", "wall_time_s"};

const std::vector<std::string> kBenchCsvHeader = {
    "geometry", "refine", "n_boundary", "backend", "storage_bytes",
    "compression_ratio", "assembly_time_s", "hypothetical", "max_rank"};

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_header(const std::vector<std::string>& columns) {
  std::string s;
  for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
  return s;
}

std::string csv_row(const RunResult& r) {
  std::ostringstream s;
  s << r.geometry << ',' << r.n_nodes << ',' << r.n_tets << ',' << r.n_boundary << ',' << to_string(r.backend) << ','
    << format_real(r.ed_over_kd) << ','
    << format_real(r.reference ? *r.reference : std::numeric_limits<double>::quiet_NaN()) << ','
    << format_real(r.abs_error()) << ',' << format_real(r.rel_error()) << ',' << r.storage_bytes << ','
    << format_real(r.compression_ratio) << ',' << r.solver_iterations << ',' << format_real(r.wall_time_s);
  return s.str();
}

std::string csv_row(const BenchRow& r) {
  std::ostringstream s;
  s << r.geometry << ',' << r.refine << ',' << r.n_boundary << ',' << to_string(r.backend) << ',' << r.storage_bytes
    << ',' << format_real(r.compression_ratio) << ',' << format_real(r.assembly_time_s) << ','
    << (r.hypothetical ? 1 : 0) << ',' << r.max_rank;
  return s.str();
}

// Cache -------------------------------------------------------------------------

std::uint64_t operator_cache_key(const TetMesh& mesh, const CompressionConfig& c) {
  std::vector<char> bytes;
  const auto put = [&](const void* p, std::size_t n) {
    const char* q = static_cast<const char*>(p);
    bytes.insert(bytes.end(), q, q + n);
  };
  const char tag[] = "h2demag-operator-v1";
  put(tag, sizeof tag);
  for (const Point3& p : mesh.nodes) put(p.data(), 3 * sizeof(double));
  for (const Tet& t : mesh.tets)
    for (Index v : t) {
      const auto u = static_cast<std::uint64_t>(v);
      put(&u, sizeof u);
    }
  const auto leaf = static_cast<std::int64_t>(c.leaf_size);
  const auto order = static_cast<std::int64_t>(c.cheb_order);
  const std::uint8_t hca = c.use_hca ? 1 : 0;
  put(&leaf, sizeof leaf);
  put(&c.eta, sizeof c.eta);
  put(&order, sizeof order);
  put(&c.eps, sizeof c.eps);
  put(&c.eps_rec, sizeof c.eps_rec);
  put(&hca, sizeof hca);
  return crc64(bytes.data(), bytes.size());
}

std::filesystem::path cache_file(const std::filesystem::path& dir, std::uint64_t key) {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.h2", static_cast<unsigned long long>(key));
  return dir / name;
}

H2Matrix cached_h2(const BoundaryKernel& kernel, const TetMesh& mesh, const CompressionConfig& config,
                   const std::filesystem::path& dir, CacheStatus* status, std::ostream* log) {
  const std::filesystem::path path = cache_file(dir, operator_cache_key(mesh, config));
  CacheStatus st = CacheStatus::miss;
  if (std::filesystem::exists(path)) {
    try {
      H2Matrix op = load_h2(path, kernel.size());
      if (status) *status = CacheStatus::hit;
      return op;
    } catch (const std::exception& e) {
      if (log) *log << "warning: discarding cached operator " << path.string() << ": " << e.what() << "\n";
      st = CacheStatus::rebuilt;
    }
  }
  H2Matrix op = recompress_h2(assemble_h(kernel, config), config.eps_rec);
  save_h2(op, path);
  if (status) *status = st;
  return op;
}

// Scaling study -------------------------------------------------------------------

std::vector<BenchRow> bench_scaling(const RunConfig& base, const std::vector<int>& ladder,
                                    const std::vector<Backend>& backends, std::ostream* log) {
  std::vector<BenchRow> rows;
  const auto wants = [&](Backend b) { return std::find(backends.begin(), backends.end(), b) != backends.end(); };
  for (int level : ladder) {
    RunConfig c = base;
    c.refine = level;
    c.validate();
    TetMesh mesh = c.geometry == "geodesic" ? generate_geodesic_sphere_mesh(c.radius, level, 1) : build_mesh(c);
    const BoundaryKernel kernel(mesh);
    const Index n = kernel.size();
    BenchRow proto;
    proto.geometry = c.geometry;
    proto.refine = level;
    proto.n_boundary = n;

    if (wants(Backend::dense)) {
      BenchRow row = proto;
      row.backend = Backend::dense;
      row.storage_bytes = 8 * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
      if (n <= c.dense_cap) {
        const auto t0 = Clock::now();
        const Matrix d = assemble_dense(kernel, c.dense_cap);
        row.assembly_time_s = seconds_since(t0);
      } else {
        row.hypothetical = true;
        row.assembly_time_s = std::numeric_limits<double>::quiet_NaN();
      }
      rows.push_back(row);
    }
    if (wants(Backend::h) || wants(Backend::h2)) {
      const auto t0 = Clock::now();
      HMatrix h = assemble_h(kernel, c.compression);
      const double th = seconds_since(t0);
      if (wants(Backend::h)) {
        BenchRow row = proto;
        row.backend = Backend::h;
        row.storage_bytes = h.storage_bytes();
        row.compression_ratio = compression_ratio(row.storage_bytes, n);
        row.assembly_time_s = th;
        row.max_rank = h.max_rank();
        rows.push_back(row);
      }
      if (wants(Backend::h2)) {
        const auto t1 = Clock::now();
        const H2Matrix h2 = recompress_h2(h, c.compression.eps_rec);
        BenchRow row = proto;
        row.backend = Backend::h2;
        row.storage_bytes = h2.storage_bytes();
        row.compression_ratio = compression_ratio(row.storage_bytes, n);
        row.assembly_time_s = th + seconds_since(t1);
        row.max_rank = h2.max_rank();
        rows.push_back(row);
      }
    }
    if (log) *log << "bench: " << c.geometry << " level " << level << " N=" << n << " done\n";
  }
  return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs at least two matching points");
  double mx = 0, my = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("log-log slope needs positive data");
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("log-log slope needs distinct x values");
  return sxy / sxx;
}

}  // namespace h2demag
