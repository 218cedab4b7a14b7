#include "h2demag/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace h2demag;

namespace {

// Appends rows to `path` (header first if the file is new or empty), or writes
// header and rows to stdout when no path is given.
void write_csv(const std::string& path, const std::vector<std::string>& header, const std::vector<std::string>& rows) {
  if (path.empty()) {
    std::cout << csv_header(header) << "\n";
    for (const auto& r : rows) std::cout << r << "\n";
    return;
  }
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (fresh) out << csv_header(header) << "\n";
  for (const auto& r : rows) out << r << "\n";
}

const char* cache_status_name(CacheStatus s) {
  switch (s) {
    case CacheStatus::unused: return "unused";
    case CacheStatus::hit: return "hit";
    case CacheStatus::miss: return "miss";
    case CacheStatus::rebuilt: return "rebuilt";
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FEM/BEM magnetostatic field solver with H2-matrix boundary operator"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  RunConfig cfg;
  std::string backend = "h2";
  std::string msh;
  std::string cache_dir;
  std::string out;
  std::vector<double> prism{10.0, 20.0, 1.0};
  std::vector<double> torus{2.0, 1.0};
  bool no_hca = false;

  app.add_option("--geometry", cfg.geometry, "sphere | geodesic | prism | torus | msh")->capture_default_str();
  app.add_option("--refine", cfg.refine, "refinement level (meaning depends on geometry)")->capture_default_str();
  app.add_option("--radius", cfg.radius, "sphere radius")->capture_default_str();
  app.add_option("--prism", prism, "prism edge lengths a,b,c")->delimiter(',')->expected(3);
  app.add_option("--torus", torus, "torus radii R,r")->delimiter(',')->expected(2);
  app.add_option("--msh", msh, "Gmsh 2.2 ASCII mesh (geometry=msh)");
  app.add_option("--magnetization", cfg.magnetization, "uniform-x | uniform-y | uniform-z | azimuthal")
      ->capture_default_str();
  app.add_option("--backend", backend, "dense | h | h2")->capture_default_str();
  app.add_option("--leaf-size", cfg.compression.leaf_size)->capture_default_str();
  app.add_option("--eta", cfg.compression.eta, "admissibility parameter")->capture_default_str();
  app.add_option("--cheb-order", cfg.compression.cheb_order)->capture_default_str();
  app.add_option("--eps", cfg.compression.eps, "ACA/HCA tolerance")->capture_default_str();
  app.add_option("--eps-rec", cfg.compression.eps_rec, "H2 recompression tolerance")->capture_default_str();
  app.add_flag("--no-hca", no_hca, "plain ACA on every admissible block");
  app.add_option("--tol", cfg.solver.tol, "relative residual of the Krylov solves")->capture_default_str();
  app.add_option("--max-iter", cfg.solver.max_iter, "-1: 10 x unknowns")->capture_default_str();
  app.add_option("--dense-cap", cfg.dense_cap, "largest N for which a dense operator is assembled")
      ->capture_default_str();
  app.add_option("--cache-dir", cache_dir, "H2 operator cache directory");
  app.add_option("--out", out, "CSV output (appended); stdout when omitted");

  auto* run_cmd = app.add_subcommand("run", "solve one configuration and emit a CSV row");

  auto* bench_cmd = app.add_subcommand("bench", "operator storage over a refinement ladder");
  std::vector<int> ladder;
  std::vector<std::string> backends{"dense", "h", "h2"};
  bench_cmd->add_option("--ladder", ladder, "refinement levels")->delimiter(',')->required();
  bench_cmd->add_option("--backends", backends, "backends to measure")->delimiter(',')->capture_default_str();

  auto* info_cmd = app.add_subcommand("mesh-info", "print mesh statistics");
  auto* cache_cmd = app.add_subcommand("cache", "build or validate the cached H2 operator");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.prism = {prism[0], prism[1], prism[2]};
    cfg.torus_major = torus[0];
    cfg.torus_minor = torus[1];
    cfg.msh_path = msh;
    cfg.backend = parse_backend(backend);
    cfg.compression.use_hca = !no_hca;
    cfg.cache_dir = cache_dir;

    if (run_cmd->parsed()) {
      const RunResult r = run(cfg, &std::cerr);
      write_csv(out, kRunCsvHeader, {csv_row(r)});
      if (r.cache != CacheStatus::unused) std::cerr << "operator cache: " << cache_status_name(r.cache) << "\n";
    } else if (bench_cmd->parsed()) {
      std::vector<Backend> b;
      for (const auto& name : backends) b.push_back(parse_backend(name));
      std::vector<std::string> rows;
      for (const BenchRow& r : bench_scaling(cfg, ladder, b, &std::cerr)) rows.push_back(csv_row(r));
      write_csv(out, kBenchCsvHeader, rows);
    } else if (info_cmd->parsed()) {
      cfg.validate();
      const TetMesh mesh = build_mesh(cfg);
      const auto psi = boundary_solid_angles(mesh);
      std::cout << "nodes: " << mesh.num_nodes() << "\n"
                << "tets: " << mesh.num_tets() << "\n"
                << "boundary_nodes: " << mesh.num_boundary() << "\n"
                << "boundary_triangles: " << mesh.surface.size() << "\n"
                << "volume: " << format_real(mesh.volume()) << "\n"
                << "surface_area: " << format_real(mesh.surface.total_area()) << "\n"
                << "solid_angle_min: " << format_real(*std::min_element(psi.begin(), psi.end())) << "\n"
                << "solid_angle_max: " << format_real(*std::max_element(psi.begin(), psi.end())) << "\n";
    } else if (cache_cmd->parsed()) {
      if (cache_dir.empty()) throw std::invalid_argument("cache needs --cache-dir");
      cfg.validate();
      const TetMesh mesh = build_mesh(cfg);
      const BoundaryKernel kernel(mesh);
      CacheStatus st;
      const H2Matrix op = cached_h2(kernel, mesh, cfg.compression, cfg.cache_dir, &st, &std::cerr);
      std::cout << "file: " << cache_file(cfg.cache_dir, operator_cache_key(mesh, cfg.compression)).string() << "\n"
                << "status: " << cache_status_name(st) << "\n"
                << "n_boundary: " << op.size() << "\n"
                << "storage_bytes: " << op.storage_bytes() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
