#pragma once

#include "h2demag/fem.hpp"
#include "h2demag/operator.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace h2demag {

struct RunConfig {
  // sphere: icosphere with `refine` subdivisions and 2^refine layers
  // geodesic: geodesic sphere of frequency `refine`, ceil(refine / 2) layers
  // prism: box a x b x c, refine cells per unit of the shortest edge
  // torus: 16r x 8r x 2r stations / sides / rings
  // msh: Gmsh file at msh_path
  std::string geometry = "sphere";
  int refine = 2;
  double radius = 1.0;
  std::array<double, 3> prism{10.0, 20.0, 1.0};
  double torus_major = 2.0;
  double torus_minor = 1.0;
  std::filesystem::path msh_path;

  std::string magnetization = "uniform-z";  // uniform-x|uniform-y|uniform-z|azimuthal
  Backend backend = Backend::h2;
  CompressionConfig compression;
  KrylovOptions solver;
  Index dense_cap = kDefaultDenseCap;
  std::filesystem::path cache_dir;  // empty: no operator cache

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

TetMesh build_mesh(const RunConfig& config);
VectorField build_magnetization(const RunConfig& config, const TetMesh& mesh);
/// Analytic e_d/K_d for the configuration, if one exists.
std::optional<double> reference_energy(const RunConfig& config);

enum class CacheStatus { unused, hit, miss, rebuilt };

struct RunResult {
  std::string geometry;
  Index n_nodes = 0;
  Index n_tets = 0;
  Index n_boundary = 0;
  Backend backend = Backend::h2;
  double ed_over_kd = 0.0;
  std::optional<double> reference;
  std::size_t storage_bytes = 0;
  double compression_ratio = 0.0;
  int solver_iterations = 0;  // u1 + u2
  double wall_time_s = 0.0;
  CacheStatus cache = CacheStatus::unused;

  double abs_error() const;
  double rel_error() const;  // NaN without a non-zero reference
};

/// Full pipeline: mesh, u1, boundary operator, u2, H, energy. Warnings (cache
/// rebuilds) go to `log` when given.
RunResult run(const RunConfig& config, std::ostream* log = nullptr);

/// Solves for u = u1 + u2 with a prebuilt operator and returns e_d/K_d.
struct FieldSolution {
  Vector u1;
  Vector u2;
  VectorField h;
  Energy energy;
  int iterations = 0;
};
FieldSolution solve_field(const TetMesh& mesh, const VectorField& m, const BoundaryOperator& op,
                          const KrylovOptions& solver = {});

extern const std::vector<std::string> kRunCsvHeader;
std::string csv_header(const std::vector<std::string>& columns);
std::string csv_row(const RunResult& r);
/// 17 significant digits; "nan" for NaN.
std::string format_real(double v);

// Operator cache ------------------------------------------------------------

/// CRC-64 over the mesh (nodes, tets) and the compression parameters.
std::uint64_t operator_cache_key(const TetMesh& mesh, const CompressionConfig& config);
std::filesystem::path cache_file(const std::filesystem::path& dir, std::uint64_t key);

/// Loads the H2 operator for (mesh, config) from `dir` if a valid file exists,
/// otherwise assembles it and writes the file. A corrupt file is reported on
/// `log` and replaced.
H2Matrix cached_h2(const BoundaryKernel& kernel, const TetMesh& mesh, const CompressionConfig& config,
                   const std::filesystem::path& dir, CacheStatus* status = nullptr, std::ostream* log = nullptr);

// Scaling study --------------------------------------------------------------

struct BenchRow {
  std::string geometry;
  int refine = 0;
  Index n_boundary = 0;
  Backend backend = Backend::dense;
  std::size_t storage_bytes = 0;
  double compression_ratio = 0.0;
  double assembly_time_s = 0.0;  // NaN for hypothetical rows
  bool hypothetical = false;     // dense above the cap: N^2 * 8, not assembled
  Index max_rank = 0;
};

extern const std::vector<std::string> kBenchCsvHeader;
std::string csv_row(const BenchRow& r);

/// Storage of each backend over a refinement ladder. Only the boundary
/// operator is assembled.
std::vector<BenchRow> bench_scaling(const RunConfig& base, const std::vector<int>& ladder,
                                    const std::vector<Backend>& backends, std::ostream* log = nullptr);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace h2demag
