#include "h2demag/analytic.hpp"
#include "h2demag/pipeline.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace h2demag;

namespace {

Eigen::MatrixX3d points_array(const std::vector<Point3>& pts) {
  Eigen::MatrixX3d out(static_cast<Index>(pts.size()), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) out.row(static_cast<Index>(i)) = pts[i].transpose();
  return out;
}

template <std::size_t K>
Eigen::Matrix<std::int64_t, Eigen::Dynamic, static_cast<int>(K)> index_array(
    const std::vector<std::array<Index, K>>& cells) {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, static_cast<int>(K)> out(static_cast<Index>(cells.size()), K);
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t k = 0; k < K; ++k) out(static_cast<Index>(i), static_cast<Index>(k)) = cells[i][k];
  return out;
}

BoundaryOperator make_operator(const TetMesh& mesh, const std::string& backend, const CompressionConfig& config,
                               Index dense_cap) {
  const BoundaryKernel kernel(mesh);
  return BoundaryOperator::assemble(kernel, parse_backend(backend), config, dense_cap);
}

py::dict result_dict(const RunResult& r) {
  py::dict d;
  d["geometry"] = r.geometry;
  d["n_nodes"] = r.n_nodes;
  d["n_tets"] = r.n_tets;
  d["n_boundary"] = r.n_boundary;
  d["backend"] = to_string(r.backend);
  d["ed_over_kd"] = r.ed_over_kd;
  d["reference_ed_over_kd"] = r.reference ? py::cast(*r.reference) : py::none();
  d["abs_error"] = r.abs_error();
  d["rel_error"] = r.rel_error();
  d["storage_bytes"] = r.storage_bytes;
  d["compression_ratio"] = r.compression_ratio;
  d["solver_iterations"] = r.solver_iterations;
  d["wall_time_s"] = r.wall_time_s;
  d["csv_row"] = csv_row(r);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "FEM/BEM magnetostatics with an H2-matrix boundary operator";

  py::register_exception<MeshError>(m, "MeshError", PyExc_ValueError);
  py::register_exception<H2FormatError>(m, "H2FormatError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_MemoryError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<TetMesh>(m, "TetMesh")
      .def_property_readonly("nodes", [](const TetMesh& t) { return points_array(t.nodes); })
      .def_property_readonly("tets", [](const TetMesh& t) { return index_array(t.tets); })
      .def_property_readonly("boundary_nodes", [](const TetMesh& t) { return t.boundary_nodes; })
      .def_property_readonly("boundary_triangles", [](const TetMesh& t) { return index_array(t.surface.triangles); })
      .def_property_readonly("num_nodes", &TetMesh::num_nodes)
      .def_property_readonly("num_tets", &TetMesh::num_tets)
      .def_property_readonly("num_boundary", &TetMesh::num_boundary)
      .def("volume", &TetMesh::volume)
      .def("surface_area", [](const TetMesh& t) { return t.surface.total_area(); })
      .def("solid_angles", [](const TetMesh& t) { return boundary_solid_angles(t); },
           "interior solid angle at each boundary node (boundary numbering)")
      .def("save_msh", [](const TetMesh& t, const std::filesystem::path& p) { save_msh(t, p); }, py::arg("path"))
      .def("__repr__", [](const TetMesh& t) {
        return "<TetMesh nodes=" + std::to_string(t.num_nodes()) + " tets=" + std::to_string(t.num_tets()) +
               " boundary=" + std::to_string(t.num_boundary()) + ">";
      });

  m.def("sphere_mesh", &generate_sphere_mesh, py::arg("radius"), py::arg("refinement"));
  m.def("geodesic_sphere_mesh", &generate_geodesic_sphere_mesh, py::arg("radius"), py::arg("frequency"),
        py::arg("layers"));
  m.def("prism_mesh", &generate_prism_mesh, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("nx"), py::arg("ny"),
        py::arg("nz"));
  m.def("torus_mesh", &generate_torus_mesh, py::arg("major_radius"), py::arg("minor_radius"),
        py::arg("n_toroidal"), py::arg("n_poloidal"), py::arg("n_radial"));
  m.def("load_msh", [](const std::filesystem::path& p) { return load_msh(p); }, py::arg("path"));

  py::class_<CompressionConfig>(m, "CompressionConfig")
      .def(py::init<>())
      .def_readwrite("leaf_size", &CompressionConfig::leaf_size)
      .def_readwrite("eta", &CompressionConfig::eta)
      .def_readwrite("cheb_order", &CompressionConfig::cheb_order)
      .def_readwrite("eps", &CompressionConfig::eps)
      .def_readwrite("eps_rec", &CompressionConfig::eps_rec)
      .def_readwrite("use_hca", &CompressionConfig::use_hca);

  py::class_<H2Matrix>(m, "H2Matrix")
      .def_property_readonly("size", &H2Matrix::size)
      .def_property_readonly("storage_bytes", &H2Matrix::storage_bytes)
      .def_property_readonly("max_rank", &H2Matrix::max_rank)
      .def("matvec", &H2Matrix::matvec, py::arg("x"))
      .def("save", [](const H2Matrix& h, const std::filesystem::path& p) { save_h2(h, p); }, py::arg("path"))
      .def("to_bytes", [](const H2Matrix& h) {
        const auto b = serialize_h2(h);
        return py::bytes(b.data(), b.size());
      });
  m.def("load_h2", [](const std::filesystem::path& p, std::optional<Index> n) { return load_h2(p, n); },
        py::arg("path"), py::arg("expected_size") = py::none());

  py::class_<BoundaryOperator>(m, "BoundaryOperator")
      .def_property_readonly("backend", [](const BoundaryOperator& o) { return to_string(o.backend()); })
      .def_property_readonly("size", &BoundaryOperator::size)
      .def_property_readonly("storage_bytes", &BoundaryOperator::storage_bytes)
      .def_property_readonly("compression_ratio",
                             [](const BoundaryOperator& o) { return compression_ratio(o.storage_bytes(), o.size()); })
      .def("apply", &BoundaryOperator::apply, py::arg("x"))
      .def("h2", [](const BoundaryOperator& o) -> std::optional<H2Matrix> {
        if (const H2Matrix* h = o.h2matrix()) return *h;
        return std::nullopt;
      });
  m.def("boundary_operator", &make_operator, py::arg("mesh"), py::arg("backend") = "h2",
        py::arg("config") = CompressionConfig{}, py::arg("dense_cap") = kDefaultDenseCap);
  m.def("dense_operator", [](const TetMesh& mesh) { return assemble_dense(BoundaryKernel(mesh)); }, py::arg("mesh"));
  m.def("compression_ratio", &compression_ratio, py::arg("storage_bytes"), py::arg("n"));

  m.def("aharoni_demag_factor", &aharoni_demag_factor, py::arg("a"), py::arg("b"), py::arg("c"));
  m.def("demag_factor_quadrature", &demag_factor_quadrature, py::arg("a"), py::arg("b"), py::arg("c"));

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("geometry", &RunConfig::geometry)
      .def_readwrite("refine", &RunConfig::refine)
      .def_readwrite("radius", &RunConfig::radius)
      .def_readwrite("prism", &RunConfig::prism)
      .def_readwrite("torus_major", &RunConfig::torus_major)
      .def_readwrite("torus_minor", &RunConfig::torus_minor)
      .def_readwrite("msh_path", &RunConfig::msh_path)
      .def_readwrite("magnetization", &RunConfig::magnetization)
      .def_property("backend", [](const RunConfig& c) { return to_string(c.backend); },
                    [](RunConfig& c, const std::string& b) { c.backend = parse_backend(b); })
      .def_readwrite("compression", &RunConfig::compression)
      .def_readwrite("dense_cap", &RunConfig::dense_cap)
      .def_readwrite("cache_dir", &RunConfig::cache_dir)
      .def_property("tol", [](const RunConfig& c) { return c.solver.tol; },
                    [](RunConfig& c, double t) { c.solver.tol = t; });

  m.def("run", [](const RunConfig& c) { return result_dict(run(c)); }, py::arg("config"),
        "full pipeline; returns the CSV record as a dict");
  m.def("build_mesh", &build_mesh, py::arg("config"));
  m.attr("RUN_CSV_HEADER") = kRunCsvHeader;
}
