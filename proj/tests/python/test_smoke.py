import math

import numpy as np
import pytest

import h2demag as hd


def test_sphere_mesh_shapes():
    mesh = hd.sphere_mesh(1.0, 1)
    assert mesh.nodes.shape == (mesh.num_nodes, 3)
    assert mesh.tets.shape == (mesh.num_tets, 4)
    assert len(mesh.boundary_nodes) == mesh.num_boundary == 42
    assert mesh.volume() < 4.0 / 3.0 * math.pi


def test_prism_solid_angles():
    mesh = hd.prism_mesh(1.0, 1.0, 1.0, 2, 2, 2)
    psi = np.array(mesh.solid_angles())
    assert np.isclose(psi.min(), math.pi / 2, atol=1e-12)
    assert np.isclose(psi.max(), 2 * math.pi, atol=1e-12)


def test_dense_row_sums():
    mesh = hd.geodesic_sphere_mesh(1.0, 4, 1)
    m = hd.dense_operator(mesh)
    assert np.allclose(m.sum(axis=1), -1.0, atol=1e-10)


def test_h2_matches_dense():
    mesh = hd.geodesic_sphere_mesh(1.0, 8, 1)
    dense = hd.boundary_operator(mesh, "dense")
    h2 = hd.boundary_operator(mesh, "h2")
    assert h2.backend == "h2"
    rng = np.random.default_rng(0)
    x = rng.standard_normal(mesh.num_boundary)
    yd = dense.apply(x)
    assert np.linalg.norm(h2.apply(x) - yd) / np.linalg.norm(yd) < 1e-4
    assert 0.0 < h2.compression_ratio < 1.0


def test_h2_file_round_trip(tmp_path):
    mesh = hd.geodesic_sphere_mesh(1.0, 6, 1)
    op = hd.boundary_operator(mesh, "h2").h2()
    path = tmp_path / "op.h2"
    op.save(path)
    back = hd.load_h2(path, mesh.num_boundary)
    x = np.linspace(-1.0, 1.0, mesh.num_boundary)
    assert np.array_equal(op.matvec(x), back.matvec(x))
    with pytest.raises(hd.H2FormatError):
        hd.load_h2(path, mesh.num_boundary + 1)


def test_demag_factors():
    assert math.isclose(hd.aharoni_demag_factor(1, 1, 1), 1 / 3, rel_tol=1e-12)
    n = hd.aharoni_demag_factor(1, 10, 20)
    assert math.isclose(n, hd.demag_factor_quadrature(1, 10, 20), abs_tol=1e-10)


def test_run_sphere():
    cfg = hd.RunConfig()
    cfg.geometry = "sphere"
    cfg.refine = 2
    cfg.backend = "h2"
    res = hd.run(cfg)
    assert res["n_boundary"] == 162
    assert abs(res["ed_over_kd"] - 1 / 3) < 1e-2
    assert res["csv_row"].startswith("sphere,")
    assert len(res["csv_row"].split(",")) == len(hd.RUN_CSV_HEADER)


def test_bad_config_raises():
    cfg = hd.RunConfig()
    cfg.magnetization = "azimuthal"
    with pytest.raises(ValueError):
        hd.run(cfg)
