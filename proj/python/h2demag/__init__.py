"""FEM/BEM magnetostatic solver with an H2-matrix compressed boundary operator."""

from ._core import (
    RUN_CSV_HEADER,
    BoundaryOperator,
    CapacityError,
    CompressionConfig,
    H2FormatError,
    H2Matrix,
    MeshError,
    RunConfig,
    SolverError,
    TetMesh,
    aharoni_demag_factor,
    boundary_operator,
    build_mesh,
    compression_ratio,
    demag_factor_quadrature,
    dense_operator,
    geodesic_sphere_mesh,
    load_h2,
    load_msh,
    prism_mesh,
    run,
    sphere_mesh,
    torus_mesh,
)

__all__ = [
    "RUN_CSV_HEADER",
    "BoundaryOperator",
    "CapacityError",
    "CompressionConfig",
    "H2FormatError",
    "H2Matrix",
    "MeshError",
    "RunConfig",
    "SolverError",
    "TetMesh",
    "aharoni_demag_factor",
    "boundary_operator",
    "build_mesh",
    "compression_ratio",
    "demag_factor_quadrature",
    "dense_operator",
    "geodesic_sphere_mesh",
    "load_h2",
    "load_msh",
    "prism_mesh",
    "run",
    "sphere_mesh",
    "torus_mesh",
]
