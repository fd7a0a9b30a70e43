"""Minimum-area homologies between cycles in simplicial complexes."""
from .complex import (
    BoundaryMatrix,
    ChainVector,
    SimplicialComplex,
    WeightVector,
    boundary_of,
    build_boundary,
    chain_area,
    complex_components,
    cycle_difference,
    is_cycle,
    simplex_measure,
    simplex_measures,
    support_components,
)
from .errors import (
    DimensionMismatch,
    Infeasible,
    InvalidDimension,
    LpNumericalFailure,
    MalformedPly,
    MalformedSpec,
    MinHomologyError,
    MissingEdge,
    NonTriangleFace,
    NotHomologous,
    ZeroAreaSimplex,
)
from .mesh_io import CycleSpec, SolveReport, export_colored_mesh, export_report, parse_cycle_spec, parse_ply
from .solvers import (
    BoundsInterval,
    SolveResult,
    SolverConfig,
    area_bounds,
    check_homologous,
    norm_sandwich_check,
    solve,
    solve_count_min,
    solve_l1_exact,
    solve_l1_omp,
    solve_l2,
)

__version__ = "0.1.0"
