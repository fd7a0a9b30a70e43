"""Solvers for minimum-area bounding chains."""
from .core import (
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

__all__ = [
    "BoundsInterval",
    "SolveResult",
    "SolverConfig",
    "area_bounds",
    "check_homologous",
    "norm_sandwich_check",
    "solve",
    "solve_count_min",
    "solve_l1_exact",
    "solve_l1_omp",
    "solve_l2",
]
