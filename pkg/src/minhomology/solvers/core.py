"""Minimum-area bounding chains: exact LP, greedy OMP, least squares, and count bounds."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..complex import BoundaryMatrix, ChainVector, WeightVector, chain_area
from ..errors import DimensionMismatch, LpNumericalFailure, NotHomologous
from . import simplex
from .lstsq import least_squares_residual, min_norm_solve
from .omp import omp


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances shared by the solvers.

    Attributes:
        residual_tol: required ``||dx - z|| / ||z||`` of a returned chain.
        max_support: cap on OMP iterations; ``None`` means the number of columns.
        support_threshold: coefficient magnitude counted as "in the support" when reporting.
        area_clamp: raise degenerate simplex measures to this value instead of rejecting them.
        homology_tol: relative least-squares residual above which cycles are not homologous.
    """

    residual_tol: float = 1e-9
    max_support: int | None = None
    support_threshold: float = 1e-7
    area_clamp: float | None = None
    homology_tol: float = 1e-6

    def __post_init__(self):
        if not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive")
        if self.max_support is not None and self.max_support < 1:
            raise ValueError("max_support must be at least 1")
        if self.area_clamp is not None and not self.area_clamp > 0:
            raise ValueError("area_clamp must be positive")


@dataclass(frozen=True)
class BoundsInterval:
    """Area interval ``[a_min * count, a_max * count]`` around the minimum area."""

    lower: float
    upper: float
    count: float
    a_min: float
    a_max: float

    def __contains__(self, area: float) -> bool:
        return self.lower <= area <= self.upper


@dataclass
class SolveResult:
    method: str
    chain: ChainVector
    area: float
    residual: float
    wall_time: float
    iterations: int = 0
    bounds: BoundsInterval | None = None
    metadata: dict = field(default_factory=dict)


def _rhs(boundary: BoundaryMatrix, z: ChainVector) -> np.ndarray:
    if z.dim != boundary.k - 1:
        raise DimensionMismatch(f"a {z.dim}-chain cannot bound through the {boundary.k}-boundary map")
    return z.to_dense(boundary.rows)


def _weights(boundary: BoundaryMatrix, weights: WeightVector, config: SolverConfig) -> np.ndarray:
    if weights.dim != boundary.k or len(weights) != boundary.cols:
        raise DimensionMismatch(f"{len(weights)} weights of dimension {weights.dim} for "
                                f"{boundary.cols} simplices of dimension {boundary.k}")
    return weights.validated(config.area_clamp).values


def _residual(boundary: BoundaryMatrix, x: np.ndarray, zd: np.ndarray) -> float:
    return float(np.linalg.norm(boundary.as_float() @ x - zd))


def _tolerance(config: SolverConfig, zd: np.ndarray) -> float:
    zn = float(np.linalg.norm(zd))
    return config.residual_tol * (zn if zn > 0 else 1.0)


def _zero_result(method: str, boundary: BoundaryMatrix, start: float) -> SolveResult:
    return SolveResult(method, ChainVector.zero(boundary.k), 0.0, 0.0, time.perf_counter() - start)


def check_homologous(boundary: BoundaryMatrix, z: ChainVector, tol: float = 1e-6) -> bool:
    """Whether ``z`` is a boundary: ``min_x ||dx - z|| <= tol * ||z||``."""
    zd = _rhs(boundary, z)
    zn = float(np.linalg.norm(zd))
    if zn == 0:
        return True
    return least_squares_residual(boundary.as_float(), zd) <= tol * zn


def _polish(boundary: BoundaryMatrix, x: np.ndarray, zd: np.ndarray) -> np.ndarray:
    """Refit the nonzero coefficients of ``x`` by least squares on their columns."""
    support = np.flatnonzero(x)
    if len(support) == 0:
        return x
    sub = boundary.as_float()[:, support]
    fit, _ = min_norm_solve(sub, zd)
    out = np.zeros_like(x)
    out[support] = fit
    return out


def _solve_lp(boundary: BoundaryMatrix, costs: np.ndarray, zd: np.ndarray, config: SolverConfig):
    D = boundary.as_float().toarray()
    try:
        x, info = simplex.solve_weighted_l1(D, zd, costs, feasibility_tol=config.homology_tol)
    except simplex.Infeasible as exc:
        raise NotHomologous("cycles are not homologous") from exc
    except simplex.SimplexFailure as exc:
        raise LpNumericalFailure(str(exc)) from exc
    tol = _tolerance(config, zd)
    res = _residual(boundary, x, zd)
    if res > tol:
        polished = _polish(boundary, x, zd)
        pres = _residual(boundary, polished, zd)
        if pres < res:
            x, res = polished, pres
    if res > tol:
        raise LpNumericalFailure(f"LP solution residual {res:.3e} exceeds tolerance {tol:.3e}")
    return x, res, info


def solve_l1_exact(boundary: BoundaryMatrix, weights: WeightVector, z: ChainVector,
                   config: SolverConfig | None = None) -> SolveResult:
    """Globally area-minimal bounding chain via linear programming.

    Minimises ``sum_j a_j |x_j|`` subject to ``dx = z`` with the simplex method.
    Optimal chains need not be integral.

    Raises:
        NotHomologous: if ``z`` bounds no chain.
        ZeroAreaSimplex: if a simplex is degenerate and no clamp is configured.
        LpNumericalFailure: if the simplex method breaks down.
    """
    config = config or SolverConfig()
    start = time.perf_counter()
    zd = _rhs(boundary, z)
    a = _weights(boundary, weights, config)
    if not zd.any():
        return _zero_result("lp", boundary, start)
    x, res, info = _solve_lp(boundary, a, zd, config)
    chain = ChainVector.from_dense(boundary.k, x)
    return SolveResult("lp", chain, float(np.dot(a, np.abs(x))), res, time.perf_counter() - start,
                       iterations=info.pivots,
                       metadata={"phase1_pivots": info.phase1_pivots, "bland_pivots": info.bland_pivots})


def solve_count_min(boundary: BoundaryMatrix, z: ChainVector, config: SolverConfig | None = None) -> SolveResult:
    """Bounding chain with the smallest unweighted L1 norm; ``area`` is that norm."""
    config = config or SolverConfig()
    start = time.perf_counter()
    zd = _rhs(boundary, z)
    if not zd.any():
        return _zero_result("count", boundary, start)
    x, res, info = _solve_lp(boundary, np.ones(boundary.cols), zd, config)
    chain = ChainVector.from_dense(boundary.k, x)
    return SolveResult("count", chain, float(np.abs(x).sum()), res, time.perf_counter() - start,
                       iterations=info.pivots)


def solve_l1_omp(boundary: BoundaryMatrix, weights: WeightVector, z: ChainVector,
                 config: SolverConfig | None = None) -> SolveResult:
    """Greedy bounding chain by orthogonal matching pursuit.

    Runs OMP on the rescaled system ``(d A^-1) x' = z`` and returns ``x = A^-1 x'``.
    The chain is feasible but its area is only an upper bound on the minimum.
    """
    config = config or SolverConfig()
    start = time.perf_counter()
    zd = _rhs(boundary, z)
    a = _weights(boundary, weights, config)
    if not zd.any():
        return _zero_result("omp", boundary, start)
    if not check_homologous(boundary, z, config.homology_tol):
        raise NotHomologous("cycles are not homologous")
    W = boundary.as_float() @ sp.diags(1.0 / a)
    tol = _tolerance(config, zd)
    max_support = config.max_support or boundary.cols
    xp, info = omp(sp.csc_matrix(W), zd, tol=tol, max_support=max_support)
    x = xp / a
    res = _residual(boundary, x, zd)
    if res > tol:
        raise NotHomologous(f"OMP stopped ({info.stopped}) with residual {res:.3e} above {tol:.3e}")
    chain = ChainVector.from_dense(boundary.k, x)
    return SolveResult("omp", chain, chain_area(chain, WeightVector(boundary.k, a)), res,
                       time.perf_counter() - start, iterations=info.iterations,
                       metadata={"stopped": info.stopped, "skipped_columns": info.skipped})


def solve_l2(boundary: BoundaryMatrix, weights: WeightVector, z: ChainVector,
             config: SolverConfig | None = None) -> SolveResult:
    """Bounding chain minimising ``sum_j a_j x_j^2``.

    Solves for the minimum-norm ``y`` with ``(d A^-1/2) y = z`` and returns
    ``x = A^-1/2 y``. ``area`` is the weighted L1 area of that chain; the
    quadratic objective is in ``metadata["quadratic"]``.
    """
    config = config or SolverConfig()
    start = time.perf_counter()
    zd = _rhs(boundary, z)
    a = _weights(boundary, weights, config)
    if not zd.any():
        result = _zero_result("l2", boundary, start)
        result.metadata["quadratic"] = 0.0
        return result
    if not check_homologous(boundary, z, config.homology_tol):
        raise NotHomologous("cycles are not homologous")
    scale = 1.0 / np.sqrt(a)
    W = boundary.as_float() @ sp.diags(scale)
    tol = _tolerance(config, zd)
    y, method = min_norm_solve(W, zd)
    res = float(np.linalg.norm(W @ y - zd))
    for _ in range(3):
        if res <= tol:
            break
        # corrections also lie in the row space, so y stays minimum-norm
        dy, _ = min_norm_solve(W, zd - W @ y)
        y2 = y + dy
        res2 = float(np.linalg.norm(W @ y2 - zd))
        if res2 >= res:
            break
        y, res = y2, res2
    x = scale * y
    res = _residual(boundary, x, zd)
    if res > tol:
        raise NotHomologous(f"least-squares residual {res:.3e} above {tol:.3e}")
    chain = ChainVector.from_dense(boundary.k, x)
    return SolveResult("l2", chain, chain_area(chain, WeightVector(boundary.k, a)), res,
                       time.perf_counter() - start,
                       metadata={"quadratic": float(np.dot(a, x * x)), "lstsq": method})


def area_bounds(count_result: SolveResult, weights: WeightVector) -> BoundsInterval:
    """Interval containing the minimum area, from a count-minimal chain.

    With every simplex measure in ``[a_min, a_max]`` and ``c`` the L1 norm of a
    count-minimal bounding chain, the minimum area lies in ``[a_min c, a_max c]``.
    """
    count = count_result.chain.norm1()
    a_min, a_max = weights.min, weights.max
    return BoundsInterval(a_min * count, a_max * count, count, a_min, a_max)


def norm_sandwich_check(x: ChainVector, n: int) -> bool:
    """``||x||_2 <= ||x||_1 <= sqrt(n) ||x||_2`` up to ``1e-12 (1 + ||x||_1)``."""
    n1, n2 = x.norm1(), x.norm2()
    tol = 1e-12 * (1.0 + n1)
    return n2 <= n1 + tol and n1 <= math.sqrt(n) * n2 + tol


METHODS = {
    "lp": solve_l1_exact,
    "omp": solve_l1_omp,
    "l2": solve_l2,
}


def solve(method: str, boundary: BoundaryMatrix, weights: WeightVector, z: ChainVector,
          config: SolverConfig | None = None) -> SolveResult:
    """Dispatch by name; ``count`` also attaches the area interval."""
    if method == "count":
        config = config or SolverConfig()
        validated = weights.validated(config.area_clamp)
        result = solve_count_min(boundary, z, config)
        result.bounds = area_bounds(result, validated)
        return result
    try:
        fn = METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; choose from lp, omp, l2, count") from None
    return fn(boundary, weights, z, config)
