"""Exact rational ground truth for small instances.

Nothing here touches floating point once the inputs are converted: the LP is
solved by a textbook two-phase tableau simplex over :class:`fractions.Fraction`
with Bland's rule, and support enumeration uses exact Gaussian elimination.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .complex import BoundaryMatrix, ChainVector, SimplicialComplex, WeightVector
from .errors import DimensionMismatch, Infeasible, TooLarge

MAX_LP_SIMPLICES = 64
MAX_ENUM_SIMPLICES = 20


@dataclass(frozen=True)
class RationalChain:
    coefficients: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(i): Fraction(c) for i, c in self.coefficients.items() if c != 0}
        object.__setattr__(self, "coefficients", dict(sorted(clean.items())))

    @classmethod
    def from_chain(cls, chain: ChainVector) -> "RationalChain":
        """Exact conversion: every float is a dyadic rational."""
        return cls({i: Fraction(c) for i, c in chain.coefficients.items()})

    def to_chain(self, dim: int) -> ChainVector:
        return ChainVector(dim, {i: float(c) for i, c in self.coefficients.items()})

    def norm1(self) -> Fraction:
        return sum((abs(c) for c in self.coefficients.values()), Fraction(0))


def exact_weights(weights: WeightVector | Sequence[float]) -> list[Fraction]:
    values = weights.values if isinstance(weights, WeightVector) else weights
    return [Fraction(float(v)) for v in values]


def planar_areas(complex: SimplicialComplex) -> list[Fraction]:
    """Exact triangle areas of a complex lying in the plane ``z = const`` (or 2-d)."""
    coords = complex.vertex_coordinates
    if coords.shape[1] > 2 and len(set(coords[:, 2:].ravel().tolist())) > coords.shape[1] - 2:
        raise ValueError("complex is not planar in the xy-plane")
    pts = [(Fraction(float(p[0])), Fraction(float(p[1]))) for p in coords]
    out = []
    for a, b, c in complex.simplices(2):
        (ax, ay), (bx, by), (cx, cy) = pts[a], pts[b], pts[c]
        out.append(abs((bx - ax) * (cy - ay) - (cx - ax) * (by - ay)) / 2)
    return out


def _dense_int(boundary: BoundaryMatrix) -> list[list[int]]:
    m, n = boundary.shape
    rows = [[0] * n for _ in range(m)]
    coo = boundary.matrix.tocoo()
    for i, j, v in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
        rows[i][j] += int(v)
    return rows


def _rhs(boundary: BoundaryMatrix, z: RationalChain) -> list[Fraction]:
    b = [Fraction(0)] * boundary.rows
    for i, c in z.coefficients.items():
        if not 0 <= i < boundary.rows:
            raise DimensionMismatch(f"chain index {i} outside 0..{boundary.rows - 1}")
        b[i] = c
    return b


class _ExactTableau:
    """Standard-form tableau ``A x = b, x >= 0`` with an objective row."""

    def __init__(self, A: list[list[Fraction]], b: list[Fraction], basis: list[int]):
        self.A = A
        self.b = b
        self.basis = basis
        self.allowed = [True] * len(A[0]) if A else []

    def set_cost(self, cost: list[Fraction]):
        # reduced costs d_j = c_j - c_B^T A_j, objective value = c_B^T b
        d = list(cost)
        obj = Fraction(0)
        for i, bv in enumerate(self.basis):
            cb = cost[bv]
            if cb:
                row = self.A[i]
                for j, a in enumerate(row):
                    if a:
                        d[j] -= cb * a
                obj += cb * self.b[i]
        self.d = d
        self.obj = obj

    def pivot(self, r: int, q: int):
        row = self.A[r]
        p = row[q]
        if p != 1:
            row = [a / p for a in row]
            self.A[r] = row
            self.b[r] /= p
        nz = [(j, a) for j, a in enumerate(row) if a]
        for i in range(len(self.A)):
            if i == r:
                continue
            f = self.A[i][q]
            if f:
                target = self.A[i]
                for j, a in nz:
                    target[j] -= f * a
                self.b[i] -= f * self.b[r]
        f = self.d[q]
        if f:
            for j, a in nz:
                self.d[j] -= f * a
            self.obj += f * self.b[r]
        self.basis[r] = q

    def run(self):
        """Bland's rule: lowest-index improving column, lowest-index leaving variable."""
        while True:
            q = next((j for j, dj in enumerate(self.d) if dj < 0 and self.allowed[j]), None)
            if q is None:
                return
            best = None
            for i, row in enumerate(self.A):
                a = row[q]
                if a > 0:
                    ratio = self.b[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise ArithmeticError("unbounded LP")
            self.pivot(best[1], q)


def oracle_min_area(boundary: BoundaryMatrix, weights: Sequence[Fraction], z: RationalChain
                    ) -> tuple[RationalChain, Fraction]:
    """Exact minimum of ``sum_j w_j |x_j|`` subject to ``d x = z``.

    Returns:
        ``(x, area)`` with ``d x = z`` holding exactly.

    Raises:
        Infeasible: if ``z`` is not a boundary.
        TooLarge: above 64 columns.
    """
    m, n = boundary.shape
    if n > MAX_LP_SIMPLICES:
        raise TooLarge(f"{n} simplices exceed the exact-oracle limit of {MAX_LP_SIMPLICES}")
    w = [Fraction(v) for v in weights]
    if len(w) != n:
        raise DimensionMismatch(f"{len(w)} weights for {n} simplices")
    D = _dense_int(boundary)
    b = _rhs(boundary, z)

    # columns: x+ (0..n-1), x- (n..2n-1), artificial (2n..2n+m-1)
    width = 2 * n + m
    A = []
    rhs = []
    for i in range(m):
        s = -1 if b[i] < 0 else 1
        row = [Fraction(s * v) for v in D[i]] + [Fraction(-s * v) for v in D[i]] + [Fraction(0)] * m
        row[2 * n + i] = Fraction(1)
        A.append(row)
        rhs.append(s * b[i])
    tab = _ExactTableau(A, rhs, [2 * n + i for i in range(m)])

    tab.set_cost([Fraction(0)] * (2 * n) + [Fraction(1)] * m)
    tab.run()
    if tab.obj != 0:
        raise Infeasible(f"phase 1 optimum {tab.obj} > 0: no bounding chain")

    # drive remaining (zero-level) artificials out, dropping redundant rows
    i = 0
    while i < len(tab.A):
        if tab.basis[i] >= 2 * n:
            q = next((j for j in range(2 * n) if tab.A[i][j] != 0), None)
            if q is None:
                del tab.A[i], tab.b[i], tab.basis[i]
                continue
            tab.pivot(i, q)
        i += 1
    tab.allowed = [j < 2 * n for j in range(width)]
    tab.set_cost(w + w + [Fraction(0)] * m)
    tab.run()

    x: dict[int, Fraction] = {}
    for i, var in enumerate(tab.basis):
        if var < n:
            x[var] = x.get(var, Fraction(0)) + tab.b[i]
        elif var < 2 * n:
            x[var - n] = x.get(var - n, Fraction(0)) - tab.b[i]
    chain = RationalChain(x)
    area = sum((w[j] * abs(c) for j, c in chain.coefficients.items()), Fraction(0))
    return chain, area


def _solve_exact(columns: list[list[int]], b: list[Fraction]) -> list[Fraction] | None:
    """Unique exact solution of ``[columns] y = b`` if it exists and columns are independent."""
    m = len(b)
    k = len(columns)
    M = [[Fraction(columns[j][i]) for j in range(k)] + [b[i]] for i in range(m)]
    pivots = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            return None  # dependent columns
        M[r], M[p] = M[p], M[r]
        pv = M[r][c]
        M[r] = [a / pv for a in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(M[i][k] != 0 for i in range(r, m)):
        return None
    return [M[i][k] for i in range(k)]


def oracle_enumerate_supports(boundary: BoundaryMatrix, z: RationalChain,
                              max_simplices: int = MAX_ENUM_SIMPLICES,
                              weights: Sequence[Fraction] | None = None
                              ) -> list[tuple[frozenset[int], Fraction]]:
    """All inclusion-minimal supports of bounding chains of ``z``, with their areas.

    Subsets are visited by increasing size; a subset is reported when ``d x = z``
    has a solution supported on it and on none of its proper subsets. Such a
    solution is unique, so its area (unit weights unless ``weights`` is given)
    is exact.
    """
    m, n = boundary.shape
    if n > max_simplices or n > MAX_ENUM_SIMPLICES:
        raise TooLarge(f"{n} simplices exceed the enumeration limit")
    w = [Fraction(1)] * n if weights is None else [Fraction(v) for v in weights]
    b = _rhs(boundary, z)
    if not any(b):
        return [(frozenset(), Fraction(0))]
    D = _dense_int(boundary)
    cols = [[D[i][j] for i in range(m)] for j in range(n)]
    touched = [frozenset(i for i in range(m) if D[i][j]) for j in range(n)]
    need = frozenset(i for i in range(m) if b[i] != 0)

    found: list[tuple[frozenset[int], Fraction]] = []
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            s = frozenset(subset)
            if any(f <= s for f, _ in found):
                continue
            counts: dict[int, int] = {}
            for j in subset:
                for i in touched[j]:
                    counts[i] = counts.get(i, 0) + 1
            if not need <= counts.keys():
                continue
            # a row met once and not in z forces a zero coefficient: not minimal
            if any(c == 1 and i not in need for i, c in counts.items()):
                continue
            y = _solve_exact([cols[j] for j in subset], b)
            if y is None or any(v == 0 for v in y):
                continue
            found.append((s, sum((w[j] * abs(v) for j, v in zip(subset, y)), Fraction(0))))
    return found
