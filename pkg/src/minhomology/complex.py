"""Oriented simplicial complexes, chains, boundary operators and simplex measures.

Every simplex is stored as a strictly increasing tuple of vertex indices; that
ascending order is its reference orientation. A simplex given in some other
vertex order is the reference simplex times the sign of the sorting permutation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import DimensionMismatch, InvalidComplex, InvalidDimension, ZeroAreaSimplex

#: coefficients below this magnitude are dropped from sparse chains
ZERO_TOL = 1e-12

#: a simplex is degenerate when its measure is at most this fraction of the largest one
DEGENERATE_REL_TOL = 1e-12


def permutation_sign(vertices: Sequence[int]) -> int:
    """Sign of the permutation sorting ``vertices`` into ascending order."""
    sign = 1
    v = list(vertices)
    for i in range(len(v)):
        for j in range(i + 1, len(v)):
            if v[i] > v[j]:
                sign = -sign
            elif v[i] == v[j]:
                raise InvalidComplex(f"repeated vertex in simplex {tuple(vertices)}")
    return sign


def orient(vertices: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Return ``(ascending tuple, sign)`` for a simplex given in any vertex order."""
    return tuple(sorted(int(v) for v in vertices)), permutation_sign(vertices)


class SimplicialComplex:
    """A finite simplicial complex with vertex coordinates.

    The complex is the downward closure of ``simplices``: every face of every
    given simplex is added. Within each dimension the explicitly given simplices
    keep their input order (first occurrence wins), followed by the faces that
    closure introduced, in lexicographic order. Vertices are always
    ``(0,), (1,), ..., (n-1,)``.

    Args:
        vertex_coordinates: array of shape ``(n_vertices, d)``.
        simplices: vertex tuples of any dimension >= 1, in any vertex order.
    """

    def __init__(self, vertex_coordinates, simplices: Iterable[Sequence[int]]):
        coords = np.array(vertex_coordinates, dtype=float)
        if coords.ndim == 1:
            coords = coords.reshape(-1, 1)
        if coords.ndim != 2:
            raise InvalidComplex("vertex coordinates must be a 2-d array")
        coords.setflags(write=False)
        self._coords = coords
        n_vertices = coords.shape[0]

        given: dict[int, dict[tuple[int, ...], None]] = {}
        for s in simplices:
            key, _ = orient(s)
            if len(key) == 0:
                raise InvalidComplex("empty simplex")
            if key[0] < 0 or key[-1] >= n_vertices:
                raise InvalidComplex(f"simplex {tuple(s)} references a vertex outside 0..{n_vertices - 1}")
            given.setdefault(len(key) - 1, {})[key] = None

        top = max(given) if given else 0
        by_dim: list[dict[tuple[int, ...], None]] = [dict() for _ in range(top + 1)]
        by_dim[0] = {(i,): None for i in range(n_vertices)}
        for k in range(top, 0, -1):
            for key in given.get(k, {}):
                by_dim[k].setdefault(key, None)
            if k > 1:
                extra = set()
                for key in by_dim[k]:
                    for face in combinations(key, k):
                        if face not in by_dim[k - 1] and face not in given.get(k - 1, {}):
                            extra.add(face)
                # given faces first, then generated faces sorted
                for key in given.get(k - 1, {}):
                    by_dim[k - 1].setdefault(key, None)
                for face in sorted(extra):
                    by_dim[k - 1][face] = None
        # closure into dimension 0 is automatic: every vertex is present

        self._simplices = tuple(tuple(d.keys()) for d in by_dim)
        self._index = tuple({s: i for i, s in enumerate(d)} for d in self._simplices)
        self._boundary_cache: dict[int, BoundaryMatrix] = {}

    @property
    def vertex_coordinates(self) -> np.ndarray:
        return self._coords

    @property
    def dimension(self) -> int:
        return len(self._simplices) - 1

    @property
    def n_vertices(self) -> int:
        return self._coords.shape[0]

    def simplices(self, k: int) -> tuple[tuple[int, ...], ...]:
        if k < 0 or k > self.dimension:
            return ()
        return self._simplices[k]

    def n_simplices(self, k: int) -> int:
        return len(self.simplices(k))

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self._simplices)

    def index(self, simplex: Sequence[int]) -> int:
        """Index of an ascending vertex tuple; raises ``KeyError`` if absent."""
        key = tuple(simplex)
        return self._index[len(key) - 1][key]

    def orient(self, vertices: Sequence[int]) -> tuple[int, int]:
        """Return ``(index, sign)`` of a simplex given in arbitrary vertex order."""
        key, sign = orient(vertices)
        if len(key) - 1 > self.dimension:
            raise KeyError(key)
        return self._index[len(key) - 1][key], sign

    def __contains__(self, simplex) -> bool:
        key = tuple(sorted(simplex))
        k = len(key) - 1
        return 0 <= k <= self.dimension and key in self._index[k]

    def boundary(self, k: int) -> "BoundaryMatrix":
        """Cached :func:`build_boundary`."""
        if k not in self._boundary_cache:
            self._boundary_cache[k] = build_boundary(self, k)
        return self._boundary_cache[k]

    def __repr__(self):
        return f"SimplicialComplex(f_vector={self.f_vector()})"


@dataclass(frozen=True)
class ChainVector:
    """Sparse real chain over the ``dim``-simplices of a complex.

    Coefficients are stored in canonical form: no entry with magnitude below
    ``ZERO_TOL``.
    """

    dim: int
    coefficients: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(i): float(c) for i, c in self.coefficients.items() if abs(c) >= ZERO_TOL}
        object.__setattr__(self, "coefficients", dict(sorted(clean.items())))

    @classmethod
    def zero(cls, dim: int) -> "ChainVector":
        return cls(dim, {})

    @classmethod
    def from_dense(cls, dim: int, values) -> "ChainVector":
        values = np.asarray(values, dtype=float)
        nz = np.flatnonzero(np.abs(values) >= ZERO_TOL)
        return cls(dim, {int(i): float(values[i]) for i in nz})

    @classmethod
    def from_simplices(cls, complex: SimplicialComplex, items: Mapping[Sequence[int], float]) -> "ChainVector":
        """Build a chain from ``{vertex tuple: coefficient}``; vertex order sets the sign."""
        dims = {len(s) - 1 for s in items}
        if len(dims) > 1:
            raise DimensionMismatch("simplices of mixed dimension")
        if not dims:
            raise DimensionMismatch("cannot infer the dimension of an empty chain")
        acc: dict[int, float] = {}
        for s, c in items.items():
            idx, sign = complex.orient(s)
            acc[idx] = acc.get(idx, 0.0) + sign * c
        return cls(dims.pop(), acc)

    def to_dense(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        for i, c in self.coefficients.items():
            if i >= n:
                raise DimensionMismatch(f"chain index {i} outside 0..{n - 1}")
            out[i] = c
        return out

    @property
    def support(self) -> list[int]:
        return list(self.coefficients)

    def is_zero(self) -> bool:
        return not self.coefficients

    def norm1(self) -> float:
        return float(sum(abs(c) for c in self.coefficients.values()))

    def norm2(self) -> float:
        return math.sqrt(sum(c * c for c in self.coefficients.values()))

    def norm_inf(self) -> float:
        return max((abs(c) for c in self.coefficients.values()), default=0.0)

    def _check(self, other: "ChainVector"):
        if not isinstance(other, ChainVector):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatch(f"cannot combine a {self.dim}-chain with a {other.dim}-chain")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        acc = dict(self.coefficients)
        for i, c in other.coefficients.items():
            acc[i] = acc.get(i, 0.0) + c
        return ChainVector(self.dim, acc)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return ChainVector(self.dim, {i: -c for i, c in self.coefficients.items()})

    def __mul__(self, s):
        return ChainVector(self.dim, {i: s * c for i, c in self.coefficients.items()})

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class BoundaryMatrix:
    """Signed incidence matrix of the boundary map from ``k``-chains to ``(k-1)``-chains.

    ``matrix`` is a ``(rows, cols)`` integer CSC matrix with entries in {-1, +1}.
    """

    k: int
    matrix: sp.csc_matrix

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def as_float(self) -> sp.csc_matrix:
        cached = self.__dict__.get("_float")
        if cached is None:
            cached = self.matrix.astype(float)
            object.__setattr__(self, "_float", cached)
        return cached


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Per-simplex ``dim``-volumes: the diagonal of the weight matrix."""

    dim: int
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1:
            raise ValueError("weights must be one-dimensional")
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise ValueError("weights must be finite and non-negative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.values)

    @property
    def min(self) -> float:
        return float(self.values.min()) if len(self.values) else 0.0

    @property
    def max(self) -> float:
        return float(self.values.max()) if len(self.values) else 0.0

    def degenerate(self) -> np.ndarray:
        """Indices whose weight is zero relative to the largest weight."""
        if len(self.values) == 0:
            return np.array([], dtype=int)
        return np.flatnonzero(self.values <= DEGENERATE_REL_TOL * self.values.max())

    def validated(self, clamp: float | None = None) -> "WeightVector":
        """Reject (or, with ``clamp``, raise to ``clamp``) zero-measure simplices.

        Raises:
            ZeroAreaSimplex: if some weight is degenerate and no clamp is given.
        """
        if clamp is not None:
            if clamp <= 0:
                raise ValueError("clamp must be positive")
            return WeightVector(self.dim, np.maximum(self.values, clamp))
        bad = self.degenerate()
        if len(bad):
            raise ZeroAreaSimplex(bad.tolist())
        return self


def build_boundary(complex: SimplicialComplex, k: int) -> BoundaryMatrix:
    """Signed incidence matrix of the boundary map on ``k``-chains.

    Column ``j`` holds ``sum_i (-1)^i [v_0, ..., v_i omitted, ..., v_k]`` for the
    ``j``-th ``k``-simplex ``[v_0 < ... < v_k]``.
    """
    if k < 1 or k > complex.dimension:
        raise InvalidDimension(f"boundary dimension {k} outside 1..{complex.dimension}")
    simplices = complex.simplices(k)
    face_index = complex._index[k - 1]
    n = len(simplices)
    rows = np.empty(n * (k + 1), dtype=np.int64)
    vals = np.empty(n * (k + 1), dtype=np.int64)
    pos = 0
    for s in simplices:
        for i in range(k + 1):
            rows[pos] = face_index[s[:i] + s[i + 1:]]
            vals[pos] = 1 if i % 2 == 0 else -1
            pos += 1
    cols = np.repeat(np.arange(n), k + 1)
    m = sp.csc_matrix((vals, (rows, cols)), shape=(complex.n_simplices(k - 1), n), dtype=np.int64)
    m.sort_indices()
    return BoundaryMatrix(k, m)


def _volumes(points: np.ndarray) -> np.ndarray:
    # points: (n, k+1, d)
    k = points.shape[1] - 1
    if k == 0:
        return np.ones(points.shape[0])
    edges = points[:, 1:, :] - points[:, :1, :]
    gram = edges @ np.transpose(edges, (0, 2, 1))
    det = np.linalg.det(gram) if len(gram) else np.zeros(0)
    return np.sqrt(np.clip(det, 0.0, None)) / math.factorial(k)


def simplex_measure(complex: SimplicialComplex, k: int, index: int) -> float:
    """The ``k``-volume of one simplex (1 for vertices); degenerate simplices give 0."""
    s = complex.simplices(k)[index]
    return float(_volumes(complex.vertex_coordinates[np.array(s)][None])[0])


def simplex_measures(complex: SimplicialComplex, k: int) -> WeightVector:
    """Vectorised :func:`simplex_measure` over all ``k``-simplices."""
    simplices = complex.simplices(k)
    if not simplices:
        return WeightVector(k, np.zeros(0))
    idx = np.array(simplices, dtype=np.int64)
    return WeightVector(k, _volumes(complex.vertex_coordinates[idx]))


def boundary_of(complex: SimplicialComplex, chain: ChainVector) -> ChainVector:
    """Apply the boundary operator to ``chain``."""
    k = chain.dim
    if k < 1 or k > complex.dimension:
        raise DimensionMismatch(f"no boundary for a {k}-chain on a {complex.dimension}-complex")
    simplices = complex.simplices(k)
    face_index = complex._index[k - 1]
    out: dict[int, float] = {}
    for j, c in chain.coefficients.items():
        s = simplices[j]
        for i in range(k + 1):
            f = face_index[s[:i] + s[i + 1:]]
            out[f] = out.get(f, 0.0) + (c if i % 2 == 0 else -c)
    return ChainVector(k - 1, out)


def is_cycle(complex: SimplicialComplex, chain: ChainVector, tol: float = 0.0) -> bool:
    return boundary_of(complex, chain).norm_inf() <= tol


def cycle_difference(z: ChainVector, w: ChainVector) -> ChainVector:
    """``z - w``: the right-hand side every solver consumes."""
    if z.dim != w.dim:
        raise DimensionMismatch(f"cannot subtract a {w.dim}-chain from a {z.dim}-chain")
    return z - w


def chain_area(chain: ChainVector, weights: WeightVector) -> float:
    """Weighted L1 norm ``sum_j a_j |x_j|``."""
    if chain.dim != weights.dim:
        raise DimensionMismatch(f"{chain.dim}-chain measured with {weights.dim}-weights")
    v = weights.values
    return float(sum(v[i] * abs(c) for i, c in chain.coefficients.items()))


def _union_find(n: int):
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    return find, union


def support_components(complex: SimplicialComplex, chain: ChainVector, threshold: float = 0.0) -> list[set[int]]:
    """Group the support of ``chain`` by shared codimension-1 faces.

    The support is every simplex with ``|coefficient| > threshold``. Components
    are returned sorted by their smallest simplex index.
    """
    k = chain.dim
    if k < 1:
        raise DimensionMismatch("support components need chains of dimension >= 1")
    support = [i for i, c in chain.coefficients.items() if abs(c) > threshold]
    find, union = _union_find(len(support))
    simplices = complex.simplices(k)
    owner: dict[tuple[int, ...], int] = {}
    for pos, j in enumerate(support):
        s = simplices[j]
        for face in combinations(s, k):
            if face in owner:
                union(owner[face], pos)
            else:
                owner[face] = pos
    groups: dict[int, set[int]] = {}
    for pos, j in enumerate(support):
        groups.setdefault(find(pos), set()).add(j)
    return sorted(groups.values(), key=min)


def complex_components(complex: SimplicialComplex) -> int:
    """Number of connected components of the complex (via its 1-skeleton)."""
    n = complex.n_vertices
    if n == 0:
        return 0
    edges = np.array(complex.simplices(1), dtype=np.int64).reshape(-1, 2)
    adj = sp.coo_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n, n))
    count, _ = connected_components(adj, directed=False)
    return int(count)
