"""Small triangulations used as fixtures and benchmarks.

All generators return a :class:`SimplicialComplex`; helpers that produce cycles
return vertex loops (the cycle-spec format) or chains directly.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .complex import ChainVector, SimplicialComplex, boundary_of


def tetrahedron(regular: bool = True, solid: bool = False) -> SimplicialComplex:
    """Tetrahedron surface (or solid, if ``solid``).

    ``regular=True`` gives unit edge length; otherwise the corner tetrahedron
    with vertices at the origin and the three unit points.
    """
    if regular:
        s = 1.0 / (2.0 * math.sqrt(2.0))
        coords = s * np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    else:
        coords = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float)
    if solid:
        return SimplicialComplex(coords, [(0, 1, 2, 3)])
    return SimplicialComplex(coords, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


def octahedron(edge_length: float = 1.0) -> SimplicialComplex:
    """Regular octahedron; vertices 0..5 are +x, -x, +y, -y, +z, -z."""
    s = edge_length / math.sqrt(2.0)
    coords = s * np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], dtype=float)
    faces = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    return SimplicialComplex(coords, faces)


#: the octahedron's equator, as a vertex loop
OCTAHEDRON_EQUATOR = [0, 2, 1, 3]


def icosphere(frequency: int = 1, radius: float = 1.0) -> SimplicialComplex:
    """Geodesic sphere: each icosahedron face split into ``frequency**2`` triangles.

    Has ``10 f^2 + 2`` vertices and ``20 f^2`` faces.
    """
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    base = np.array([
        [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
        [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
        [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
    ], dtype=float)
    base_faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    f = frequency
    coords: list[np.ndarray] = []
    lookup: dict[tuple, int] = {}

    def vertex(a, b, c, i, j):
        # barycentric weights in units of 1/f, keyed independently of face orientation
        w = {a: f - i - j, b: i, c: j}
        key = tuple(sorted((v, k) for v, k in w.items() if k))
        if key not in lookup:
            p = sum(base[v] * k for v, k in w.items()) / f
            lookup[key] = len(coords)
            coords.append(radius * p / np.linalg.norm(p))
        return lookup[key]

    faces = []
    for a, b, c in base_faces:
        for i in range(f):
            for j in range(f - i):
                faces.append((vertex(a, b, c, i, j), vertex(a, b, c, i + 1, j), vertex(a, b, c, i, j + 1)))
                if i + j < f - 1:
                    faces.append((vertex(a, b, c, i + 1, j), vertex(a, b, c, i + 1, j + 1), vertex(a, b, c, i, j + 1)))
    return SimplicialComplex(np.array(coords), faces)


def uv_sphere(n_lon: int, n_rings: int, radius: float = 1.0) -> SimplicialComplex:
    """Latitude/longitude sphere with ``2 * n_lon * n_rings`` faces.

    Vertex 0 is the north pole, vertex 1 the south pole, and ring ``r``
    (0 = northmost) holds vertices ``2 + r * n_lon + i``.
    """
    coords = [[0.0, 0.0, radius], [0.0, 0.0, -radius]]
    for r in range(n_rings):
        theta = math.pi * (r + 1) / (n_rings + 1)
        for i in range(n_lon):
            phi = 2.0 * math.pi * i / n_lon
            coords.append([radius * math.sin(theta) * math.cos(phi),
                           radius * math.sin(theta) * math.sin(phi),
                           radius * math.cos(theta)])

    def v(r, i):
        return 2 + r * n_lon + i % n_lon

    faces = []
    for i in range(n_lon):
        faces.append((0, v(0, i), v(0, i + 1)))
        faces.append((1, v(n_rings - 1, i + 1), v(n_rings - 1, i)))
    for r in range(n_rings - 1):
        for i in range(n_lon):
            faces.append((v(r, i), v(r + 1, i), v(r + 1, i + 1)))
            faces.append((v(r, i), v(r + 1, i + 1), v(r, i + 1)))
    return SimplicialComplex(np.array(coords), faces)


def uv_latitude_loop(n_lon: int, ring: int) -> list[int]:
    """Vertex loop along ring ``ring`` of :func:`uv_sphere`."""
    return [2 + ring * n_lon + i for i in range(n_lon)]


def square_annulus() -> SimplicialComplex:
    """Planar 8-triangle annulus between the squares of half-width 1 and 2.

    Inner loop is vertices 0..3, outer loop 4..7 (both counter-clockwise).
    """
    inner = [(1, 1), (-1, 1), (-1, -1), (1, -1)]
    outer = [(2, 2), (-2, 2), (-2, -2), (2, -2)]
    coords = np.array([[x, y, 0.0] for x, y in inner + outer])
    faces = []
    for i in range(4):
        j = (i + 1) % 4
        faces.append((i, 4 + i, 4 + j))
        faces.append((i, 4 + j, j))
    return SimplicialComplex(coords, faces)


ANNULUS_INNER = [0, 1, 2, 3]
ANNULUS_OUTER = [4, 5, 6, 7]


def grid_disk(rows: int, cols: int, spacing: float = 1.0) -> SimplicialComplex:
    """Planar ``rows x cols`` grid of squares, each split along a diagonal.

    Vertex ``(r, c)`` has index ``r * (cols + 1) + c``.
    """
    coords = [[c * spacing, r * spacing, 0.0] for r in range(rows + 1) for c in range(cols + 1)]

    def v(r, c):
        return r * (cols + 1) + c

    faces = []
    for r in range(rows):
        for c in range(cols):
            faces.append((v(r, c), v(r, c + 1), v(r + 1, c + 1)))
            faces.append((v(r, c), v(r + 1, c + 1), v(r + 1, c)))
    return SimplicialComplex(np.array(coords), faces)


def torus(n: int = 3, m: int = 3, major: float = 2.0, minor: float = 1.0) -> SimplicialComplex:
    """Grid torus with ``n * m`` vertices; vertex ``(i, j)`` has index ``i * m + j``.

    ``i`` runs around the central axis and ``j`` around the tube.
    """
    if n < 3 or m < 3:
        raise ValueError("torus grid needs n, m >= 3")
    coords = []
    for i in range(n):
        u = 2.0 * math.pi * i / n
        for j in range(m):
            t = 2.0 * math.pi * j / m
            coords.append([(major + minor * math.cos(t)) * math.cos(u),
                           (major + minor * math.cos(t)) * math.sin(u),
                           minor * math.sin(t)])

    def v(i, j):
        return (i % n) * m + j % m

    faces = []
    for i in range(n):
        for j in range(m):
            faces.append((v(i, j), v(i + 1, j), v(i + 1, j + 1)))
            faces.append((v(i, j), v(i, j + 1), v(i + 1, j + 1)))
    return SimplicialComplex(np.array(coords), faces)


def torus_meridian(n: int, m: int, i: int = 0) -> list[int]:
    """Loop around the tube at position ``i``; nonzero in first homology."""
    return [(i % n) * m + j for j in range(m)]


def torus_longitude(n: int, m: int, j: int = 0) -> list[int]:
    return [i * m + j % m for i in range(n)]


def mobius_strip(m: int = 5) -> SimplicialComplex:
    """Möbius band made of ``m`` squares (``2m`` triangles, ``2m`` vertices).

    Top vertices are ``0..m-1`` and bottom vertices ``m..2m-1``; the last
    square joins top to bottom with a half twist.
    """
    coords = []
    for v in (1.0, -1.0):
        for i in range(m):
            u = 2.0 * math.pi * i / m
            r = 1.0 + 0.5 * v * math.cos(u / 2.0)
            coords.append([r * math.cos(u), r * math.sin(u), 0.5 * v * math.sin(u / 2.0)])
    top = list(range(m))
    bottom = list(range(m, 2 * m))
    faces = []
    for i in range(m - 1):
        faces.append((top[i], top[i + 1], bottom[i]))
        faces.append((top[i + 1], bottom[i + 1], bottom[i]))
    faces.append((top[m - 1], bottom[0], bottom[m - 1]))
    faces.append((bottom[0], top[0], bottom[m - 1]))
    return SimplicialComplex(np.array(coords), faces)


def mobius_boundary_loop(m: int = 5) -> list[int]:
    """The single boundary circle of :func:`mobius_strip`, which winds twice."""
    return list(range(m)) + list(range(m, 2 * m))


def mobius_core_loop(m: int = 5) -> list[int]:
    """An edge loop that winds once around the band."""
    return list(range(m)) + [m]


def path_graph(lengths: Sequence[float]) -> SimplicialComplex:
    """1-complex on a line with consecutive edge lengths ``lengths``."""
    xs = np.concatenate([[0.0], np.cumsum(lengths)])
    coords = np.column_stack([xs, np.zeros_like(xs)])
    return SimplicialComplex(coords, [(i, i + 1) for i in range(len(lengths))])


def perturbed(complex: SimplicialComplex, rng: np.random.Generator, amount: float = 0.1) -> SimplicialComplex:
    """Copy of ``complex`` with each vertex scaled radially by ``1 + U(-amount, amount)``."""
    coords = np.array(complex.vertex_coordinates)
    coords *= 1.0 + rng.uniform(-amount, amount, size=(len(coords), 1))
    top = complex.dimension
    return SimplicialComplex(coords, complex.simplices(top))


def coherent_orientation(complex: SimplicialComplex, dim: int = 2) -> np.ndarray | None:
    """Signs making every interior ``(dim-1)``-face cancel between its two cofaces.

    Orientation is propagated across shared faces, one connected component at a
    time starting from the lowest-indexed simplex (sign +1). Returns ``None`` if
    some component is not orientable or a face has more than two cofaces.
    """
    faces = complex.simplices(dim)
    D = complex.boundary(dim).matrix.tocsr()
    incident: dict[int, list[tuple[int, int]]] = {}
    for e in range(D.shape[0]):
        lo, hi = D.indptr[e], D.indptr[e + 1]
        members = list(zip(D.indices[lo:hi].tolist(), D.data[lo:hi].tolist()))
        if len(members) > 2:
            return None
        for f, s in members:
            incident.setdefault(f, []).append((e, s))
    rows = {e: list(zip(D.indices[D.indptr[e]:D.indptr[e + 1]].tolist(),
                        D.data[D.indptr[e]:D.indptr[e + 1]].tolist())) for e in range(D.shape[0])}
    signs = np.zeros(len(faces), dtype=np.int64)
    for start in range(len(faces)):
        if signs[start]:
            continue
        signs[start] = 1
        stack = [start]
        while stack:
            f = stack.pop()
            for e, s in incident.get(f, []):
                for g, t in rows[e]:
                    if g == f:
                        continue
                    want = -signs[f] * s * t
                    if signs[g] == 0:
                        signs[g] = want
                        stack.append(g)
                    elif signs[g] != want:
                        return None
    return signs


def region_chain(complex: SimplicialComplex, faces: Iterable[int], dim: int = 2) -> ChainVector:
    """Indicator chain of a set of ``dim``-simplices.

    Uses a coherent orientation when the complex has one, so the boundary of the
    chain is the geometric outline of the region; otherwise every simplex gets
    coefficient +1 in its reference orientation.
    """
    signs = coherent_orientation(complex, dim)
    if signs is None:
        return ChainVector(dim, {int(f): 1.0 for f in faces})
    return ChainVector(dim, {int(f): float(signs[f]) for f in faces})


def region_boundary(complex: SimplicialComplex, faces: Iterable[int], dim: int = 2) -> ChainVector:
    return boundary_of(complex, region_chain(complex, faces, dim))


def face_regions(complex: SimplicialComplex, cut_edges: Iterable[int], dim: int = 2) -> list[set[int]]:
    """Flood-fill ``dim``-simplices across every shared face not in ``cut_edges``."""
    cut = set(int(e) for e in cut_edges)
    faces = complex.simplices(dim)
    by_edge: dict[int, list[int]] = {}
    for f, s in enumerate(faces):
        for i in range(dim + 1):
            e = complex.index(s[:i] + s[i + 1:])
            if e not in cut:
                by_edge.setdefault(e, []).append(f)
    seen = [False] * len(faces)
    nbrs: list[list[int]] = [[] for _ in faces]
    for members in by_edge.values():
        for a in members:
            nbrs[a].extend(b for b in members if b != a)
    regions = []
    for start in range(len(faces)):
        if seen[start]:
            continue
        stack, region = [start], set()
        seen[start] = True
        while stack:
            f = stack.pop()
            region.add(f)
            for g in nbrs[f]:
                if not seen[g]:
                    seen[g] = True
                    stack.append(g)
        regions.append(region)
    return regions
