"""PLY meshes, vertex-loop cycle specs, and solve reports."""
from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .complex import ChainVector, SimplicialComplex, support_components
from .errors import (DimensionMismatch, IndexOutOfRange, MalformedPly, MalformedSpec, MissingEdge,
                     NonTriangleFace)

_PLY_TYPES = {
    "char": "b", "int8": "b", "uchar": "B", "uint8": "B",
    "short": "h", "int16": "h", "ushort": "H", "uint16": "H",
    "int": "i", "int32": "i", "uint": "I", "uint32": "I",
    "float": "f", "float32": "f", "double": "d", "float64": "d",
}

POSITIVE_COLOR = (215, 48, 39)
NEGATIVE_COLOR = (49, 54, 149)
NEUTRAL_COLOR = (170, 170, 170)


@dataclass
class _Property:
    name: str
    kind: str  # struct code of the value
    count_kind: str | None = None  # struct code of the list length, for list properties


@dataclass
class _Element:
    name: str
    count: int
    properties: list[_Property]


def _parse_header(data: bytes) -> tuple[str, list[_Element], int]:
    marker = data.find(b"end_header")
    if not data.startswith(b"ply") or marker < 0:
        raise MalformedPly("missing 'ply' magic or 'end_header'")
    nl = data.find(b"\n", marker)
    body_start = len(data) if nl < 0 else nl + 1
    lines = data[:marker].decode("ascii", errors="replace").splitlines()
    fmt = None
    elements: list[_Element] = []
    for line in lines[1:]:
        parts = line.split()
        if not parts or parts[0] in ("comment", "obj_info"):
            continue
        if parts[0] == "format":
            if len(parts) < 2:
                raise MalformedPly("incomplete format line")
            fmt = parts[1]
        elif parts[0] == "element":
            if len(parts) != 3 or not parts[2].isdigit():
                raise MalformedPly(f"bad element line: {line!r}")
            elements.append(_Element(parts[1], int(parts[2]), []))
        elif parts[0] == "property":
            if not elements:
                raise MalformedPly("property before any element")
            try:
                if parts[1] == "list":
                    prop = _Property(parts[4], _PLY_TYPES[parts[3]], _PLY_TYPES[parts[2]])
                else:
                    prop = _Property(parts[2], _PLY_TYPES[parts[1]])
            except (IndexError, KeyError):
                raise MalformedPly(f"bad property line: {line!r}") from None
            elements[-1].properties.append(prop)
        else:
            raise MalformedPly(f"unexpected header line: {line!r}")
    if fmt == "binary_big_endian":
        raise MalformedPly("binary big-endian PLY is not supported")
    if fmt not in ("ascii", "binary_little_endian"):
        raise MalformedPly(f"unknown PLY format {fmt!r}")
    return fmt, elements, body_start


def _read_ascii(body: bytes, elements: list[_Element]) -> dict[str, list[list]]:
    tokens = body.split()
    pos = 0
    out: dict[str, list[list]] = {}
    for el in elements:
        rows = []
        for _ in range(el.count):
            row = []
            for prop in el.properties:
                try:
                    if prop.count_kind is not None:
                        n = int(tokens[pos])
                        pos += 1
                        row.append([_number(t, prop.kind) for t in tokens[pos:pos + n]])
                        if len(row[-1]) != n:
                            raise IndexError
                        pos += n
                    else:
                        row.append(_number(tokens[pos], prop.kind))
                        pos += 1
                except (IndexError, ValueError):
                    raise MalformedPly(f"element '{el.name}' has fewer rows or values than declared") from None
            rows.append(row)
        out[el.name] = rows
    return out


def _number(token: bytes, kind: str):
    return float(token) if kind in "fd" else int(token)


def _read_binary(body: bytes, elements: list[_Element]) -> dict[str, list[list]]:
    pos = 0
    out: dict[str, list[list]] = {}
    try:
        for el in elements:
            rows = []
            if all(p.count_kind is None for p in el.properties):
                fmt = "<" + "".join(p.kind for p in el.properties)
                size = struct.calcsize(fmt)
                if pos + size * el.count > len(body):
                    raise struct.error("short buffer")
                rows = [list(r) for r in struct.iter_unpack(fmt, body[pos:pos + size * el.count])] if size else []
                pos += size * el.count
            else:
                for _ in range(el.count):
                    row = []
                    for prop in el.properties:
                        if prop.count_kind is not None:
                            (n,) = struct.unpack_from("<" + prop.count_kind, body, pos)
                            pos += struct.calcsize(prop.count_kind)
                            fmt = f"<{n}{prop.kind}"
                            row.append(list(struct.unpack_from(fmt, body, pos)))
                            pos += struct.calcsize(fmt)
                        else:
                            (v,) = struct.unpack_from("<" + prop.kind, body, pos)
                            pos += struct.calcsize(prop.kind)
                            row.append(v)
                    rows.append(row)
            out[el.name] = rows
    except struct.error:
        raise MalformedPly("binary body is shorter than the header declares") from None
    return out


def parse_ply(data: bytes) -> SimplicialComplex:
    """Read a triangle mesh (ASCII or binary little-endian PLY) into a complex.

    Face winding is discarded: every simplex takes the ascending-vertex
    orientation. Triangle ``i`` of the complex is the ``i``-th distinct face of
    the file.

    Raises:
        MalformedPly: header/body mismatch, missing x/y/z, or unsupported format.
        NonTriangleFace: a face without exactly three vertices.
        IndexOutOfRange: a face referencing a missing vertex.
    """
    fmt, elements, start = _parse_header(data)
    body = data[start:]
    rows = _read_ascii(body, elements) if fmt == "ascii" else _read_binary(body, elements)
    by_name = {el.name: el for el in elements}
    if "vertex" not in by_name:
        raise MalformedPly("no vertex element")
    names = [p.name for p in by_name["vertex"].properties]
    try:
        cols = [names.index(axis) for axis in ("x", "y", "z")]
    except ValueError:
        raise MalformedPly("vertex element lacks x, y, z properties") from None
    coords = np.array([[row[c] for c in cols] for row in rows["vertex"]], dtype=float).reshape(-1, 3)
    n = len(coords)

    faces = []
    if "face" in by_name:
        props = by_name["face"].properties
        lists = [i for i, p in enumerate(props) if p.count_kind is not None]
        named = [i for i in lists if props[i].name in ("vertex_indices", "vertex_index")]
        if not (named or lists):
            raise MalformedPly("face element has no vertex index list")
        col = (named or lists)[0]
        for f, row in enumerate(rows["face"]):
            verts = row[col]
            if len(verts) != 3:
                raise NonTriangleFace(f"face {f} has {len(verts)} vertices")
            for v in verts:
                if not 0 <= v < n:
                    raise IndexOutOfRange(f"face {f} references vertex {v}; the mesh has {n}")
            if len(set(verts)) != 3:
                raise MalformedPly(f"face {f} repeats a vertex: {verts}")
            faces.append(tuple(int(v) for v in verts))
    return SimplicialComplex(coords, faces)


def write_ply(complex: SimplicialComplex, binary: bool = False, colors: Sequence[tuple[int, int, int]] | None = None
              ) -> bytes:
    """Serialise the vertices and triangles of ``complex``; used for fixtures and colored output."""
    coords = complex.vertex_coordinates
    if coords.shape[1] < 3:
        coords = np.hstack([coords, np.zeros((len(coords), 3 - coords.shape[1]))])
    faces = complex.simplices(2)
    header = ["ply", "format binary_little_endian 1.0" if binary else "format ascii 1.0",
              f"element vertex {len(coords)}", "property double x", "property double y", "property double z",
              f"element face {len(faces)}", "property list uchar int vertex_indices"]
    if colors is not None:
        header += ["property uchar red", "property uchar green", "property uchar blue"]
    header.append("end_header")
    head = ("\n".join(header) + "\n").encode("ascii")
    if binary:
        parts = [head, np.asarray(coords[:, :3], dtype="<f8").tobytes()]
        for i, f in enumerate(faces):
            parts.append(struct.pack("<B3i", 3, *f))
            if colors is not None:
                parts.append(struct.pack("<3B", *colors[i]))
        return b"".join(parts)
    lines = [" ".join(repr(float(v)) for v in p[:3]) for p in coords]
    for i, f in enumerate(faces):
        line = f"3 {f[0]} {f[1]} {f[2]}"
        if colors is not None:
            line += " {} {} {}".format(*colors[i])
        lines.append(line)
    return head + ("\n".join(lines) + "\n").encode("ascii")


@dataclass(frozen=True)
class CycleSpec:
    """Vertex loops; consecutive vertices (cyclically) must span edges."""

    loops: tuple[tuple[int, ...], ...]

    @classmethod
    def from_text(cls, text: str | bytes) -> "CycleSpec":
        try:
            doc = json.loads(text)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise MalformedSpec(f"cycle spec is not valid JSON: {exc}") from None
        if not isinstance(doc, dict) or "loops" not in doc:
            raise MalformedSpec('cycle spec must be an object with a "loops" list')
        loops = doc["loops"]
        if not isinstance(loops, list):
            raise MalformedSpec('"loops" must be a list')
        out = []
        for i, loop in enumerate(loops):
            if not isinstance(loop, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in loop):
                raise MalformedSpec(f"loop {i} must be a list of integers")
            if len(loop) < 3:
                raise MalformedSpec(f"loop {i} has {len(loop)} vertices; at least 3 are required")
            out.append(tuple(loop))
        return cls(tuple(out))

    def to_text(self) -> str:
        return json.dumps({"loops": [list(loop) for loop in self.loops]})

    def loop_chain(self, complex: SimplicialComplex, i: int) -> ChainVector:
        loop = self.loops[i]
        acc: dict[int, float] = {}
        for a, b in zip(loop, loop[1:] + loop[:1]):
            if a == b or (min(a, b), max(a, b)) not in complex or min(a, b) < 0:
                raise MissingEdge((a, b), i)
            idx, sign = complex.orient((a, b))
            acc[idx] = acc.get(idx, 0.0) + sign
        return ChainVector(1, acc)

    def to_chain(self, complex: SimplicialComplex) -> ChainVector:
        total = ChainVector.zero(1)
        for i in range(len(self.loops)):
            total = total + self.loop_chain(complex, i)
        return total


def parse_cycle_spec(text: str | bytes, complex: SimplicialComplex) -> ChainVector:
    """Sum of the edge loops in a ``{"loops": [[v0, v1, ...], ...]}`` document.

    Traversing ``a -> b`` contributes ``+1`` to edge ``(min, max)`` when
    ``a < b`` and ``-1`` otherwise, so the result is an exact integer cycle.
    """
    return CycleSpec.from_text(text).to_chain(complex)


@dataclass
class SolveReport:
    method: str
    area: float
    residual: float
    chain: list[tuple[int, float]]
    component_count: int
    bounds: tuple[float, float] | None
    wall_time: float


def make_report(result, complex: SimplicialComplex, threshold: float = 1e-7) -> SolveReport:
    """Package a :class:`~minhomology.solvers.SolveResult` for export."""
    chain = result.chain
    components = support_components(complex, chain, threshold) if chain.dim >= 1 else []
    bounds = None if result.bounds is None else (result.bounds.lower, result.bounds.upper)
    return SolveReport(result.method, float(result.area), float(result.residual),
                       list(chain.coefficients.items()), len(components), bounds, float(result.wall_time))


def _real(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x}")
    text = format(x, ".17g")
    # keep reals recognisable as reals
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def export_report(report: SolveReport) -> bytes:
    """Deterministic JSON: fixed key order, 17 significant digits, one chain entry per line."""
    bounds = "null" if report.bounds is None else f"[{_real(report.bounds[0])}, {_real(report.bounds[1])}]"
    if report.chain:
        chain = "[\n" + ",\n".join(f"    [{int(i)}, {_real(c)}]" for i, c in report.chain) + "\n  ]"
    else:
        chain = "[]"
    lines = [
        "{",
        f'  "method": {json.dumps(report.method)},',
        f'  "area": {_real(report.area)},',
        f'  "residual": {_real(report.residual)},',
        f'  "chain": {chain},',
        f'  "component_count": {int(report.component_count)},',
        f'  "bounds": {bounds},',
        f'  "wall_time": {_real(report.wall_time)}',
        "}",
    ]
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_report(data: bytes | str) -> SolveReport:
    doc = json.loads(data)
    bounds = doc["bounds"]
    return SolveReport(doc["method"], float(doc["area"]), float(doc["residual"]),
                       [(int(i), float(c)) for i, c in doc["chain"]], int(doc["component_count"]),
                       None if bounds is None else (float(bounds[0]), float(bounds[1])),
                       float(doc["wall_time"]))


def export_colored_mesh(complex: SimplicialComplex, chain: ChainVector, threshold: float = 1e-7) -> bytes:
    """ASCII PLY of the mesh with support faces colored by coefficient sign."""
    if chain.dim != 2 or complex.dimension < 2:
        raise DimensionMismatch("colored export needs a 2-chain on a triangle mesh")
    colors = [NEUTRAL_COLOR] * complex.n_simplices(2)
    for i, c in chain.coefficients.items():
        if abs(c) > threshold:
            colors[i] = POSITIVE_COLOR if c > 0 else NEGATIVE_COLOR
    return write_ply(complex, colors=colors)
