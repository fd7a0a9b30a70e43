"""Command-line interface: ``minhom {distance,validate,info}``.

Exit codes: 0 on success, 1 for unreadable or invalid input, 2 when the two
cycles are not homologous.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .complex import complex_components, simplex_measures
from .errors import LpNumericalFailure, MalformedPly, MalformedSpec, MinHomologyError, NotHomologous, ZeroAreaSimplex
from .mesh_io import CycleSpec, export_colored_mesh, export_report, make_report, parse_ply
from .solvers import SolverConfig, solve

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_HOMOLOGOUS = 2


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _load_mesh(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise MalformedPly(f"{path}: {exc.strerror or exc}") from None
    try:
        return parse_ply(data)
    except MinHomologyError as exc:
        raise type(exc)(f"{path}: {exc}") from None


def _load_spec(path: str) -> CycleSpec:
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise MalformedSpec(f"{path}: {exc}") from None
    try:
        return CycleSpec.from_text(text)
    except MalformedSpec as exc:
        raise MalformedSpec(f"{path}: {exc}") from None


def _spec_chain(spec: CycleSpec, complex, path: str):
    try:
        return spec.to_chain(complex)
    except MalformedSpec as exc:
        raise MalformedSpec(f"{path}: {exc}") from None


def cmd_distance(args) -> int:
    try:
        mesh = _load_mesh(args.mesh)
        z = _spec_chain(_load_spec(args.cycle_a), mesh, args.cycle_a)
        w = _spec_chain(_load_spec(args.cycle_b), mesh, args.cycle_b)
        config = SolverConfig(residual_tol=args.residual_tol, support_threshold=args.support_threshold,
                              area_clamp=args.clamp_area)
    except (MinHomologyError, ValueError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    if mesh.dimension < 2:
        _err(f"{args.mesh}: mesh has no faces")
        return EXIT_INPUT
    try:
        result = solve(args.method, mesh.boundary(2), simplex_measures(mesh, 2), z - w, config)
    except NotHomologous:
        _err(f"cycles are not homologous: {args.cycle_a} vs {args.cycle_b}")
        return EXIT_NOT_HOMOLOGOUS
    except ZeroAreaSimplex as exc:
        _err(f"{args.mesh}: {exc}; pass --clamp-area EPS to clamp them")
        return EXIT_INPUT
    except LpNumericalFailure as exc:
        _err(f"linear program failed: {exc}")
        return EXIT_INPUT

    report = export_report(make_report(result, mesh, config.support_threshold))
    try:
        if args.out:
            Path(args.out).write_bytes(report)
        else:
            sys.stdout.write(report.decode())
        if args.mesh_out:
            Path(args.mesh_out).write_bytes(export_colored_mesh(mesh, result.chain, config.support_threshold))
    except OSError as exc:
        _err(f"cannot write output: {exc}")
        return EXIT_INPUT
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        mesh = _load_mesh(args.mesh)
        spec = _load_spec(args.cycle)
    except MinHomologyError as exc:
        _err(str(exc))
        return EXIT_INPUT
    print(f"loops: {len(spec.loops)}")
    print(f"edges: {sum(len(loop) for loop in spec.loops)}")
    status = EXIT_OK
    total = None
    for i, loop in enumerate(spec.loops):
        try:
            chain = spec.loop_chain(mesh, i)
        except MalformedSpec as exc:
            print(f"loop {i}: invalid ({exc})")
            if status == EXIT_OK:
                _err(f"{args.cycle}: {exc}")
            status = EXIT_INPUT
            continue
        print(f"loop {i}: valid, {len(loop)} edges")
        total = chain if total is None else total + chain
    if status == EXIT_OK:
        if total is None or total.is_zero():
            print("cycle: zero chain")
        else:
            print(f"cycle: {len(total.coefficients)} edges in support")
    return status


def cmd_info(args) -> int:
    try:
        mesh = _load_mesh(args.mesh)
    except MinHomologyError as exc:
        _err(str(exc))
        return EXIT_INPUT
    nv, ne, nf = mesh.n_simplices(0), mesh.n_simplices(1), mesh.n_simplices(2)
    comps = complex_components(mesh)
    print(f"{nv} vertices, {ne} edges, {nf} faces, {comps} component{'s' if comps != 1 else ''}")
    if nf:
        areas = simplex_measures(mesh, 2)
        print(f"face area: min {areas.min:.17g}, max {areas.max:.17g}, total {float(areas.values.sum()):.17g}")
        bad = areas.degenerate()
        if len(bad):
            shown = " ".join(str(i) for i in bad[:20])
            print(f"degenerate faces: {len(bad)} ({shown}{' ...' if len(bad) > 20 else ''})")
        else:
            print("degenerate faces: none")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minhom", description="Minimum-area homologies between cycles on meshes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", help="minimum-area bounding chain between two cycles")
    p.add_argument("mesh")
    p.add_argument("cycle_a")
    p.add_argument("cycle_b")
    p.add_argument("--method", choices=["lp", "omp", "l2", "count"], default="lp")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--mesh-out", help="write the mesh with the chain colored as ASCII PLY")
    p.add_argument("--residual-tol", type=float, default=1e-9)
    p.add_argument("--clamp-area", type=float, default=None, metavar="EPS",
                   help="replace face areas below EPS with EPS instead of rejecting the mesh")
    p.add_argument("--support-threshold", type=float, default=1e-7)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("validate", help="check a cycle spec against a mesh")
    p.add_argument("mesh")
    p.add_argument("cycle")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("info", help="mesh statistics")
    p.add_argument("mesh")
    p.set_defaults(func=cmd_info)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
