"""Command-line front end: ``edgekit {invariants,normal-form,verify,mesh}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .expr import ExprError
from .germ import GeometryError, SurfaceGerm
from .jet import DEFAULT_ORDER, JetError
from .mesh import Grid, MeshError, export_mesh, parse_grid, parse_range, singular_polyline
from .presets import PRESETS, preset
from .report import build_report, dumps, normal_form_report, verify_germ

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


def _source_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--expr", help='germ expression, e.g. "map(u, v^2, v^3)"')
    src.add_argument("--table", type=Path, help="JSON coefficient table")
    src.add_argument("--preset", choices=sorted(PRESETS), help="built-in germ")
    p.add_argument("--order", type=int, default=DEFAULT_ORDER, help="jet order (default 6)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edgekit", description="Invariants of cuspidal edges.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="invariant report at a point of the edge")
    _source_args(p)
    p.add_argument("--at", type=float, default=0.0, help="edge parameter in adapted coordinates")
    p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("normal-form", help="normal-form coefficients and transform log")
    _source_args(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", help="identity suite on a germ, the built-in corpus or random germs")
    _source_args(p, required=False)
    p.add_argument("--random", type=int, metavar="K", help="check K random germs instead")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("mesh", help="write an OBJ mesh and the singular-curve polyline")
    _source_args(p)
    p.add_argument("--out", type=Path, required=True, help="OBJ path; the curve goes to <stem>_singular.obj")
    p.add_argument("--grid", default="41x41", help="samples NUxNV (default 41x41)")
    p.add_argument("--range", dest="range_", default="-1:1:-1:1", help="umin:umax:vmin:vmax, e.g. --range=-2:2:-1:1")
    return parser


def load_germ(args) -> SurfaceGerm:
    if args.expr is not None:
        return SurfaceGerm.from_expressions(args.expr, args.order, name="expr")
    if args.table is not None:
        return SurfaceGerm.from_table(Path(args.table).read_text(), name=Path(args.table).stem)
    return preset(args.preset, args.order)


def _print_report(rep: dict, as_json: bool) -> None:
    if as_json:
        print(dumps(rep))
        return
    print(f"germ {rep.get('name') or '-'}  jet order {rep['jet_order']}  trusted degree {rep['trusted_degree']}")
    for section in ("classification", "invariants", "normal_form", "coefficients", "residuals", "contact"):
        if section not in rep:
            continue
        print(f"{section}:")
        for k, v in rep[section].items():
            if isinstance(v, float):
                v = f"{v:.12g}"
            print(f"  {k} = {v}")
    for entry in rep.get("transform_log", []):
        print(f"transform {entry['kind']}")


def _verify(args) -> int:
    from .sampling import random_cuspidal_germ

    rng = np.random.default_rng(args.seed)
    if args.random is not None:
        germs = []
        for k in range(args.random):
            g, _ = random_cuspidal_germ(rng, max(args.order, 6))
            germs.append(SurfaceGerm(g.f, g.evaluator, name=f"random-{k}"))
    elif args.expr or args.table or args.preset:
        germs = [load_germ(args)]
    else:
        germs = [preset(name, args.order) for name in PRESETS]
    checks = []
    for g in germs:
        checks += verify_germ(g, rng)
    if args.json:
        print(json.dumps([{"germ": c.germ, "identity": c.identity, "value": c.value, "tol": c.tol,
                           "passed": c.passed} for c in checks], indent=2))
    else:
        for c in checks:
            print(c.line())
        failed = sum(not c.passed for c in checks)
        print(f"{len(checks) - failed}/{len(checks)} identities passed")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY


def _mesh(args) -> int:
    g = load_germ(args)
    nu, nv = parse_grid(args.grid)
    grid = Grid(*parse_range(args.range_), nu, nv)
    out = Path(args.out)
    out.write_text(export_mesh(g, grid))
    curve = out.with_name(out.stem + "_singular" + out.suffix)
    curve.write_text(singular_polyline(g, grid))
    print(f"wrote {out} and {curve}")
    return EXIT_OK


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "invariants":
            _print_report(build_report(load_germ(args), args.at), args.json)
        elif args.command == "normal-form":
            _print_report(normal_form_report(load_germ(args)), args.json)
        elif args.command == "verify":
            return _verify(args)
        elif args.command == "mesh":
            return _mesh(args)
    except (ExprError, GeometryError, JetError, MeshError, KeyError, OSError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"edgekit: error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
