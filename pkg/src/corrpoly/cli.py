"""Command-line frontend for the correlation polytope toolkit.

Exit codes: 0 success, 1 usage error, 2 input parse error, 3 capacity
exceeded, 4 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback

from . import io as cpio
from .core import (
    CapacityError,
    Configuration,
    ParseError,
    enumerate_events,
    parse_number,
)
from .inequalities import from_hrep, parse_text, to_text
from .polyhedra import (
    DEFAULT_RAY_CAP,
    HRepresentation,
    contains,
    enumerate_vertices,
    hull,
    verify_facet,
)
from .quantum import (
    BUILTIN_MODELS,
    builtin_model,
    parse_angle_expression,
    parse_angles,
    sample_violation_curve,
    sample_violation_grid,
    scan_violations,
)
from .vertices import DEFAULT_VERTEX_CAP, truth_table

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CAPACITY = 3
EXIT_INTERNAL = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit with code 1
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(parser, required=False):
    parser.add_argument("-n", "--particles", type=int, metavar="N",
                        help="number of particles (with -m)")
    parser.add_argument("-m", "--settings", type=int, metavar="M",
                        help="measurement settings per particle (with -n)")
    parser.add_argument("--config", metavar="M1,M2,...",
                        help="per-particle setting counts, e.g. 2,3")
    parser.set_defaults(config_required=required)


def _resolve_config(args, fallback: Configuration | None = None) -> Configuration | None:
    given_nm = args.particles is not None or args.settings is not None
    if args.config and given_nm:
        raise ValueError("--config and -n/-m are mutually exclusive")
    if args.config:
        try:
            settings = tuple(int(tok) for tok in args.config.split(","))
        except ValueError:
            raise ValueError(f"bad --config value {args.config!r}")
        return Configuration(settings)
    if given_nm:
        if args.particles is None or args.settings is None:
            raise ValueError("-n and -m must be given together")
        return Configuration.uniform(args.particles, args.settings)
    if fallback is not None:
        return fallback
    if args.config_required:
        raise ValueError("no configuration given (use -n/-m or --config)")
    return None


def _ray_cap(args) -> int:
    if args.ray_cap is not None:
        return args.ray_cap
    env = os.environ.get("CORRPOLY_RAY_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"bad CORRPOLY_RAY_CAP value {env!r}")
    return DEFAULT_RAY_CAP


def _parse_rows(text: str) -> tuple[int, int] | None:
    if text is None or text.lower() == "all":
        return None
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ValueError(f"--rows expects MIN:MAX or 'all', got {text!r}")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise ValueError(f"--rows expects MIN:MAX or 'all', got {text!r}")


def _parse_range(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ValueError(f"range expects LO:HI, got {text!r}")
    return (_const_angle(lo), _const_angle(hi))


def _const_angle(text: str) -> float:
    expr = parse_angle_expression(text)
    if not expr.is_constant:
        raise ValueError(f"range bound {text!r} must be constant")
    return expr.const


def _progress():
    state = {"last": -1}

    def report(done: int, total: int, rays: int) -> None:
        step = max(1, total // 10)
        if done % step == 0 or done == total:
            if done != state["last"]:
                state["last"] = done
                print(f"  {done}/{total} constraints, {rays} rays",
                      file=sys.stderr)

    return report


def _load_hrep(args) -> HRepresentation:
    hrep = cpio.read_ine(args.ine)
    config = _resolve_config(args, fallback=hrep.config)
    if config is not None:
        if hrep.config is None or hrep.config != config:
            hrep = HRepresentation(
                dimension=hrep.dimension, rows=hrep.rows,
                linearity=hrep.linearity, config=config,
            )
    return hrep


def cmd_events(args) -> int:
    config = _resolve_config(args)
    for ev in enumerate_events(config):
        print(ev.label())
    return EXIT_OK


def cmd_vertices(args) -> int:
    config = _resolve_config(args)
    vrep = truth_table(config, max_rows=args.vertex_cap)
    if args.output:
        path = cpio.write_ext(vrep, args.output)
        print(f"wrote {path} ({len(vrep.vertices)} vertices)")
        return EXIT_OK
    print(" ".join(ev.label() for ev in enumerate_events(config)))
    for row in vrep.vertices:
        print(" ".join(str(x) for x in row))
    return EXIT_OK


def cmd_hull(args) -> int:
    if args.ext:
        if args.particles is not None or args.settings is not None or args.config:
            raise ValueError("--ext and -n/-m/--config are mutually exclusive")
        vrep = cpio.read_ext(args.ext)
    else:
        config = _resolve_config(args)
        if config is None:
            raise ValueError("give either --ext FILE or a configuration")
        vrep = truth_table(config, max_rows=args.vertex_cap)
    progress = None if args.quiet else _progress()
    hrep = hull(vrep, order=args.order, ray_cap=_ray_cap(args), progress=progress)
    facets = len(hrep.inequality_indices)
    if args.output:
        path = cpio.write_ine(hrep, args.output)
        print(f"wrote {path}")
    extra = f" and {len(hrep.linearity)} equalities" if hrep.linearity else ""
    print(f"{facets} facets{extra}")
    return EXIT_OK


def cmd_enum(args) -> int:
    hrep = cpio.read_ine(args.ine)
    progress = None if args.quiet else _progress()
    vrep = enumerate_vertices(hrep, order=args.order, ray_cap=_ray_cap(args),
                              progress=progress)
    if vrep.is_empty:
        print("empty polyhedron")
        return EXIT_OK
    if args.output:
        path = cpio.write_ext(vrep, args.output)
        print(f"wrote {path}")
    print(f"{len(vrep.vertices)} vertices, {len(vrep.rays)} rays")
    return EXIT_OK


def cmd_inequalities(args) -> int:
    hrep = _load_hrep(args)
    config = hrep.config
    if config is None:
        raise ValueError("no configuration in file; pass -n/-m or --config")
    rows = _parse_rows(args.rows)
    indexed = list(zip(hrep.inequality_indices, from_hrep(hrep)))
    for i, ineq in indexed:
        row_no = i + 1
        if rows is None or rows[0] <= row_no <= rows[1]:
            print(to_text(ineq))
    return EXIT_OK


def cmd_violations(args) -> int:
    hrep = _load_hrep(args)
    if hrep.config is None:
        raise ValueError("no configuration in file; pass -n/-m or --config")
    model = builtin_model(args.model)
    angles = parse_angles(args.angles, hrep.config)
    if angles.free_variables:
        raise ValueError("violation scans need concrete angles (no x or y)")
    reports = scan_violations(
        hrep, model, angles=angles,
        rows=_parse_rows(args.rows), threshold=args.threshold,
    )
    if args.csv:
        cpio.write_violation_csv(reports, args.csv)
    if args.json:
        print(json.dumps({
            "violations": [
                {"row": r.row, "inequality": to_text(r.inequality),
                 "amount": r.amount}
                for r in reports
            ]
        }))
        return EXIT_OK
    for r in reports:
        print(f"{r.row}\t{r.amount:.9g}\t{to_text(r.inequality)}")
    print(f"{len(reports)} violated", file=sys.stderr)
    return EXIT_OK


def cmd_plot(args) -> int:
    hrep = _load_hrep(args)
    if hrep.config is None:
        raise ValueError("no configuration in file; pass -n/-m or --config")
    model = builtin_model(args.model)
    angles = parse_angles(args.angles, hrep.config)
    curves = sample_violation_curve(
        hrep, model, angles=angles,
        x_range=_parse_range(args.range), samples=args.samples,
        rows=_parse_rows(args.rows), threshold=args.threshold,
    )
    if not curves:
        print("no violated inequalities in range")
        return EXIT_OK
    path = cpio.write_curve_csv(curves, args.output)
    print(f"wrote {path} ({len(curves)} curves)")
    if args.svg:
        print(f"wrote {cpio.render_svg(curves, args.svg)}")
    return EXIT_OK


def cmd_contour(args) -> int:
    hrep = _load_hrep(args)
    if hrep.config is None:
        raise ValueError("no configuration in file; pass -n/-m or --config")
    model = builtin_model(args.model)
    angles = parse_angles(args.angles, hrep.config)
    grids = sample_violation_grid(
        hrep, model, angles=angles,
        x_range=_parse_range(args.range_x), y_range=_parse_range(args.range_y),
        samples_x=args.samples, samples_y=args.samples,
        rows=_parse_rows(args.rows), threshold=args.threshold,
    )
    if not grids:
        print("no violated inequalities in range")
        return EXIT_OK
    for grid in grids:
        path = cpio.write_grid_csv(grid, f"{args.output}_row{grid.row}.csv")
        print(f"wrote {path}")
        if args.svg:
            print(f"wrote {cpio.render_svg(grid, f'{args.output}_row{grid.row}.svg')}")
    return EXIT_OK


def cmd_verify(args) -> int:
    config = _resolve_config(args)
    ineq = parse_text(args.ineq, config)
    vrep = truth_table(config, max_rows=args.vertex_cap)
    report = verify_facet(ineq.to_hrow(), vrep)
    if args.json:
        print(json.dumps({
            "valid": report.valid,
            "tight_count": report.tight_count,
            "is_facet": report.is_facet,
        }))
    else:
        print(f"valid: {'yes' if report.valid else 'no'}")
        print(f"tight generators: {report.tight_count}")
        print(f"facet: {'yes' if report.is_facet else 'no'}")
    return EXIT_OK


def cmd_contains(args) -> int:
    hrep = cpio.read_ine(args.ine)
    point = tuple(parse_number(tok) for tok in args.point.split(","))
    inside = contains(hrep, point)
    if args.json:
        print(json.dumps({"contains": inside}))
    else:
        print("yes" if inside else "no")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="corrpoly",
                     description="correlation polytope toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("events", help="list canonical event labels")
    _add_config_flags(p, required=True)
    p.set_defaults(func=cmd_events)

    p = sub.add_parser("vertices", help="truth-table vertices (print or .ext)")
    _add_config_flags(p, required=True)
    p.add_argument("-o", "--output", metavar="FILE", help="write a .ext file")
    p.add_argument("--vertex-cap", type=int, default=DEFAULT_VERTEX_CAP)
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("hull", help="facet enumeration (V- to H-representation)")
    _add_config_flags(p)
    p.add_argument("--ext", metavar="FILE", help="read vertices from a .ext file")
    p.add_argument("-o", "--output", metavar="FILE", help="write a .ine file")
    p.add_argument("--order", default="lexmin",
                   help="constraint insertion order: lexmin, given, random:SEED")
    p.add_argument("--ray-cap", type=int, default=None,
                   help="intermediate ray cap (or env CORRPOLY_RAY_CAP)")
    p.add_argument("--vertex-cap", type=int, default=DEFAULT_VERTEX_CAP)
    p.add_argument("--threads", type=int, default=None,
                   help="cap kernel parallelism (results are identical for any value)")
    p.add_argument("-q", "--quiet", action="store_true",
                   help="suppress progress output")
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("enum", help="vertex enumeration (H- to V-representation)")
    p.add_argument("--ine", required=True, metavar="FILE")
    p.add_argument("-o", "--output", metavar="FILE", help="write a .ext file")
    p.add_argument("--order", default="lexmin")
    p.add_argument("--ray-cap", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("-q", "--quiet", action="store_true")
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("inequalities", help="print readable inequalities")
    _add_config_flags(p)
    p.add_argument("--ine", required=True, metavar="FILE")
    p.add_argument("--rows", default=None, metavar="MIN:MAX|all")
    p.set_defaults(func=cmd_inequalities)

    p = sub.add_parser("violations", help="scan for quantum violations")
    _add_config_flags(p)
    p.add_argument("--ine", required=True, metavar="FILE")
    p.add_argument("--model", required=True, choices=BUILTIN_MODELS)
    p.add_argument("--angles", required=True,
                   metavar="'0,2pi/3;0,pi'",
                   help="per particle, comma-separated; particles split by ';'")
    p.add_argument("--threshold", type=float, default=0.0)
    p.add_argument("--rows", default=None, metavar="MIN:MAX|all")
    p.add_argument("--csv", metavar="FILE", help="also write a CSV report")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_violations)

    p = sub.add_parser("plot", help="violation curves over one free variable x")
    _add_config_flags(p)
    p.add_argument("--ine", required=True, metavar="FILE")
    p.add_argument("--model", required=True, choices=BUILTIN_MODELS)
    p.add_argument("--angles", required=True)
    p.add_argument("--range", default="0:pi", metavar="LO:HI")
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--threshold", type=float, default=0.0)
    p.add_argument("--rows", default=None, metavar="MIN:MAX|all")
    p.add_argument("-o", "--output", required=True, metavar="CSV")
    p.add_argument("--svg", metavar="FILE")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("contour", help="violation grids over free variables x, y")
    _add_config_flags(p)
    p.add_argument("--ine", required=True, metavar="FILE")
    p.add_argument("--model", required=True, choices=BUILTIN_MODELS)
    p.add_argument("--angles", required=True)
    p.add_argument("--range-x", default="0:pi", metavar="LO:HI")
    p.add_argument("--range-y", default="0:pi", metavar="LO:HI")
    p.add_argument("--samples", type=int, default=41)
    p.add_argument("--threshold", type=float, default=0.0)
    p.add_argument("--rows", default=None, metavar="MIN:MAX|all")
    p.add_argument("-o", "--output", required=True, metavar="PREFIX")
    p.add_argument("--svg", action="store_true", help="also write SVG per grid")
    p.set_defaults(func=cmd_contour)

    p = sub.add_parser("verify", help="check an inequality against a configuration")
    _add_config_flags(p, required=True)
    p.add_argument("--ineq", required=True, metavar="'a1 - a1b1 + b1 <= 1'")
    p.add_argument("--vertex-cap", type=int, default=DEFAULT_VERTEX_CAP)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("contains", help="exact membership test for a point")
    p.add_argument("--ine", required=True, metavar="FILE")
    p.add_argument("--point", required=True, metavar="X1,X2,...",
                   help="exact coordinates, e.g. 3/5,18/25,8/25")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_contains)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"corrpoly: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapacityError as exc:
        print(f"corrpoly: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except OSError as exc:
        print(f"corrpoly: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"corrpoly: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
