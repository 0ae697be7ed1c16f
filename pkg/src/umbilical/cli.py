"""Command line interface: analyze, detect, synthesize, convert, selftest.

Exit codes for ``detect``: 0 umbilical or totally geodesic, 1 not umbilical,
2 inconclusive; every error exits with 3 or more.
"""

import argparse
import sys
from dataclasses import fields

import numpy as np

from . import io as curve_io
from . import selftest
from .detect import DEFAULTS, Verdict, detect, detect_rm
from .errors import GeodesicPointError, UmbilicalError
from .frames import SampledCurve, frenet_apparatus, rm_apparatus
from .spaceform import classify_surface, from_upper_halfspace, random_isometry, to_upper_halfspace
from .synth import (
    DEFAULT_DS,
    sphere_speed_constant,
    synthesize_geodesic_sphere_s3,
    synthesize_horosphere,
    synthesize_on_surface,
    trimmed_window,
)

EXIT_CODES = {
    Verdict.UMBILICAL_NON_GEODESIC: 0,
    Verdict.TOTALLY_GEODESIC: 0,
    Verdict.NOT_UMBILICAL: 1,
    Verdict.INCONCLUSIVE: 2,
}
EXIT_ERROR = 3
EXIT_IO = 4

# canonical generating normals for --surface choices in H^3
SURFACE_NORMALS = {
    "equidistant": ([1.0, 0.0, 0.0, 0.0], 1.5),
    "h3-sphere": ([0.0, 0.0, 0.0, -1.0], 2.0),
}


def _emit(text, output):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="ascii") as fh:
            fh.write(text)


def _read(path):
    if path == "-":
        return curve_io.parse_curve(sys.stdin.read())
    return curve_io.read_curve(path)


def cmd_analyze(args):
    curve = _read(args.input)
    if args.mode == "rm" or curve.n != 2:
        rm = rm_apparatus(curve)
        cols = {"s": rm.s}
        for i in range(rm.n):
            cols[f"kappa_{i + 1}"] = rm.kappas[:, i]
        _emit(curve_io.format_table(cols), args.output)
        k = np.linalg.norm(rm.kappas[~rm.low_confidence], axis=1)
        print(f"samples={len(curve)} mode=rm |kappa| min={k.min():.10g} max={k.max():.10g}",
              file=sys.stderr)
        return 0
    fr = frenet_apparatus(curve, kappa_min=args.kappa_min)
    _emit(curve_io.format_frenet(fr), args.output)
    m = fr.interior
    print(f"samples={len(curve)} mode=frenet kappa min={fr.kappa[m].min():.10g} "
          f"max={fr.kappa[m].max():.10g} tau mean={fr.tau[m].mean():.10g} "
          f"std={fr.tau[m].std():.3g} min={fr.tau[m].min():.10g} max={fr.tau[m].max():.10g}",
          file=sys.stderr)
    return 0


def _thresholds(args):
    overrides = {f.name: getattr(args, f.name, None) for f in fields(DEFAULTS)}
    return DEFAULTS.replace(**overrides)


def cmd_detect(args):
    curve = _read(args.input)
    th = _thresholds(args)
    if args.mode == "rm" or curve.n != 2:
        frame = None
        if args.seed is not None:
            # seeded rotation of the default initial RM frame
            base = rm_apparatus(curve).normals[0]
            q, _ = np.linalg.qr(np.random.default_rng(args.seed).normal(size=(curve.n, curve.n)))
            frame = q @ base
        report = detect_rm(curve, thresholds=th, initial_frame=frame)
    else:
        report = detect(curve, thresholds=th)
    _emit(curve_io.dumps_report(report), args.output)
    return EXIT_CODES[report.verdict]


def _s3_initial_speed(args):
    dtheta0 = 1.0 if args.dtheta0 is None else args.dtheta0
    if args.dphi0 is not None:
        return args.dphi0, dtheta0
    rest = sphere_speed_constant(args.sigma) - np.cos(args.phi0) ** 2 * dtheta0 ** 2
    if rest < 0:
        raise UmbilicalError("--dtheta0 too large for the speed constraint")
    return float(np.sqrt(rest)), dtheta0


def _synthesize(args):
    common = {"ds": args.ds, "phase": args.phase}
    if args.range is not None:
        common["s_range"] = tuple(args.range)
    if args.surface == "horosphere":
        return synthesize_horosphere(args.tau, s0=args.s0, x1_0=args.x1, x2_0=args.x2,
                                     mirror=args.branch == -1, **common)
    if args.surface == "s3-sphere":
        sigma = 0.5 if args.sigma is None else args.sigma
        args.sigma = sigma
        dphi0, dtheta0 = _s3_initial_speed(args)
        s0 = args.s0
        if s0 is None:
            lo, hi = common.get("s_range", trimmed_window(args.tau, args.phase))
            s0 = np.pi / 4 if lo <= np.pi / 4 <= hi else 0.5 * (lo + hi)
        return synthesize_geodesic_sphere_s3(args.tau, s0=s0, phi0=args.phi0,
                                             theta0=args.theta0, dphi0=dphi0,
                                             dtheta0=dtheta0, sigma=sigma,
                                             branch=args.branch, **common)
    normal, default_sigma = SURFACE_NORMALS[args.surface]
    sigma = default_sigma if args.sigma is None else args.sigma
    surface = classify_surface(normal, sigma, -1)
    return synthesize_on_surface(surface, args.tau, s0=args.s0, branch=args.branch, **common)


def cmd_synthesize(args):
    curve = _synthesize(args)
    if args.seed is not None:
        curve = curve.transformed(random_isometry(curve.c, seed=args.seed, dim=curve.dim))
    _emit(curve_io.format_curve(curve), args.output)
    if args.upper_halfspace:
        if curve.c != -1:
            raise UmbilicalError("--upper-halfspace needs a curve in H^3")
        _emit(curve_io.format_upper_halfspace(curve.s, to_upper_halfspace(curve.points)),
              args.upper_halfspace)
    return 0


def _parse_upper_halfspace(text):
    lines = text.splitlines()
    if not lines or [h.strip() for h in lines[0].split(",")] != ["s", "x", "y", "z"]:
        raise curve_io.CurveFormatError("expected header s,x,y,z", line=1)
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            row = [float(v) for v in line.split(",")]
        except ValueError:
            raise curve_io.CurveFormatError("non-numeric field", line=lineno) from None
        if len(row) != 4:
            raise curve_io.CurveFormatError(f"expected 4 fields, got {len(row)}", line=lineno)
        rows.append(row)
    if len(rows) < 2:
        raise curve_io.CurveFormatError("need at least two samples", line=len(lines) + 1)
    return np.array(rows)


def cmd_convert(args):
    if args.to == "upper-halfspace":
        curve = _read(args.input)
        if curve.c != -1 or curve.dim != 4:
            raise UmbilicalError("conversion to the upper half-space needs a curve in H^3")
        text = curve_io.format_upper_halfspace(curve.s, to_upper_halfspace(curve.points))
    else:
        if args.input == "-":
            source = sys.stdin.read()
        else:
            with open(args.input, encoding="ascii") as fh:
                source = fh.read()
        data = _parse_upper_halfspace(source)
        s = data[:, 0]
        ds = args.ds if args.ds is not None else float(np.median(np.diff(s)))
        curve = SampledCurve(-1, s, from_upper_halfspace(data[:, 1:]), ds)
        text = curve_io.format_curve(curve)
    _emit(text, args.output)
    return 0


def cmd_selftest(args):
    results = selftest.run(ds=args.ds)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    common.add_argument("--seed", type=int, default=None, help="seed for every random choice")

    parser = argparse.ArgumentParser(
        prog="umbilical",
        description="Curves in space forms and the totally umbilical surfaces containing them.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="per-sample curvature table")
    p.add_argument("input", help="curve CSV ('-' for stdin)")
    p.add_argument("--mode", choices=("frenet", "rm"), default="frenet")
    p.add_argument("--kappa-min", type=float, default=DEFAULTS.kappa_min)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("detect", parents=[common], help="decide umbilical membership")
    p.add_argument("input", help="curve CSV ('-' for stdin)")
    p.add_argument("--mode", choices=("frenet", "rm"), default="frenet")
    for f in fields(DEFAULTS):
        p.add_argument("--" + f.name.replace("_", "-"), dest=f.name, type=float,
                       default=None, help=f"default {f.default:g}")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("synthesize", parents=[common], help="constant torsion curve")
    p.add_argument("--surface", choices=("horosphere", "s3-sphere", "equidistant", "h3-sphere"),
                   default="horosphere")
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--s0", type=float, default=None)
    p.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"), default=None)
    p.add_argument("--ds", type=float, default=DEFAULT_DS)
    p.add_argument("--phase", type=float, default=0.0)
    p.add_argument("--branch", type=int, choices=(1, -1), default=1,
                   help="-1 gives the mirror curve")
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--x1", type=float, default=0.0, help="horosphere x1(s0)")
    p.add_argument("--x2", type=float, default=0.0, help="horosphere x2(s0)")
    p.add_argument("--phi0", type=float, default=0.0)
    p.add_argument("--theta0", type=float, default=0.0)
    p.add_argument("--dphi0", type=float, default=None,
                   help="default: solved from the speed constraint")
    p.add_argument("--dtheta0", type=float, default=None)
    p.add_argument("--upper-halfspace", default=None, metavar="PATH",
                   help="also write the upper half-space image (s,x,y,z)")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("convert", parents=[common], help="hyperboloid <-> upper half-space")
    p.add_argument("input")
    p.add_argument("--to", choices=("upper-halfspace", "hyperquadric"), required=True)
    p.add_argument("--ds", type=float, default=None, help="step for the hyperquadric file")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    p.add_argument("--ds", type=float, default=DEFAULT_DS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GeodesicPointError as exc:
        print(f"error: {exc} (sample indices {exc.window[0]}..{exc.window[1]})"
              if exc.window else f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except UmbilicalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
