"""The ``selfx`` command line.

Exit codes: 0 success, 1 solver failure, 2 exceptional input (status JSON on
stdout), 3 embedding budget exceeded, 64 bad usage or input, 66 output could
not be written.
"""

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import documents, geometry, render
from .embedder import EmbeddingRequest, embed
from .errors import (
    BudgetExceeded,
    DegenerateInput,
    DomainError,
    ExceptionalInput,
    InsufficientSamples,
    RangeError,
    SaturationWarning,
    SelfxError,
)
from .intersector import DEFAULT_TOLERANCES, extremal, self_intersections, upper_bound
from .laurent import sample
from .oracle import OracleConfig, compare, oracle_self_intersections

EXIT_OK = 0
EXIT_SOLVER = 1
EXIT_EXCEPTIONAL = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64
EXIT_WRITE = 66

#: samples used when a Laurent document is rendered or embedded
CURVE_SAMPLES = 4096


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


class _WriteFailure(Exception):
    pass


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _emit(obj, out):
    out.write(json.dumps(obj, default=_json_default, allow_nan=False) + "\n")


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise _WriteFailure(f"cannot write {path}: {exc}") from exc


def _tolerances(args):
    tol = DEFAULT_TOLERANCES
    if args.tol_unit is not None:
        tol = replace(tol, unit=args.tol_unit)
    if args.tol_image is not None:
        tol = replace(tol, image=args.tol_image)
    if args.tol_cluster is not None:
        tol = replace(tol, cluster=args.tol_cluster)
    return tol


def _oracle_config(args):
    try:
        return OracleConfig(grid_size=args.grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _laurent_input(path):
    doc = documents.read_document(path)
    if doc.kind != "laurent":
        raise UsageError(f"expected a laurent document, got {doc.kind}")
    return doc.payload


def _exceptional(exc, out):
    _emit({"status": str(exc.status), "message": str(exc)}, out)
    return EXIT_EXCEPTIONAL


# commands ----------------------------------------------------------------------


def cmd_analyze(args, out):
    p = _laurent_input(args.input)
    tol = _tolerances(args)
    try:
        report = self_intersections(p, tol, args.seed)
    except ExceptionalInput as exc:
        return _exceptional(exc, out)
    result = report.to_json_dict()
    if args.oracle:
        eq = compare(p, tol, _oracle_config(args), args.seed)
        result["oracle_count"] = eq.oracle_count
        result["max_pair_distance"] = eq.max_pair_distance
    _emit(result, out)
    return EXIT_OK


def cmd_bound(args, out):
    try:
        value = upper_bound(args.n, args.m)
    except RangeError as exc:
        raise UsageError(str(exc)) from exc
    out.write(f"{value}\n")
    return EXIT_OK


def cmd_extremal(args, out):
    try:
        p = extremal(args.n, args.m, args.eps)
    except RangeError as exc:
        raise UsageError(str(exc)) from exc
    result = {"polynomial": p.to_json_dict()}
    code = EXIT_OK
    if args.verify:
        report = self_intersections(p, _tolerances(args), args.seed)
        expected = (args.n - 1) * (args.n - args.m)
        result.update(count=report.count, expected=expected, verified=report.count == expected)
        code = EXIT_OK if report.count == expected else EXIT_SOLVER
    _emit(result, out)
    return code


def cmd_oracle(args, out):
    p = _laurent_input(args.input)
    try:
        pairs = oracle_self_intersections(p, _oracle_config(args))
    except SaturationWarning as exc:
        _emit({"status": "Saturated", "message": str(exc), "count": exc.count, "bound": exc.bound}, out)
        return EXIT_EXCEPTIONAL
    _emit({"oracle_count": len(pairs), "intersections": [s.to_json_dict() for s in pairs]}, out)
    return EXIT_OK


def cmd_compare(args, out):
    p = _laurent_input(args.input)
    try:
        eq = compare(p, _tolerances(args), _oracle_config(args), args.seed)
    except ExceptionalInput as exc:
        return _exceptional(exc, out)
    except SaturationWarning as exc:
        _emit({"status": "Saturated", "message": str(exc)}, out)
        return EXIT_EXCEPTIONAL
    _emit(eq.to_json_dict(), out)
    return EXIT_OK


def cmd_embed(args, out):
    doc = documents.read_document(args.input)
    if doc.kind == "samples":
        theta, values = doc.payload.theta, doc.payload.values
    elif doc.kind == "laurent":
        theta, values = sample(doc.payload, CURVE_SAMPLES)
    else:
        raise UsageError("embed needs a samples or laurent document")
    try:
        request = EmbeddingRequest(theta, values, args.p, args.eps, args.seed)
    except (DomainError, InsufficientSamples) as exc:
        raise UsageError(str(exc)) from exc
    try:
        result = embed(request)
    except BudgetExceeded as exc:
        _emit({"status": "BudgetExceeded", "distance": exc.distance, "epsilon": exc.epsilon,
               "message": str(exc)}, out)
        return EXIT_BUDGET
    summary = result.to_json_dict()
    if args.output:
        meta = {"source": str(args.input), "p": repr(args.p), "epsilon": repr(args.eps),
                "seed": str(args.seed), "lp_distance": repr(result.lp_distance)}
        _write_text(args.output, documents.dumps(documents.polyline_document(result.curve, **meta)) + "\n")
        summary.pop("curve", None)
        summary["output"] = str(args.output)
    _emit(summary, out)
    return EXIT_OK


def crossing_images(doc, args):
    """Distinct image points of the self-intersections of a document's curve."""
    if doc.kind == "laurent":
        p = doc.payload
        report = self_intersections(p, _tolerances(args), args.seed)
        tol = 1e-6 * (1 + p.sup_norm())
        return render.distinct_points([s.image for s in report.intersections], tol)
    z = doc.curve_points()
    hits = geometry.crossing_segments([z], closed=True)
    n = z.size
    pts = [geometry.intersection_point(z[i], z[(i + 1) % n], z[j], z[(j + 1) % n]) for (_, i), (_, j) in hits]
    extent = float(np.ptp(z.real) + np.ptp(z.imag)) or 1.0
    return render.distinct_points(pts, 1e-9 * extent)


def cmd_render(args, out):
    doc = documents.read_document(args.input)
    markers = []
    if args.mark_crossings:
        try:
            markers = crossing_images(doc, args)
        except ExceptionalInput as exc:
            return _exceptional(exc, out)
    svg = render.render_svg(doc.curve_points(CURVE_SAMPLES), markers, title=doc.metadata.get("title"))
    if args.output:
        _write_text(args.output, svg)
    else:
        out.write(svg)
    return EXIT_OK


# parser --------------------------------------------------------------------------


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (np.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"must be a positive number: {text!r}")
    return value


def build_parser():
    parser = _Parser(prog="selfx", description="Self-intersections of Laurent polynomial curves "
                     "and positively oriented Jordan curve approximation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def tolerance_flags(p):
        p.add_argument("--tol-unit", type=_positive_float, help="tolerance for |z| = 1")
        p.add_argument("--tol-image", type=_positive_float, help="relative image-equality tolerance")
        p.add_argument("--tol-cluster", type=_positive_float, help="merge radius for angle pairs")
        p.add_argument("--seed", type=int, default=0)

    a = sub.add_parser("analyze", help="count self-intersections on the unit circle")
    a.add_argument("input")
    tolerance_flags(a)
    a.add_argument("--oracle", action="store_true", help="cross-check with the brute-force oracle")
    a.add_argument("--grid", type=int, default=4096, help="oracle grid size")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("bound", help="upper bound on the count for exponent range [m, n]")
    b.add_argument("n", type=int)
    b.add_argument("m", type=int)
    b.set_defaults(func=cmd_bound)

    e = sub.add_parser("extremal", help="the polynomial z^n + eps z^m attaining the bound")
    e.add_argument("n", type=int)
    e.add_argument("m", type=int)
    e.add_argument("eps", type=_positive_float)
    e.add_argument("--verify", action="store_true")
    tolerance_flags(e)
    e.set_defaults(func=cmd_extremal)

    o = sub.add_parser("oracle", help="brute-force self-intersections")
    o.add_argument("input")
    o.add_argument("--grid", type=int, default=4096)
    o.set_defaults(func=cmd_oracle)

    c = sub.add_parser("compare", help="match resultant pipeline against the oracle")
    c.add_argument("input")
    tolerance_flags(c)
    c.add_argument("--grid", type=int, default=4096)
    c.set_defaults(func=cmd_compare)

    m = sub.add_parser("embed", help="positively oriented embedding close in L^p")
    m.add_argument("input")
    m.add_argument("--p", type=float, default=2.0, help="L^p exponent (>= 1)")
    m.add_argument("--eps", type=float, default=0.05, help="distance budget (> 0)")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("-o", "--output", help="write the embedded curve as a polyline document")
    m.set_defaults(func=cmd_embed)

    r = sub.add_parser("render", help="SVG drawing of a curve document")
    r.add_argument("input")
    r.add_argument("-o", "--output", help="SVG file (stdout when omitted)")
    r.add_argument("--mark-crossings", action="store_true")
    tolerance_flags(r)
    r.set_defaults(func=cmd_render)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args, out)
    except (UsageError, DomainError, DegenerateInput, InsufficientSamples) as exc:
        sys.stderr.write(f"selfx {args.command}: {exc}\n")
        return EXIT_USAGE
    except _WriteFailure as exc:
        sys.stderr.write(f"selfx {args.command}: {exc}\n")
        return EXIT_WRITE
    except SelfxError as exc:
        sys.stderr.write(f"selfx {args.command}: {type(exc).__name__}: {exc}\n")
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
