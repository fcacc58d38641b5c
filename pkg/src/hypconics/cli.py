"""Command-line front end.

    hypconics generate  --conic two-focus-ellipse --b 2 --c "log(5/2)" --out curve.csv
    hypconics verify    --theorem all --seed 7
    hypconics match     --from two-focus --b 2 --c "log(3/2)"
    hypconics classify  --r 3 --eps 1/2
    hypconics figure    --id 6 --out figs/

Exit codes: 0 success, 1 a verification case failed, 2 invalid input,
3 no match exists between the two definitions.
"""

from __future__ import annotations

import argparse
import ast
import json
import math
import operator
import sys
import time
from pathlib import Path

import numpy as np

from . import conicdefs as cd
from . import figures, verify
from .hypgeo import GeometryError, Isometry, ModelKind, ModelPoint
from .implicit import (
    SampledCurve,
    TraceRegion,
    apply_mask,
    audit,
    halfplane_poly_to_poincare,
    trace,
)

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_NO_MATCH = 0, 1, 2, 3

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_FUNCS = {"log": math.log, "sqrt": math.sqrt, "exp": math.exp, "cosh": math.cosh,
          "sinh": math.sinh, "tanh": math.tanh}
_CONSTS = {"pi": math.pi, "e": math.e}


class UsageError(ValueError):
    pass


def number(text: str) -> float:
    """Parse a real from a small expression language: numbers, + - * / **,
    parentheses, pi, e and log/sqrt/exp/cosh/sinh/tanh."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Name) and node.id in _CONSTS:
            return _CONSTS[node.id]
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS
                and len(node.args) == 1 and not node.keywords):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(f"unsupported expression element {ast.dump(node)[:40]}")

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError) as exc:
        raise argparse.ArgumentTypeError(f"cannot parse number {text!r}: {exc}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"{text!r} is not finite")
    return value


def region_arg(text: str) -> tuple[float, ...]:
    parts = [number(p) for p in text.split(",")]
    if len(parts) != 5:
        raise argparse.ArgumentTypeError("region is xmin,xmax,ymin,ymax,h")
    return tuple(parts)


# ----------------------------------------------------------------- generate

INLINE = {
    "two-focus-ellipse": ("b", "c"),
    "two-focus-hyperbola": ("b", "c"),
    "two-focus-parabola": ("C",),
    "fd": ("r", "eps"),
    "fd-circle-limit": ("r",),
    "metric-circle": ("r",),
}


def _inline_poly(args) -> tuple[cd.ConicPoly, object]:
    need = INLINE[args.conic]
    missing = [n for n in need if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--conic {args.conic} needs " + ", ".join("--" + m for m in missing))
    a = args
    if args.conic == "two-focus-ellipse":
        return cd.two_focus_ellipse_poly(a.b, a.c), cd.two_focus_spec(a.b, a.c)
    if args.conic == "two-focus-hyperbola":
        return cd.two_focus_hyperbola_poly(a.b, a.c), cd.two_focus_spec(a.b, a.c, "hyperbola")
    if args.conic == "two-focus-parabola":
        return cd.two_focus_parabola_poly(a.C), cd.two_focus_parabola_spec(a.C)
    if args.conic == "fd":
        poly = cd.fd_parabola_poly(a.r) if a.eps == 1 else cd.focus_directrix_poly(a.r, a.eps)
        return poly, cd.fd_spec(a.r, a.eps)
    if args.conic == "fd-circle-limit":
        return cd.fd_circle_limit_poly(a.r), cd.fd_circle_limit_spec(a.r)
    spec = cd.MetricCircle(cd.I, a.r)
    return cd.conic_poly(spec), spec


def _load_spec(text: str):
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"spec is not valid JSON: {exc}") from None
    return cd.spec_from_json(data)


def _map_curve(curve: SampledCurve, fn, model) -> SampledCurve:
    lines = []
    for pl in curve.polylines:
        pts = [fn(complex(x, y)) for x, y in pl]
        lines.append(np.array([[w.real, w.imag] for w in pts]).reshape(-1, 2))
    return SampledCurve(model, lines, [np.array(r) for r in curve.residuals], curve.h)


def _trace_poly(cpoly: cd.ConicPoly, iso: Isometry, model: ModelKind, box) -> SampledCurve:
    """Trace a canonical-frame polynomial and express it in ``model``
    coordinates of the original (pre-normalization) frame."""
    back = iso.inverse()

    def to_user(z: complex) -> complex:
        p = back(ModelPoint.from_complex(z, ModelKind.HALF_PLANE))
        return p.to(model).z

    if model is ModelKind.HALF_PLANE:
        region = TraceRegion(ModelKind.HALF_PLANE, *box) if box else TraceRegion(h=1 / 256)
        curve = apply_mask(trace(cpoly.poly, region), cpoly.mask)
        if iso == Isometry.identity():
            return curve
        return _map_curve(curve, to_user, model)
    # disk models: trace the pulled-back polynomial in the unit disk
    from .hypgeo import poincare_to_halfplane

    q = halfplane_poly_to_poincare(cpoly.poly)

    def mask(u, v):
        u, v = np.asarray(u, float), np.asarray(v, float)
        w = u + 1j * v
        z = 1j * (1 + w) / (1 - w)
        return np.asarray(cpoly.mask(z.real, z.imag), bool) & (np.abs(w) < 1)

    region = TraceRegion(None, *box) if box else TraceRegion(None, -1.0, 1.0, -1.0, 1.0, 1 / 256)
    curve = apply_mask(trace(q, region), mask)
    return _map_curve(curve, lambda w: to_user(poincare_to_halfplane(w)), model)


def _generate_special(spec, model: ModelKind, box) -> SampledCurve:
    if isinstance(spec, (cd.Horocycle, cd.Hypercycle)):
        pts = cd.cycle_curve(spec).sample(400)
        arr = np.array([[p.to(model).x, p.to(model).y] for p in pts])
        res = np.array([cd.residual(spec, p) for p in pts])
        return SampledCurve(model, [arr], [res])
    if isinstance(spec, cd.Molnar):
        from . import projmink as pm

        result = pm.molnar_conic(spec.A, spec.B, spec.x1, spec.samples)
        fit = pm.fit_conic(result.points)
        pts = [p.affine() for p in result.points if p.affine() is not None]
        pts = [complex(*a) for a in pts if a[0] ** 2 + a[1] ** 2 < 1]
        arr = [ModelPoint.from_complex(k, ModelKind.KLEIN).to(model) for k in pts]
        res = [fit(np.array([k.real, k.imag, 1.0])) for k in pts]
        return SampledCurve(model, [np.array([[p.x, p.y] for p in arr])], [np.array(res)])
    if isinstance(spec, cd.KleinAlgebraic):
        from .implicit import BivarPoly

        Q = spec.matrix
        X, Y = BivarPoly.x(), BivarPoly.y()
        poly = (Q[0, 0] * X * X + 2 * Q[0, 1] * X * Y + Q[1, 1] * Y * Y + 2 * Q[0, 2] * X
                + 2 * Q[1, 2] * Y + Q[2, 2])
        region = TraceRegion(None, *box) if box else TraceRegion(None, -1.0, 1.0, -1.0, 1.0, 1 / 256)
        curve = apply_mask(trace(poly, region), lambda x, y: np.asarray(x) ** 2 + np.asarray(y) ** 2 < 1)
        return _map_curve(curve, lambda k: ModelPoint.from_complex(k, ModelKind.KLEIN).to(model).z, model)
    raise UsageError(f"cannot generate {type(spec).__name__}")


def cmd_generate(args) -> int:
    model = ModelKind(args.model)
    if args.spec:
        spec = _load_spec(args.spec)
        if isinstance(spec, (cd.Horocycle, cd.Hypercycle, cd.Molnar, cd.KleinAlgebraic)):
            curve = _generate_special(spec, model, args.region)
        else:
            _, iso = cd.canonical_frame(spec)
            curve = _trace_poly(cd.conic_poly(spec), iso, model, args.region)
    elif args.conic:
        cpoly, spec = _inline_poly(args)
        curve = _trace_poly(cpoly, Isometry.identity(), model, args.region)
    else:
        raise UsageError("generate needs --spec or --conic")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if out.suffix.lower() == ".svg":
        if model is ModelKind.HALF_PLANE:
            box = tuple(args.region[:4]) if args.region else figures.HP_BOX
        else:
            box = (-1.05, 1.05, -1.05, 1.05)
        fig = figures.Figure(0, type(spec).__name__, model, box, curves=[(type(spec).__name__, curve)])
        out.write_text(fig.to_svg())
    else:
        out.write_text(curve.to_csv())
    report = audit(curve, spec)
    _emit({"command": "generate", "spec": cd.spec_to_json(spec), "model": model.value, "out": str(out),
           "polylines": len(curve.polylines), "points": len(curve.points()),
           "audit": report.to_json(), "pass": report.max_residual < 1e-6}, None)
    return EXIT_OK


# ------------------------------------------------------------------ verify

def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    report = verify.run(args.theorem, args.seed)
    data = report.to_json()
    data["seed"] = args.seed
    _emit(data, args.out, timing=time.perf_counter() - t0)
    return EXIT_OK if report.passed else EXIT_FAIL


# ------------------------------------------------------------------- match

def match_two_focus(b: float, c: float, kind: str | None = None) -> dict:
    if kind is None:
        kind = "hyperbola" if c < abs(math.log(b)) else "ellipse"
    if kind == "hyperbola":
        flip = b < 1
        bb = 1 / b if flip else b
        r, eps = cd.match_two_focus_hyperbola_to_fd(bb, c)
        res = cd.two_focus_hyperbola_poly(bb, c).poly.coefficient_distance(cd.focus_directrix_poly(r, eps).poly)
        if flip:
            r = 1 / r
    else:
        r, eps = cd.match_two_focus_ellipse_to_fd(b, c)
        res = cd.two_focus_ellipse_poly(b, c).poly.coefficient_distance(cd.focus_directrix_poly(r, eps).poly)
    return {"kind": kind, "r": r, "eps": eps, "class": cd.classify_fd(r, eps).value, "poly_residual": res}


def match_fd(r: float, eps: float) -> dict:
    cls = cd.classify_fd(r, eps)
    if cls is cd.ConicClass.CLOSED_ELLIPSE:
        b, c = cd.match_closed_fd_ellipse_to_two_focus(r, eps)
        res = cd.two_focus_ellipse_poly(b, c).poly.coefficient_distance(cd.focus_directrix_poly(r, eps).poly)
        return {"kind": "ellipse", "b": b, "c": c, "class": cls.value, "poly_residual": res}
    if cls is cd.ConicClass.HYPERBOLA:
        b, c = cd.match_fd_hyperbola_to_two_focus(r, eps)
        R = max(r, 1 / r)
        res = cd.two_focus_hyperbola_poly(b, c).poly.coefficient_distance(cd.focus_directrix_poly(R, eps).poly)
        out = {"kind": "hyperbola", "b": b, "c": c, "class": cls.value, "poly_residual": res}
        if r < 1:
            out["note"] = "second focus at i/b (directrix inside the unit circle)"
        return out
    raise cd.NoMatchError(cd._no_match_reason(cls))


def cmd_match(args) -> int:
    if args.source == "two-focus":
        if args.b is None or args.c is None:
            raise UsageError("--from two-focus needs --b and --c")
        inputs = {"b": args.b, "c": args.c}
        fn = lambda: match_two_focus(args.b, args.c, args.kind)
    else:
        if args.r is None or args.eps is None:
            raise UsageError("--from fd needs --r and --eps")
        inputs = {"r": args.r, "eps": args.eps}
        fn = lambda: match_fd(args.r, args.eps)
    try:
        matched = fn()
    except cd.NoMatchError as exc:
        _emit({"command": "match", "from": args.source, "inputs": inputs, "matched": None,
               "reason": exc.reason, "pass": False}, None)
        return EXIT_NO_MATCH
    ok = matched["poly_residual"] < 1e-8
    _emit({"command": "match", "from": args.source, "inputs": inputs, "matched": matched, "pass": ok}, None)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_classify(args) -> int:
    cls = cd.classify_fd(args.r, args.eps)
    out = {"command": "classify", "inputs": {"r": args.r, "eps": args.eps}, "class": cls.value}
    if cls is cd.ConicClass.DEGENERATE_ONE_VERTEX:
        out["vertex"] = math.sqrt((args.r ** 2 + 1) / 2)
    _emit(out, None)
    return EXIT_OK


def cmd_figure(args) -> int:
    if args.id not in figures.FIGURES:
        raise UsageError(f"unknown figure id {args.id}; expected 1..6")
    fig = figures.build(args.id)
    svg, csv_path = fig.write(args.out)
    _emit({"command": "figure", "id": args.id, "svg": str(svg), "csv": str(csv_path),
           "params": fig.params, "curves": [name for name, _ in fig.curves]}, None)
    return EXIT_OK


# --------------------------------------------------------------------- main

def _emit(data: dict, out, timing: float | None = None) -> None:
    if timing is not None:
        data = dict(data, seconds=round(timing, 3))
    text = json.dumps(verify._plain(data), indent=2)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text + "\n")
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypconics", description="Conic sections in the hyperbolic plane.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="trace a conic and write CSV or SVG")
    g.add_argument("--spec", help="spec JSON, or @path to a JSON file")
    g.add_argument("--conic", choices=sorted(INLINE), help="inline canonical-frame conic")
    for name in ("b", "c", "r", "eps", "C"):
        g.add_argument(f"--{name}", type=number)
    g.add_argument("--model", default="halfplane", choices=[m.value for m in ModelKind])
    g.add_argument("--region", type=region_arg, help="xmin,xmax,ymin,ymax,h")
    g.add_argument("--out", required=True, help="output .csv or .svg")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="run a theorem suite")
    v.add_argument("--theorem", required=True, choices=list(verify.SUITES) + ["all"])
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("match", help="match two-focus and focus/directrix conics")
    m.add_argument("--from", dest="source", required=True, choices=["two-focus", "fd"])
    for name in ("b", "c", "r", "eps"):
        m.add_argument(f"--{name}", type=number)
    m.add_argument("--kind", choices=["ellipse", "hyperbola"])
    m.set_defaults(func=cmd_match)

    c = sub.add_parser("classify", help="shape of the focus/directrix conic (focus i, directrix |z|=r)")
    c.add_argument("--r", type=number, required=True)
    c.add_argument("--eps", type=number, required=True)
    c.set_defaults(func=cmd_classify)

    f = sub.add_parser("figure", help="regenerate a figure as SVG + CSV")
    f.add_argument("--id", type=int, required=True)
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_figure)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GeometryError, cd.ConicError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
