"""Numerical checks of the agreement/disagreement results between conic
definitions, grouped into suites that produce JSON-ready reports.

Every suite takes a seed and is deterministic given it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import conicdefs as cd
from . import projmink as pm
from .hypgeo import (
    ModelKind,
    ModelPoint,
    distance,
    distance_to_geodesic,
    euclidean_circle_to_metric,
    metric_circle_to_euclidean,
)
from .implicit import TraceRegion, audit, ideal_boundary_points, trace

SUITES = ("circles", "ellipses", "parabolas", "hyperbolas", "molnar")

FIT_REGION = TraceRegion(xmin=-4, xmax=4, ymin=0, ymax=4, h=1 / 64)
AUDIT_REGION = TraceRegion(xmin=-4, xmax=4, ymin=0, ymax=4, h=1 / 128)


def _plain(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, complex):
        return [_plain(v.real), _plain(v.imag)]
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_plain(x) for x in v]
    if hasattr(v, "value"):
        return v.value
    return v


@dataclass
class Case:
    name: str
    inputs: dict
    expected: object
    got: object
    tol: float | None
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "inputs": _plain(self.inputs), "expected": _plain(self.expected),
                "got": _plain(self.got), "tol": self.tol, "pass": bool(self.passed)}


@dataclass
class Report:
    theorem: str
    cases: list[Case] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def check(self, name, inputs, expected, got, tol=None, passed=None) -> bool:
        if passed is None:
            if tol is None:
                passed = expected == got
            else:
                err = np.max(np.abs(np.asarray(got, dtype=complex) - np.asarray(expected, dtype=complex)))
                passed = bool(err <= tol)
        self.cases.append(Case(name, inputs, expected, got, tol, bool(passed)))
        return bool(passed)

    def extend(self, other: Report) -> None:
        self.cases.extend(other.cases)

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "cases": [c.to_json() for c in self.cases], "pass": self.passed}


def _audit(report: Report, name: str, inputs: dict, cpoly: cd.ConicPoly, spec,
           region: TraceRegion = AUDIT_REGION, tol: float = 1e-6):
    curve = trace(cpoly.poly, region)
    rep = audit(curve, spec, cpoly.mask)
    ok = rep.checked > 0 and rep.max_residual < tol
    report.check(name, inputs, f"< {tol}", {"max_residual": rep.max_residual, "checked": rep.checked,
                                            "rejected": rep.rejected}, tol, passed=ok)
    return curve


# ------------------------------------------------------------------ circles

def circle_limit_points(r: float = 0.25) -> list[complex]:
    """Points of |z^2 + 1| = 2r on the axis and on the line y = 1 (r = 1/4)."""
    x1 = math.sqrt((math.sqrt(17) - 4) / 2)
    return [1j * math.sqrt(1.5), 1j * math.sqrt(0.5), complex(x1, 1), complex(-x1, 1)]


def verify_circles(seed: int = 0) -> Report:
    rng = np.random.default_rng(seed)
    rep = Report("circles")

    i = ModelPoint(ModelKind.HALF_PLANE, 0.0, 1.0)
    circ = metric_circle_to_euclidean(i, math.log(2))
    rep.check("metric circle (i, log 2) in the half-plane", {"center": "i", "r": math.log(2)},
              [1.25j, 0.75], [circ.center, circ.radius], 1e-12)

    worst = 0.0
    for _ in range(100):
        model = ModelKind(rng.choice(["halfplane", "poincare"]))
        if model is ModelKind.HALF_PLANE:
            p = ModelPoint(model, rng.uniform(-3, 3), rng.uniform(0.1, 3))
        else:
            w = 0.9 * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
            p = ModelPoint.from_complex(w, model)
        r = rng.uniform(0.05, 3.0)
        q, r2 = euclidean_circle_to_metric(metric_circle_to_euclidean(p, r), model)
        worst = max(worst, abs(q.z - p.z), abs(r2 - r))
    rep.check("metric/Euclidean circle round trips", {"n": 100}, 0.0, worst, 1e-10)

    for c in (0.5, 1.0, 2.0):
        got = cd.two_focus_ellipse_poly(1.0, c).poly
        want = cd.X * cd.X + (cd.Y - math.cosh(c / 2)) ** 2 - math.sinh(c / 2) ** 2
        circ = metric_circle_to_euclidean(i, c / 2)
        rep.check("coincident foci give x^2 + (y - cosh(c/2))^2 = sinh^2(c/2)", {"c": c},
                  0.0, float(np.max(np.abs((got - want).coeffs))), 1e-10)
        rep.check("coincident foci circle = metric circle (i, c/2)", {"c": c},
                  [circ.center, circ.radius], [1j * math.cosh(c / 2), math.sinh(c / 2)], 1e-12)

    lim = cd.fd_circle_limit_poly(0.25)
    vals = [lim(z.real, z.imag) for z in circle_limit_points()]
    rep.check("circle-limit curve r = 1/4 through its four marked points", {"r": 0.25},
              [0.0] * 4, vals, 1e-12)
    region = TraceRegion(xmin=-2, xmax=2, ymin=0, ymax=2, h=1 / 256)
    curve = trace(lim.poly, region)
    pts = curve.points()
    dev_i = cd.metric_circle_fit_floor(pts, 1j)[0]
    dev_best, w, rad = cd.metric_circle_fit_floor(pts)
    rep.check("circle-limit curve is not a metric circle (best fit about i)", {"r": 0.25},
              "> 1e-3", dev_i, passed=dev_i > 1e-3)
    rep.check("circle-limit curve is not a metric circle (best center)", {"r": 0.25},
              "> 1e-3", {"deviation": dev_best, "center": w, "radius": rad}, passed=dev_best > 1e-3)
    _audit(rep, "circle-limit trace against focus/directrix with far directrix", {"r": 0.25},
           lim, cd.fd_circle_limit_spec(0.25), region)
    return rep


# ----------------------------------------------------------------- ellipses

def random_closed_fd(rng) -> tuple[float, float]:
    R = rng.uniform(1.2, 4.0)
    r = R if rng.uniform() < 0.5 else 1 / R
    return r, rng.uniform(0.05, 0.95) / R


def random_open_fd(rng) -> tuple[float, float]:
    R = rng.uniform(1.2, 4.0)
    r = R if rng.uniform() < 0.5 else 1 / R
    return r, rng.uniform(1 / R + 0.05 * (1 - 1 / R), 1 - 0.05 * (1 - 1 / R))


def verify_ellipses(seed: int = 0) -> Report:
    rng = np.random.default_rng(seed)
    rep = Report("ellipses")
    b, c = 2.0, math.log(2.5)
    quartic = (20 * cd.X ** 4 + 40 * cd.X ** 2 * cd.Y ** 2 + 325 * cd.X ** 2 + 20 * cd.Y ** 4
               - 116 * cd.Y ** 2 + 80)
    poly = cd.two_focus_ellipse_poly(b, c)
    rep.check("two-focus ellipse b=2, c=log(5/2) quartic", {"b": b, "c": c}, 0.0,
              poly.poly.coefficient_distance(quartic), 1e-10)
    r0, e0 = math.sqrt(11 / 19), math.sqrt(209) / 21
    rep.check("closed fd ellipse -> two-focus", {"r": r0, "eps": e0}, [b, c],
              list(cd.match_closed_fd_ellipse_to_two_focus(r0, e0)), 1e-9)
    rep.check("fd ellipse axis intercepts", {"r": r0, "eps": e0}, [2 / math.sqrt(5), math.sqrt(5)],
              cd.axis_intercepts(cd.fd_spec(r0, e0)), 1e-12)
    _audit(rep, "two-focus ellipse trace", {"b": b, "c": c}, poly, cd.two_focus_spec(b, c))
    fd = cd.focus_directrix_poly(r0, e0)
    _audit(rep, "fd ellipse trace", {"r": r0, "eps": e0}, fd, cd.fd_spec(r0, e0))

    for _ in range(20):
        r, e = random_closed_fd(rng)
        try:
            bb, cc = cd.match_closed_fd_ellipse_to_two_focus(r, e)
            dist = cd.two_focus_ellipse_poly(bb, cc).poly.coefficient_distance(
                cd.focus_directrix_poly(r, e).poly)
        except (cd.NoMatchError, cd.ConicError) as exc:
            rep.check("random closed fd ellipse matches a two-focus ellipse", {"r": r, "eps": e},
                      "< 1e-8", str(exc), passed=False)
            continue
        rep.check("random closed fd ellipse matches a two-focus ellipse", {"r": r, "eps": e, "b": bb, "c": cc},
                  0.0, dist, 1e-8)

    p = cd.focus_directrix_poly(3.0, 0.5)
    ideal = sorted(q.value for q in ideal_boundary_points(p.poly, ModelKind.HALF_PLANE))
    s = math.sqrt(3 / 7)
    rep.check("open fd ellipse r=3, eps=1/2 ideal points", {"r": 3, "eps": 0.5}, [-s, s], ideal, 1e-10)
    rep.check("r=3, eps=1/2 classified open", {"r": 3, "eps": 0.5}, cd.ConicClass.OPEN_TWO_IDEAL_POINTS.value,
              cd.classify_fd(3.0, 0.5).value)
    _audit(rep, "open fd ellipse trace", {"r": 3, "eps": 0.5}, p, cd.fd_spec(3.0, 0.5))

    for _ in range(20):
        r, e = random_open_fd(rng)
        cls = cd.classify_fd(r, e)
        pts = trace(cd.focus_directrix_poly(r, e).poly, FIT_REGION).points()
        floor = cd.two_focus_fit_floor(pts)[0] if len(pts) else math.inf
        rep.check("random open fd ellipse admits no two-focus fit",
                  {"r": r, "eps": e, "class": cls.value}, "> 1e-2", floor,
                  passed=cls is cd.ConicClass.OPEN_TWO_IDEAL_POINTS and floor > 1e-2)

    for r in (2.0, 4.0, 0.5, 3.0, 1.7):
        lem = cd.focus_directrix_poly(r, 1 / r)
        rep.check("eps = 1/r lemniscate passes through the origin", {"r": r}, 0.0, lem(0.0, 0.0),
                  0.0 if r in (2.0, 4.0, 0.5) else 1e-14)
    rep.check("r=2, eps=1/2 classified lemniscate", {"r": 2, "eps": 0.5}, cd.ConicClass.LEMNISCATE.value,
              cd.classify_fd(2.0, 0.5).value)
    return rep


# ---------------------------------------------------------------- parabolas

def verify_parabolas(seed: int = 0) -> Report:
    rng = np.random.default_rng(seed)
    rep = Report("parabolas")
    rs = np.linspace(0.2, 3.0, 50)
    rs = np.where(np.abs(rs - 1) < 1e-9, 1.0 + 1e-3, rs)
    Cs = np.linspace(10 / 50 + 2, 10.0, 50)
    bad = 0
    worst_tf = 0.0
    for r in rs:
        v = cd.fd_parabola_poly(r)(0.0, 0.0)
        if not (abs(v - (1 - r * r)) < 1e-12 and v != 0):
            bad += 1
        for C in Cs:
            worst_tf = max(worst_tf, abs(cd.two_focus_parabola_poly(C)(0.0, 0.0)))
    rep.check("fd parabola misses the origin on the r grid", {"n_r": 50}, 0, bad)
    rep.check("two-focus parabola contains the origin on the (r, C) grid", {"n": 2500}, 0.0, worst_tf, 0.0)

    for r in (0.25, 0.5, 0.75, 1.5, 2.0, 3.0, float(rng.uniform(1.1, 4.0))):
        spec = cd.fd_spec(r, 1.0)
        ys = cd.axis_intercepts(spec)
        rep.check("fd parabola vertex at sqrt(r)", {"r": r}, [math.sqrt(r)], ys, 1e-9)
        v = ModelPoint(ModelKind.HALF_PLANE, 0.0, math.sqrt(r))
        d1 = distance(v, cd.I)
        d2 = distance_to_geodesic(v, spec.directrix)
        rep.check("fd parabola vertex equidistant from focus and directrix", {"r": r},
                  [abs(math.log(r)) / 2] * 2, [d1, d2], 1e-10)
        _audit(rep, "fd parabola trace", {"r": r}, cd.fd_parabola_poly(r), spec)

    for C in (2.5, 3.0, 4.0, 7.0, float(rng.uniform(2.1, 10.0))):
        spec = cd.two_focus_parabola_spec(C)
        rep.check("two-focus parabola vertex at sqrt(C/2)", {"C": C}, [math.sqrt(C / 2)],
                  cd.axis_intercepts(spec), 1e-9)
        _audit(rep, "two-focus parabola trace", {"C": C}, cd.two_focus_parabola_poly(C), spec)

    tiny = 1e-6
    proxy = cd.two_focus_spec(tiny, math.log(4 / (2 * tiny)))
    got = cd.residual(proxy, ModelPoint(ModelKind.HALF_PLANE, 0.0, math.sqrt(2)))
    rep.check("C=4 vertex against a two-focus ellipse with a far second focus", {"b": tiny}, 0.0, got, 1e-4)
    return rep


# ---------------------------------------------------------------- hyperbolas

def random_hyperbola(rng) -> tuple[float, float]:
    b = rng.uniform(1.2, 6.0)
    return b, rng.uniform(0.05, 0.95) * math.log(b)


def verify_hyperbolas(seed: int = 0) -> Report:
    rng = np.random.default_rng(seed)
    rep = Report("hyperbolas")
    b, c = 2.0, math.log(1.5)
    r, e = cd.match_two_focus_hyperbola_to_fd(b, c)
    rep.check("hyperbola b=2, c=log(3/2) -> fd", {"b": b, "c": c},
              [math.sqrt(11 / 7), math.sqrt(77) / 5], [r, e], 1e-12)
    quartic = 24 + 6 * cd.X ** 4 - 26 * cd.Y ** 2 + 6 * cd.Y ** 4 + 3 * cd.X ** 2 * (-17 + 4 * cd.Y ** 2)
    tf = cd.two_focus_hyperbola_poly(b, c)
    fd = cd.focus_directrix_poly(r, e)
    rep.check("two-focus hyperbola quartic", {"b": b, "c": c}, 0.0, tf.poly.coefficient_distance(quartic), 1e-8)
    rep.check("matched fd hyperbola quartic", {"r": r, "eps": e}, 0.0, fd.poly.coefficient_distance(quartic), 1e-8)
    rep.check("hyperbola intercepts", {"b": b, "c": c}, [math.sqrt(4 / 3), math.sqrt(3)],
              cd.axis_intercepts(cd.two_focus_spec(b, c, "hyperbola")), 1e-12)
    _audit(rep, "two-focus hyperbola trace", {"b": b, "c": c}, tf, cd.two_focus_spec(b, c, "hyperbola"))
    _audit(rep, "matched fd hyperbola trace", {"r": r, "eps": e}, fd, cd.fd_spec(r, e))

    for _ in range(20):
        bb, cc = random_hyperbola(rng)
        rr, ee = cd.match_two_focus_hyperbola_to_fd(bb, cc)
        want = [math.sqrt(bb * math.exp(-cc)), math.sqrt(bb * math.exp(cc))]
        ys = cd.axis_intercepts(cd.fd_spec(rr, ee))
        dist = cd.two_focus_hyperbola_poly(bb, cc).poly.coefficient_distance(cd.focus_directrix_poly(rr, ee).poly)
        ok = ee > 1 and len(ys) == 2 and np.allclose(ys, want, rtol=0, atol=1e-10) and dist < 1e-8
        rep.check("random two-focus hyperbola is an fd hyperbola", {"b": bb, "c": cc},
                  {"eps": "> 1", "intercepts": want, "poly": "< 1e-8"},
                  {"r": rr, "eps": ee, "intercepts": ys, "poly": dist}, passed=ok)

    near = cd.match_two_focus_hyperbola_to_fd(2.0, math.log(2.0) - 1e-6)[1]
    rep.check("c -> log b gives eps -> 1+", {"b": 2, "c": "log 2 - 1e-6"}, "in (1, 1.001)", near,
              passed=1 < near < 1 + 1e-3)

    deg = cd.degenerate_fd_hyperbola_poly(2.0)
    ys = cd.axis_intercepts(cd.fd_spec(2.0, 2.0))
    rep.check("r = eps = 2 classified degenerate", {"r": 2, "eps": 2},
              cd.ConicClass.DEGENERATE_ONE_VERTEX.value, cd.classify_fd(2.0, 2.0).value)
    rep.check("r = eps = 2 single vertex", {"r": 2, "eps": 2}, [math.sqrt(2.5)], ys, 1e-12)
    rep.check("one-vertex polynomial is the fd polynomial", {"r": 2}, 0.0,
              deg.poly.coefficient_distance(cd.focus_directrix_poly(2.0, 2.0).poly), 1e-12)
    try:
        cd.match_fd_hyperbola_to_two_focus(2.0, 2.0)
        got = "matched"
    except cd.NoMatchError as exc:
        got = exc.reason
    rep.check("r = eps = 2 has no two-focus form", {"r": 2, "eps": 2}, "no match", got,
              passed="one-vertex degenerate" in got)
    _audit(rep, "one-vertex trace", {"r": 2, "eps": 2}, deg, cd.fd_spec(2.0, 2.0))
    return rep


# ------------------------------------------------------------------ Molnar

FIG1 = dict(A=pm.ProjPoint.chart(0.0, 0.0), B=pm.ProjPoint.chart(0.5, 0.0), x1=pm.ProjLine.chart(0.0, 1.0, -0.5))


def random_reflection_line(rng) -> pm.ProjLine:
    """Chart line a x + b y + c = 0 at distance < 0.9 from the origin."""
    phi = rng.uniform(0, 2 * math.pi)
    return pm.ProjLine.chart(math.cos(phi), math.sin(phi), -rng.uniform(-0.9, 0.9))


def verify_molnar(seed: int = 0) -> Report:
    rng = np.random.default_rng(seed)
    rep = Report("molnar")
    res = pm.molnar_conic(FIG1["A"], FIG1["B"], FIG1["x1"], 200)
    fit = pm.fit_conic(res.points)
    inputs = {"A": [0, 0], "B": [0.5, 0], "x1": "y = 1/2", "n": 200}
    rep.check("construction keeps at least 190 points", inputs, ">= 190", len(res.points),
              passed=len(res.points) >= 190)
    rep.check("points lie on one conic", inputs, 0.0, fit.max_residual, 1e-8)
    rep.check("fitted conic is nondegenerate", inputs, False, fit.degenerate)
    rep.check("X11", inputs, [0.1875, 0.5], list(res.x11.affine()), 1e-12)

    for _ in range(3):
        m = random_reflection_line(rng)
        M = pm.reflection_matrix(m)
        A, B, x1 = (pm.reflect_across_line(v, m) for v in (FIG1["A"], FIG1["B"], FIG1["x1"]))
        res2 = pm.molnar_conic(A, B, x1, 200)
        fit2 = pm.fit_conic(res2.points)
        # M is an involution, so the image conic is M^T Q M up to scale
        moved = M.T @ fit.matrix @ M
        ok = pm.congruent(fit.matrix, fit2.matrix, 1e-7) and fit2.max_residual < 1e-8
        rep.check("Molnar conic commutes with a hyperbolic reflection", {"mirror": m.to_json()},
                  pm.minkowski_spectrum(fit.matrix), pm.minkowski_spectrum(fit2.matrix), passed=ok)
        cos = abs(np.sum(moved * fit2.matrix)) / (np.linalg.norm(moved) * np.linalg.norm(fit2.matrix))
        rep.check("reflected conic equals the conic of reflected data", {"mirror": m.to_json()},
                  1.0, cos, 1e-9)
    return rep


_RUNNERS = {
    "circles": verify_circles,
    "ellipses": verify_ellipses,
    "parabolas": verify_parabolas,
    "hyperbolas": verify_hyperbolas,
    "molnar": verify_molnar,
}


def run(theorem: str, seed: int = 0) -> Report:
    if theorem == "all":
        rep = Report("all")
        for name in SUITES:
            rep.extend(_RUNNERS[name](seed))
        return rep
    if theorem not in _RUNNERS:
        raise KeyError(theorem)
    return _RUNNERS[theorem](seed)
