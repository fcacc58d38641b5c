import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypconics import conicdefs as cd
from hypconics.hypgeo import ModelKind, ModelPoint, halfplane_to_poincare
from hypconics.implicit import (
    BivarPoly,
    SampledCurve,
    TraceRegion,
    apply_mask,
    audit,
    halfplane_poly_to_poincare,
    hausdorff,
    ideal_boundary_points,
    real_roots,
    trace,
)

X, Y = BivarPoly.x(), BivarPoly.y()


def brute_eval(coeffs, x, y):
    """Term-by-term summation with exact-rounded accumulation."""
    return math.fsum(c * x ** i * y ** j for (i, j), c in np.ndenumerate(coeffs))


def seg_distance(pt, curve: SampledCurve) -> float:
    """Euclidean distance from a point to the union of the polylines."""
    best = math.inf
    p = np.asarray(pt, float)
    for pl in curve.polylines:
        if len(pl) == 1:
            best = min(best, float(np.hypot(*(pl[0] - p))))
            continue
        a, b = pl[:-1], pl[1:]
        d = b - a
        L = np.einsum("ij,ij->i", d, d)
        t = np.clip(np.einsum("ij,ij->i", p - a, d) / np.where(L > 0, L, 1), 0, 1)
        proj = a + t[:, None] * d
        best = min(best, float(np.min(np.hypot(*(proj - p).T))))
    return best


def test_eval_examples():
    assert BivarPoly.const(0.0)(3.7, -2.1) == 0.0
    r = 0.25
    p = (X * X - Y * Y + 1) ** 2 + 4 * X * X * Y * Y - 4 * r * r
    assert abs(p(0.0, math.sqrt(1.5))) < 1e-15


def test_eval_matches_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(50):
        deg = int(rng.integers(1, 9))
        c = np.zeros((deg + 1, deg + 1))
        for i in range(deg + 1):
            for j in range(deg + 1 - i):
                c[i, j] = rng.normal()
        p = BivarPoly(c)
        for x, y in rng.uniform(-10, 10, size=(5, 2)):
            want = brute_eval(c, x, y)
            scale = math.fsum(abs(v) * abs(x) ** i * abs(y) ** j for (i, j), v in np.ndenumerate(c))
            assert abs(p(x, y) - want) <= 1e-13 * scale


def test_arithmetic_and_trimming():
    p = (X + Y) ** 2
    assert p.terms() == {(2, 0): 1.0, (1, 1): 2.0, (0, 2): 1.0}
    assert p.degree == 2
    q = p - p
    assert q.is_zero() and q.degree <= 0
    assert (3 * X * Y).max_abs() == 3.0
    assert p.normalized().max_abs() == 1.0
    q, k = (X * X * Y * Y).divide_y_power()
    assert k == 2 and q.coefficient_distance(X * X) == 0.0


def test_compose_and_slice():
    p = X * X + 3 * Y
    # p(x + y, x - y)
    comp = p.compose(X + Y, X - Y)
    rng = np.random.default_rng(3)
    for x, y in rng.uniform(-2, 2, size=(10, 2)):
        assert comp(x, y) == pytest.approx((x + y) ** 2 + 3 * (x - y), abs=1e-12)
    assert np.allclose((X * X - 2 * Y + 1).slice_y(0.5), [0.0, 0.0, 1.0])


def test_json_round_trip():
    p = cd.focus_directrix_poly(2.0, 0.25).poly
    q = BivarPoly.from_json(p.to_json())
    assert p.coefficient_distance(q) == 0.0


def test_real_roots_sturm():
    assert real_roots([-2.0, 0.0, 1.0]) == pytest.approx([-math.sqrt(2), math.sqrt(2)], abs=1e-12)
    assert real_roots([1.0, 0.0, 1.0]) == []
    # double root is reported once
    assert real_roots([1.0, -2.0, 1.0]) == pytest.approx([1.0], abs=1e-6)
    rng = np.random.default_rng(5)
    for _ in range(20):
        roots = np.sort(rng.uniform(-5, 5, size=4))
        if np.min(np.diff(roots)) < 1e-2:
            continue
        coeffs = np.polynomial.polynomial.polyfromroots(roots)
        assert real_roots(coeffs) == pytest.approx(list(roots), abs=1e-9)
    assert real_roots([-2.0, 0.0, 1.0], lo=0.0, hi=10.0) == pytest.approx([math.sqrt(2)], abs=1e-12)


def test_trace_unit_circle():
    h = 1 / 64
    curve = trace(X * X + Y * Y - 1, TraceRegion(None, -2, 2, -2, 2, h))
    assert len(curve.polylines) == 1 and curve.closed() == [True]
    P = curve.points()
    assert np.max(np.abs(np.hypot(P[:, 0], P[:, 1]) - 1)) < h
    assert np.max(np.abs(curve.all_residuals())) < 1e-9
    steps = np.hypot(*np.diff(curve.polylines[0], axis=0).T)
    assert np.max(steps) < 2 * h


def test_trace_is_deterministic():
    p = cd.focus_directrix_poly(2.0, 0.5).poly
    region = TraceRegion(h=1 / 64)
    a, b = trace(p, region), trace(p, region)
    assert all(np.array_equal(u, v) for u, v in zip(a.polylines, b.polylines))


def test_trace_empty_zero_set():
    curve = trace(X * X + Y * Y + 1, TraceRegion(None, -2, 2, -2, 2, 1 / 32))
    assert curve.is_empty and len(curve.points()) == 0


@pytest.mark.parametrize("center", [(0.0, 0.0), (0.1234, 0.0567)])
def test_trace_first_order_convergence(center):
    a, b = center
    p = (X - a) ** 2 + (Y - b) ** 2 - 1
    curves = [trace(p, TraceRegion(None, -2, 2, -2, 2, h)) for h in (1 / 128, 1 / 256, 1 / 512)]
    d1, d2 = hausdorff(curves[0], curves[1]), hausdorff(curves[1], curves[2])
    assert 0.4 <= d2 / d1 <= 0.6


def test_trace_circle_limit_points():
    # chord sagitta scales like h^2, so 1/1024 keeps the polyline within 1e-6
    h = 1 / 1024
    poly = cd.fd_circle_limit_poly(0.25).poly
    curve = trace(poly, TraceRegion(ModelKind.HALF_PLANE, -1, 1, 0, 1.5, h))
    assert len(curve.polylines) == 1 and curve.closed() == [True]
    s = math.sqrt((math.sqrt(17) - 4) / 2)
    for x0, y0 in [(0.0, math.sqrt(1.5)), (0.0, math.sqrt(0.5)), (s, 1.0), (-s, 1.0)]:
        assert abs(poly(x0, y0)) < 1e-12
        assert seg_distance((x0, y0), curve) < 1e-6


def test_trace_two_focus_parabola_stays_in_domain():
    cp = cd.two_focus_parabola_poly(4.0)
    curve = apply_mask(trace(cp.poly, TraceRegion(h=1 / 128)), cp.mask)
    P = curve.points()
    assert len(P) and np.all(P[:, 1] > 0)
    # both lobes come down toward the origin
    near = P[np.hypot(P[:, 0], P[:, 1]) < 0.05]
    assert np.any(near[:, 0] > 0) and np.any(near[:, 0] < 0)


def sign_scan_roots(p: BivarPoly, lo=-10.0, hi=10.0, step=1e-6):
    """Sign changes of p(x, 0) on a dense grid."""
    xs = np.arange(lo, hi, step)
    v = np.polynomial.polynomial.polyval(xs, p.slice_y(0.0))
    idx = np.flatnonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)
    return xs[idx]


def test_ideal_boundary_examples():
    cp = cd.focus_directrix_poly(3.0, 0.5)
    pts = [e.value for e in ideal_boundary_points(cp.poly, mask=cp.mask) if math.isfinite(e.value)]
    assert pts == pytest.approx([-math.sqrt(3 / 7), math.sqrt(3 / 7)], abs=1e-10)
    scan = sign_scan_roots(cp.poly.normalized(), -3, 3)
    assert len(scan) == 2 and np.allclose(scan, pts, atol=2e-6)

    closed = cd.two_focus_ellipse_poly(0.75, 1.0)
    assert ideal_boundary_points(closed.poly, mask=closed.mask) == []
    assert len(sign_scan_roots(closed.poly.normalized(), -3, 3)) == 0

    par = cd.two_focus_parabola_poly(4.0)
    got = [e.value for e in ideal_boundary_points(par.poly)]
    assert got == pytest.approx([0.0], abs=1e-9)
    # double root: the slice touches zero without changing sign
    assert len(sign_scan_roots(par.poly.normalized(), -3, 3)) == 0
    assert par.poly(0.0, 0.0) == 0.0


def test_ideal_boundary_disk():
    # circle through the boundary points +-i of the unit disk
    p = (X - 1) ** 2 + Y * Y - 2
    got = sorted(e.value % (2 * math.pi) for e in ideal_boundary_points(p, ModelKind.POINCARE))
    assert got == pytest.approx([math.pi / 2, 3 * math.pi / 2], abs=1e-10)


def test_halfplane_poly_to_poincare():
    cp = cd.focus_directrix_poly(2.0, 0.5)
    q = halfplane_poly_to_poincare(cp.poly)
    curve = apply_mask(trace(cp.poly, TraceRegion(h=1 / 64)), cp.mask)
    for x, y in curve.points()[::7]:
        w = halfplane_to_poincare(complex(x, y))
        assert abs(q(w.real, w.imag)) < 1e-9 * max(1.0, q.max_abs())


def test_apply_mask_splits():
    pl = np.column_stack([np.linspace(0, 1, 11), np.ones(11)])
    curve = SampledCurve(ModelKind.HALF_PLANE, [pl], [np.zeros(11)], 0.1)
    out = apply_mask(curve, lambda x, y: np.abs(np.asarray(x) - 0.5) > 0.15)
    assert len(out.polylines) == 2
    assert np.all(np.abs(out.points()[:, 0] - 0.5) > 0.15)


def test_csv_round_trip():
    curve = trace(X * X + (Y - 2) ** 2 - 1, TraceRegion(h=1 / 32))
    back = SampledCurve.from_csv(curve.to_csv())
    assert len(back.polylines) == len(curve.polylines)
    for a, b in zip(curve.polylines, back.polylines):
        assert np.array_equal(a, b)


def test_audit_examples():
    spec = cd.MetricCircle(ModelPoint(ModelKind.HALF_PLANE, 0, 1), 1.0)
    cp = cd.conic_poly(spec)
    rep = audit(trace(cp.poly, TraceRegion(h=1 / 128)), spec, cp.mask)
    assert rep.checked > 100 and rep.max_residual < 1e-6

    spec = cd.fd_spec(2.0, 0.25)
    cp = cd.focus_directrix_poly(2.0, 0.25)
    rep = audit(trace(cp.poly, TraceRegion(h=1 / 128)), spec, cp.mask)
    assert rep.checked > 100 and rep.max_residual < 1e-6

    curve = trace(cd.fd_circle_limit_poly(0.25).poly, TraceRegion(h=1 / 128))
    dev, _, _ = cd.metric_circle_fit_floor(curve.points(), center=1j)
    assert dev > 1e-3


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(0.2, 3), st.floats(0.3, 2.5))
def test_traced_points_are_zeros(cx, cy, rad):
    p = (X - cx) ** 2 + (Y - cy) ** 2 - rad * rad
    curve = trace(p, TraceRegion(h=1 / 32))
    if not curve.is_empty:
        assert np.max(np.abs(curve.all_residuals())) < 1e-9
