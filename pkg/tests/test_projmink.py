import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypconics import projmink as pm
from hypconics.hypgeo import Geodesic, ModelKind, ModelPoint, reflect_point

A, B = pm.ProjPoint.chart(0, 0), pm.ProjPoint.chart(0.5, 0)
X1 = pm.ProjLine.chart(0, 1, -0.5)


def test_normalization_and_equality():
    p = pm.ProjPoint(0, 0, -3)
    assert p == pm.ProjPoint(0, 0, 1)
    assert p.affine() == (0.0, 0.0)
    assert pm.ProjPoint(1, 0, 0).affine() is None
    with pytest.raises(pm.ProjectiveError):
        pm.ProjPoint(0, 0, 0)


def test_polarity_examples():
    assert pm.polarity(pm.ProjPoint(0, 0, 1)) == pm.ProjLine(0, 0, 1)
    pole = pm.polarity(X1)
    assert pole == pm.ProjPoint(0, 2, 1)
    assert pole.affine() == pytest.approx((0.0, 2.0))
    assert pm.polarity(pole) == X1


@given(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9), st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))
def test_polarity_preserves_incidence(a, b, c, d):
    p, q = pm.ProjPoint.chart(a, b), pm.ProjPoint.chart(c, d)
    if abs(a - c) + abs(b - d) < 1e-6:
        return
    line = pm.join(p, q)
    # p on line  <=>  pole(line) on polar(p)
    assert abs(pm.polarity(line).vec @ pm.polarity(p).vec) < 1e-12


def test_join_meet_examples():
    assert pm.join(pm.ProjPoint(0, 0, 1), pm.ProjPoint(1, 0, 1)) == pm.ProjLine(0, 1, 0)
    assert pm.meet(pm.ProjLine(0, 1, 0), pm.ProjLine(1, 0, 0)) == pm.ProjPoint(0, 0, 1)
    assert pm.join(A, B) == pm.ProjLine.chart(0, 1, 0)
    with pytest.raises(pm.ProjectiveError):
        pm.join(A, A)
    with pytest.raises(pm.ProjectiveError):
        pm.meet(X1, X1)


def test_boundary_lines():
    assert pm.is_boundary_line(pm.ProjLine(1, 0, -1))
    assert not pm.is_boundary_line(X1)
    assert not pm.is_boundary_line(pm.ProjLine(0, 1, -2))


def test_reflection_examples():
    p = pm.reflect_across_line(pm.ProjPoint.chart(0, 0), X1)
    assert p.affine() == pytest.approx((0.0, 0.8), abs=1e-14)
    on = pm.ProjPoint.chart(0.3, 0.5)
    assert pm.reflect_across_line(on, X1) == on
    ideal = pm.reflect_across_line(pm.ProjPoint(1, 0, 1), X1)
    assert abs(pm.minkowski(ideal, ideal)) < 1e-10
    with pytest.raises(pm.ProjectiveError):
        pm.reflect_across_line(A, pm.ProjLine(1, 0, -1))


@given(st.floats(-0.95, 0.95), st.floats(-0.95, 0.95), st.floats(0, 2 * math.pi), st.floats(-0.9, 0.9))
def test_reflection_matches_hypgeo(x, y, phi, c):
    if x * x + y * y >= 0.9:
        return
    m = pm.ProjLine.chart(math.cos(phi), math.sin(phi), c)
    got = pm.reflect_across_line(pm.ProjPoint.chart(x, y), m).affine()
    # the chart line meets the unit circle at foot +- half-chord along the direction
    foot = complex(-c * math.cos(phi), -c * math.sin(phi))
    half = math.sqrt(1 - c * c)
    d = complex(-math.sin(phi), math.cos(phi))
    e1, e2 = foot + half * d, foot - half * d
    g = Geodesic.from_ideal(ModelKind.KLEIN, math.atan2(e1.imag, e1.real), math.atan2(e2.imag, e2.real))
    want = reflect_point(ModelPoint(ModelKind.KLEIN, x, y), g)
    assert got == pytest.approx((want.x, want.y), abs=1e-9)


@given(st.floats(-0.9, 0.9), st.floats(0, 2 * math.pi))
def test_reflection_matrix_properties(c, phi):
    M = pm.reflection_matrix(pm.ProjLine.chart(math.cos(phi), math.sin(phi), c))
    assert np.allclose(M @ M, np.eye(3), atol=1e-10)
    assert np.allclose(M.T @ pm.J @ M, pm.J, atol=1e-10)


def test_fit_conic_examples():
    ts = np.linspace(0, 2 * math.pi, 6, endpoint=False)
    fit = pm.fit_conic([pm.ProjPoint.chart(math.cos(t), math.sin(t)) for t in ts])
    Q = fit.matrix / fit.matrix[0, 0]
    assert np.allclose(Q, np.diag([1, 1, -1]), atol=1e-12)
    assert fit.max_residual < 1e-12 and not fit.degenerate
    line_pts = [pm.ProjPoint.chart(x, 0) for x in np.linspace(-0.5, 0.5, 5)] + [pm.ProjPoint.chart(0, 0.3)]
    assert pm.fit_conic(line_pts).degenerate
    with pytest.raises(pm.ProjectiveError):
        pm.fit_conic(line_pts[:4])


def test_molnar_figure_one():
    res = pm.molnar_conic(A, B, X1, 200)
    assert len(res.points) >= 190
    assert res.x11.affine() == pytest.approx((0.1875, 0.5), abs=1e-14)
    fit = pm.fit_conic(res.points)
    assert fit.max_residual < 1e-8 and not fit.degenerate
    assert fit.classify() == "ellipse"
    # every constructed point is interior to the disk
    pts = np.array([p.affine() for p in res.points])
    assert np.all(np.hypot(pts[:, 0], pts[:, 1]) < 1)
    # sample parameters come out sorted
    assert res.params == sorted(res.params)


def test_molnar_preconditions():
    cases = {
        "foci-equal": (A, A, X1),
        "x1-boundary": (A, B, pm.ProjLine(0, 1, -1)),
        "x1-through-focus": (A, B, pm.ProjLine.chart(0, 1, 0)),
        "mirror-foci": (A, pm.ProjPoint.chart(0, 0.8), X1),
    }
    for clause, args in cases.items():
        with pytest.raises(pm.MolnarPreconditionError) as info:
            pm.molnar_conic(*args)
        assert info.value.clause == clause


@settings(max_examples=10, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(-0.8, 0.8))
def test_molnar_reflection_covariance(phi, c):
    m = pm.ProjLine.chart(math.cos(phi), math.sin(phi), c)
    M = pm.reflection_matrix(m)
    q1 = pm.fit_conic(pm.molnar_conic(A, B, X1).points).matrix
    moved = [pm.reflect_across_line(v, m) for v in (A, B, X1)]
    q2 = pm.fit_conic(pm.molnar_conic(*moved).points).matrix
    assert pm.congruent(q1, q2, 1e-7)
    image = M.T @ q1 @ M
    cos = abs(np.sum(image * q2)) / (np.linalg.norm(image) * np.linalg.norm(q2))
    assert cos == pytest.approx(1.0, abs=1e-9)


def test_congruence_detects_different_conics():
    q1 = np.diag([1.0, 1.0, -0.25])
    q2 = np.diag([1.0, 4.0, -0.25])
    assert pm.congruent(q1, 3 * q1)
    assert not pm.congruent(q1, q2)
