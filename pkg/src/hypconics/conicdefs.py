"""Conic sections in the hyperbolic plane under competing definitions.

Specs cover the metric circle, two-focus ellipse/hyperbola (and the
two-focus parabola obtained by sending one focus to an ideal point), the
focus/directrix conic sinh d(x, focus) = eps sinh d(x, directrix), the Klein
algebraic conic, Molnar's construction, horocycles and hypercycles.

Polynomials are written in the canonical half-plane frame: focus at i,
axis the imaginary axis, second focus at b i or directrix |z| = r.
"""

from __future__ import annotations

import functools
import math
from collections.abc import Callable
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.optimize import brentq, minimize, minimize_scalar

from . import projmink as pm
from .hypgeo import (
    EuclideanCircle,
    Geodesic,
    GeometryError,
    IdealPoint,
    Isometry,
    ModelKind,
    ModelPoint,
    busemann,
    distance,
    halfplane_to_poincare,
    reflect_point,
    signed_distance_to_geodesic,
)
from .implicit import BivarPoly, Mask

I = ModelPoint(ModelKind.HALF_PLANE, 0.0, 1.0)
EQ_TOL = 1e-9     # equality tolerance for classification boundaries
MASK_TOL = 1e-6   # relative tolerance of the radical-equation branch masks


class ConicError(GeometryError):
    """Invalid conic parameters; the message names the violated invariant."""


class NoMatchError(ValueError):
    """No conic of the other definition reproduces this one."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class ConicClass(str, Enum):
    CLOSED_ELLIPSE = "ClosedEllipse"
    LEMNISCATE = "Lemniscate"
    OPEN_TWO_IDEAL_POINTS = "OpenTwoIdealPoints"
    PARABOLA = "Parabola"
    HYPERBOLA = "Hyperbola"
    DEGENERATE_ONE_VERTEX = "DegenerateOneVertex"
    CIRCLE_LIMIT = "CircleLimit"


# ------------------------------------------------------------------ specs

@dataclass(frozen=True)
class MetricCircle:
    center: ModelPoint
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise ConicError("metric circle radius must be positive")


@dataclass(frozen=True)
class TwoFocus:
    f1: ModelPoint
    f2: ModelPoint
    c: float
    kind: str = "ellipse"

    def __post_init__(self):
        if self.kind not in ("ellipse", "hyperbola"):
            raise ConicError(f"two-focus kind must be ellipse or hyperbola, got {self.kind!r}")
        if self.f1.model is not self.f2.model:
            raise ConicError("foci live in different models")
        if not self.c > 0:
            raise ConicError("two-focus constant c must be positive (c = 0 degenerates)")
        d = distance(self.f1, self.f2)
        if self.kind == "hyperbola" and not self.c < d:
            raise ConicError("two-focus hyperbola needs c < d(f1, f2)")
        if self.kind == "ellipse" and d > 0 and not self.c > d:
            raise ConicError("two-focus ellipse needs c > d(f1, f2)")


@dataclass(frozen=True)
class TwoFocusParabola:
    """Limit of two-focus ellipses whose second focus runs off to ``ideal``:
    d(x, focus) + beta(x) = log(C/2), beta the Busemann function of ``ideal``
    normalized to vanish at the focus."""

    focus: ModelPoint
    ideal: IdealPoint
    C: float

    def __post_init__(self):
        if not self.C > 2:
            raise ConicError("two-focus parabola needs C > 2")


@dataclass(frozen=True)
class FocusDirectrix:
    focus: ModelPoint
    directrix: Geodesic
    eps: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ConicError("eccentricity must be positive")
        if self.focus.model is not self.directrix.model:
            raise ConicError("focus and directrix live in different models")
        if abs(signed_distance_to_geodesic(self.focus, self.directrix)) < 1e-12:
            raise ConicError("directrix passes through the focus")


@dataclass(frozen=True)
class KleinAlgebraic:
    """Zero set of a nondegenerate indefinite quadratic form in the Klein chart."""

    form: tuple

    def __post_init__(self):
        Q = np.array(self.form, dtype=float)
        if Q.shape != (3, 3) or not np.allclose(Q, Q.T, atol=1e-12):
            raise ConicError("Klein form must be a symmetric 3x3 matrix")
        lam = np.linalg.eigvalsh(Q)
        scale = np.max(np.abs(lam))
        if scale == 0 or np.min(np.abs(lam)) <= 1e-12 * scale:
            raise ConicError("Klein form is degenerate")
        if np.all(lam > 0) or np.all(lam < 0):
            raise ConicError("Klein form is definite (empty conic)")
        object.__setattr__(self, "form", tuple(map(tuple, Q.tolist())))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.form)


@dataclass(frozen=True)
class Molnar:
    A: pm.ProjPoint
    B: pm.ProjPoint
    x1: pm.ProjLine
    samples: int = 200


@dataclass(frozen=True)
class Horocycle:
    ideal: IdealPoint
    through: ModelPoint


@dataclass(frozen=True)
class Hypercycle:
    """Points at signed distance ``h`` from ``axis`` (positive on its left)."""

    axis: Geodesic
    h: float


ConicSpec = (MetricCircle, TwoFocus, TwoFocusParabola, FocusDirectrix, KleinAlgebraic,
             Molnar, Horocycle, Hypercycle)


# --------------------------------------------------------------- residuals

def _in(p: ModelPoint, model: ModelKind) -> ModelPoint:
    return p if p.model is model else p.to(model)


@functools.singledispatch
def residual(spec, p: ModelPoint) -> float:
    """Signed defining residual; zero exactly on the conic."""
    raise TypeError(f"not a conic spec: {type(spec).__name__}")


@residual.register
def _(spec: MetricCircle, p):
    return distance(_in(p, spec.center.model), spec.center) - spec.r


@residual.register
def _(spec: TwoFocus, p):
    p = _in(p, spec.f1.model)
    d1, d2 = distance(p, spec.f1), distance(p, spec.f2)
    if spec.kind == "ellipse":
        return d1 + d2 - spec.c
    return abs(d1 - d2) - spec.c


@residual.register
def _(spec: TwoFocusParabola, p):
    p = _in(p, spec.focus.model)
    beta = busemann(p, spec.ideal) - busemann(spec.focus, spec.ideal)
    return distance(p, spec.focus) + beta - math.log(spec.C / 2)


@residual.register
def _(spec: FocusDirectrix, p):
    p = _in(p, spec.focus.model)
    d1 = distance(p, spec.focus)
    d2 = abs(signed_distance_to_geodesic(p, spec.directrix))
    return math.sinh(d1) - spec.eps * math.sinh(d2)


@residual.register
def _(spec: KleinAlgebraic, p):
    k = _in(p, ModelKind.KLEIN)
    v = np.array([k.x, k.y, 1.0])
    return float(v @ spec.matrix @ v)


@residual.register
def _(spec: Molnar, p):
    k = _in(p, ModelKind.KLEIN)
    return _molnar_fit(spec)(np.array([k.x, k.y, 1.0]))


@functools.lru_cache(maxsize=64)
def _molnar_fit(spec: Molnar) -> pm.ConicFit:
    return pm.fit_conic(pm.molnar_conic(spec.A, spec.B, spec.x1, spec.samples).points)


@residual.register
def _(spec: Horocycle, p):
    p = _in(p, spec.through.model)
    return busemann(p, spec.ideal) - busemann(spec.through, spec.ideal)


@residual.register
def _(spec: Hypercycle, p):
    return signed_distance_to_geodesic(_in(p, spec.axis.model), spec.axis) - spec.h


def transform_spec(spec, iso: Isometry):
    """Image of a metric spec under a half-plane isometry."""
    if isinstance(spec, MetricCircle):
        return replace(spec, center=iso(spec.center))
    if isinstance(spec, TwoFocus):
        return replace(spec, f1=iso(spec.f1), f2=iso(spec.f2))
    if isinstance(spec, TwoFocusParabola):
        return replace(spec, focus=iso(spec.focus), ideal=iso(spec.ideal))
    if isinstance(spec, FocusDirectrix):
        return replace(spec, focus=iso(spec.focus), directrix=iso(spec.directrix))
    if isinstance(spec, Horocycle):
        return replace(spec, ideal=iso(spec.ideal), through=iso(spec.through))
    if isinstance(spec, Hypercycle):
        # orientation-reversing maps swap the sides of the oriented axis
        return replace(spec, axis=iso(spec.axis), h=spec.h * iso.orientation)
    raise TypeError(f"cannot transport {type(spec).__name__}")


# ------------------------------------------------------- canonical frame

@dataclass(frozen=True)
class CanonicalFrame:
    """Half-plane normal form: focus at i, imaginary axis as conic axis, and
    either a second focus at ``b`` i or the directrix |z| = ``r``."""

    b: float | None = None
    r: float | None = None

    def __post_init__(self):
        if self.b is not None and not self.b > 0:
            raise ConicError("canonical second focus needs b > 0")
        if self.r is not None and not self.r > 0:
            raise ConicError("canonical directrix needs r > 0")


def two_focus_spec(b: float, c: float, kind: str = "ellipse") -> TwoFocus:
    return TwoFocus(I, ModelPoint(ModelKind.HALF_PLANE, 0.0, b), c, kind)


def fd_spec(r: float, eps: float) -> FocusDirectrix:
    return FocusDirectrix(I, Geodesic.semicircle(0.0, r), eps)


def two_focus_parabola_spec(C: float) -> TwoFocusParabola:
    return TwoFocusParabola(I, IdealPoint(ModelKind.HALF_PLANE, 0.0), C)


def fd_circle_limit_spec(r: float, R: float = 1e6) -> FocusDirectrix:
    """Focus/directrix conic with directrix |z| = R far away and
    eps sinh d(i, directrix) = r; converges to the circle-limit curve."""
    return fd_spec(R, 2 * r * R / (R * R - 1))


def _is_canonical(focus: ModelPoint, other) -> bool:
    if focus.model is not ModelKind.HALF_PLANE or abs(focus.z - 1j) > 1e-14:
        return False
    if isinstance(other, ModelPoint):
        return other.model is ModelKind.HALF_PLANE and abs(other.x) < 1e-14
    if isinstance(other, Geodesic):
        return other.model is ModelKind.HALF_PLANE and other.kind == "arc" and abs(other.center) < 1e-14
    if isinstance(other, IdealPoint):
        return other.model is ModelKind.HALF_PLANE and (other.is_infinite or abs(other.value) < 1e-14)
    return False


def canonical_frame(spec) -> tuple[CanonicalFrame, Isometry]:
    """Frame and isometry carrying ``spec`` into canonical position.

    Specs already in canonical position keep their orientation (so b < 1 or
    r < 1 survive); otherwise the second focus / directrix is put above i.
    """
    if isinstance(spec, TwoFocus):
        f1 = _in(spec.f1, ModelKind.HALF_PLANE)
        f2 = _in(spec.f2, ModelKind.HALF_PLANE)
        iso = Isometry.identity() if _is_canonical(f1, f2) else Isometry.to_standard(f1, f2)
        return CanonicalFrame(b=iso(f2).y), iso
    if isinstance(spec, FocusDirectrix):
        f = _in(spec.focus, ModelKind.HALF_PLANE)
        g = spec.directrix.to(ModelKind.HALF_PLANE)
        if _is_canonical(f, g):
            return CanonicalFrame(r=g.radius), Isometry.identity()
        iso = Isometry.to_standard(f, reflect_point(f, g))
        return CanonicalFrame(r=iso(g).radius), iso
    if isinstance(spec, TwoFocusParabola):
        f = _in(spec.focus, ModelKind.HALF_PLANE)
        if _is_canonical(f, spec.ideal):
            return CanonicalFrame(), Isometry.identity()
        iso = Isometry.to_standard(f)
        e = iso(spec.ideal).to(ModelKind.HALF_PLANE)
        if not e.is_infinite:
            # rotate about i so the ideal point lands at 0
            ang = math.atan2(halfplane_to_poincare(complex(e.value, 0)).imag,
                             halfplane_to_poincare(complex(e.value, 0)).real)
            iso = Isometry.rotation(math.pi - ang).compose(iso)
        else:
            iso = Isometry.rotation(math.pi).compose(iso)
        return CanonicalFrame(), iso
    if isinstance(spec, MetricCircle):
        return CanonicalFrame(), Isometry.to_standard(_in(spec.center, ModelKind.HALF_PLANE))
    raise TypeError(f"no canonical frame for {type(spec).__name__}")


# ------------------------------------------------ polynomials & radicals

X, Y = BivarPoly.x(), BivarPoly.y()
RHO2 = X * X + Y * Y


def _abs_sq(s: float) -> BivarPoly:
    """|z^2 + s|^2 = (x^2 - y^2 + s)^2 + 4 x^2 y^2."""
    return (X * X - Y * Y + s) ** 2 + 4 * X * X * Y * Y


@dataclass
class ConicPoly:
    """Implicit polynomial of a conic plus the branch mask.

    ``mask(x, y)`` is True where the unsquared (radical) defining equation
    holds, i.e. on the true locus rather than a branch introduced by squaring.
    """

    poly: BivarPoly
    mask: Mask
    label: str = ""

    def __call__(self, x, y):
        return self.poly(x, y)


def _all_true(x, y):
    return np.ones(np.broadcast(np.asarray(x), np.asarray(y)).shape, dtype=bool)


def _radical_mask(*branches) -> Mask:
    """Mask accepting points where any branch E + A sqrt(B) - F sqrt(D) vanishes."""

    def mask(x, y):
        x, y = np.asarray(x, float), np.asarray(y, float)
        ok = np.zeros(np.broadcast(x, y).shape, dtype=bool)
        for E, A, B, F, D in branches:
            t1 = E(x, y)
            t2 = A(x, y) * np.sqrt(np.maximum(B(x, y), 0.0))
            t3 = F(x, y) * np.sqrt(np.maximum(D(x, y), 0.0))
            scale = np.abs(t1) + np.abs(t2) + np.abs(t3)
            ok |= np.abs(t1 + t2 - t3) <= MASK_TOL * scale
        return ok

    return mask


@dataclass
class Elimination:
    poly: BivarPoly
    mask: Mask
    y_power: int
    identity: bool
    raw: BivarPoly


def eliminate_radicals(E: BivarPoly, B: BivarPoly, F, D: BivarPoly | None = None,
                       A=1.0) -> Elimination:
    """Clear the radicals from E + A sqrt(B) = F sqrt(D).

    Square once to isolate the sqrt(B) term, 2 E A sqrt(B) = F^2 D - E^2 - A^2 B,
    and square again: 4 E^2 A^2 B - (F^2 D - E^2 - A^2 B)^2 = 0. With F = 0 a
    single squaring E^2 - A^2 B = 0 suffices. Powers of y dividing every term
    are removed. The mask records the unsquared equation so the true branch
    can be told apart from the spurious ones.
    """
    A = A if isinstance(A, BivarPoly) else BivarPoly.const(A)
    F = F if isinstance(F, BivarPoly) else BivarPoly.const(F)
    D = D if D is not None else BivarPoly.const(0.0)
    if F.is_zero() or D.is_zero():
        raw = E * E - A * A * B
    else:
        G = F * F * D - E * E - A * A * B
        raw = 4 * E * E * A * A * B - G * G
    scale = max(E.max_abs() ** 2, (A * A * B).max_abs(), (F * F * D).max_abs(), 1e-300) ** 2
    identity = raw.is_zero(1e-13 * scale)
    if identity:
        return Elimination(BivarPoly.const(0.0), _all_true, 0, True, raw)
    poly, k = raw.divide_y_power()
    return Elimination(poly, _radical_mask((E, A, B, F, D)), k, False, raw)


def _check_positive(name: str, v: float) -> None:
    if not (v > 0 and math.isfinite(v)):
        raise ConicError(f"{name} must be positive and finite, got {v!r}")


def two_focus_ellipse_poly(b: float, c: float) -> ConicPoly:
    """Two-focus ellipse with foci i and b i and constant c, radicals cleared.

    d(z, i) + d(z, bi) = c reads (P1 + sqrt B1)(Pb + sqrt Bb) = 4 b e^c y^2
    with P_s = x^2 + y^2 + s^2, B_s = |z^2 + s^2|^2. Using
    (Pb + sqrt Bb)(Pb - sqrt Bb) = 4 b^2 y^2 this becomes
    P1 + sqrt B1 = (e^c / b)(Pb - sqrt Bb). Coincident foci (b = 1) need only
    one squaring and give the Euclidean circle, normalized monic in x^2.
    """
    _check_positive("b", b)
    _check_positive("c", c)
    if not c > abs(math.log(b)):
        raise ConicError("two-focus ellipse needs c > |log b| (foci inside)")
    B1 = _abs_sq(1.0)
    P1 = RHO2 + 1.0
    if b == 1.0:
        el = eliminate_radicals(P1 - 2 * math.exp(c / 2) * Y, B1, 0.0)
        poly = el.poly / el.poly.coeffs[2, 0]
        return ConicPoly(poly, el.mask, "two-focus circle")
    k = math.exp(c) / b
    el = eliminate_radicals(P1 - k * (RHO2 + b * b), B1, -k, _abs_sq(b * b))
    return ConicPoly(el.poly.chop(1e-13).normalized(), el.mask, "two-focus ellipse")


def two_focus_hyperbola_poly(b: float, c: float) -> ConicPoly:
    """Two-focus hyperbola |d(z, i) - d(z, bi)| = c, b > 1, 0 < c < log b.

    Branch equations Pb + sqrt Bb = b e^{+-c} (P1 + sqrt B1); both branches
    clear to the same quartic. The mask accepts either branch.
    """
    _check_positive("b", b)
    if not b > 1:
        raise ConicError("two-focus hyperbola needs b > 1")
    if not 0 < c < math.log(b):
        raise ConicError("two-focus hyperbola needs 0 < c < log b")
    Pb, Bb = RHO2 + b * b, _abs_sq(b * b)
    P1, B1 = RHO2 + 1.0, _abs_sq(1.0)
    one = BivarPoly.const(1.0)
    branches = []
    el = None
    for s in (1.0, -1.0):
        m = b * math.exp(s * c)
        branches.append((Pb - m * P1, one, Bb, BivarPoly.const(m), B1))
        if el is None:
            el = eliminate_radicals(Pb - m * P1, Bb, m, B1)
    return ConicPoly(el.poly.chop(1e-13).normalized(), _radical_mask(*branches), "two-focus hyperbola")


def focus_directrix_poly(r: float, eps: float) -> ConicPoly:
    """Focus i, directrix |z| = r, eccentricity eps:

    r^2 (1 + x^4 + y^4 + 2 y^2 (eps^2 - 1) + 2 x^2 (1 + y^2 + eps^2))
        - eps^2 (r^4 + (x^2 + y^2)^2),

    i.e. r^2 |z^2 + 1|^2 - eps^2 (|z|^2 - r^2)^2. Both squared sides are
    nonnegative, so no spurious branch arises.
    """
    _check_positive("r", r)
    _check_positive("eps", eps)
    if r == 1.0:
        raise ConicError("directrix |z| = 1 passes through the focus i")
    e2 = eps * eps
    poly = (r * r * (1 + X ** 4 + Y ** 4 + 2 * (e2 - 1) * Y * Y + 2 * X * X * (1 + Y * Y + e2))
            - e2 * (r ** 4 + RHO2 * RHO2))
    return ConicPoly(poly, _all_true, "focus-directrix")


def fd_circle_limit_poly(r: float) -> ConicPoly:
    """|z^2 + 1| = 2r as (x^2 - y^2 + 1)^2 + 4 x^2 y^2 - 4 r^2."""
    _check_positive("r", r)
    return ConicPoly(_abs_sq(1.0) - 4 * r * r, _all_true, "focus-directrix circle limit")


def two_focus_parabola_poly(C: float) -> ConicPoly:
    """2 (C - 2)(x^2 + y^2)^2 + 2 C (x^2 + y^2) - C^2 y^2, a lemniscate through 0.

    Mask: (x^2 + y^2 + 1 + sqrt|z^2+1|^2)(x^2 + y^2) = C y^2.
    """
    if not C > 2:
        raise ConicError("two-focus parabola needs C > 2")
    poly = 2 * (C - 2) * RHO2 * RHO2 + 2 * C * RHO2 - C * C * Y * Y
    E = RHO2 * (RHO2 + 1.0) - C * Y * Y
    mask = _radical_mask((E, RHO2, _abs_sq(1.0), BivarPoly.const(0.0), BivarPoly.const(0.0)))
    return ConicPoly(poly, mask, "two-focus parabola")


def fd_parabola_poly(r: float) -> ConicPoly:
    """eps = 1 case: 1 - r^2 + 4 x^2 + (1 - 1/r^2)(x^2 + y^2)^2."""
    _check_positive("r", r)
    if r == 1.0:
        raise ConicError("directrix |z| = 1 passes through the focus i")
    poly = 1 - r * r + 4 * X * X + (1 - 1 / (r * r)) * RHO2 * RHO2
    return ConicPoly(poly, _all_true, "focus-directrix parabola")


def degenerate_fd_hyperbola_poly(r: float) -> ConicPoly:
    """eps = r > 1: (r^2 + 1) x^2 + (r^2 - 1) y^2 - (r^4 - 1)/2, a Cartesian ellipse."""
    if not r > 1:
        raise ConicError("degenerate focus-directrix hyperbola needs r = eps > 1")
    poly = (r * r + 1) * X * X + (r * r - 1) * Y * Y - (r ** 4 - 1) / 2
    return ConicPoly(poly, _all_true, "one-vertex hyperbola")


def conic_poly(spec) -> ConicPoly:
    """Implicit polynomial of a spec, after moving it to the canonical frame.

    The polynomial is in canonical coordinates, not the spec's own.
    """
    frame, _ = canonical_frame(spec)
    if isinstance(spec, TwoFocus):
        b = frame.b
        if spec.kind == "ellipse":
            return two_focus_ellipse_poly(b, spec.c)
        if b < 1:
            raise ConicError("canonical two-focus hyperbola needs the second focus above i")
        return two_focus_hyperbola_poly(b, spec.c)
    if isinstance(spec, FocusDirectrix):
        if abs(spec.eps - 1) < 1e-15:
            return fd_parabola_poly(frame.r)
        return focus_directrix_poly(frame.r, spec.eps)
    if isinstance(spec, TwoFocusParabola):
        return two_focus_parabola_poly(spec.C)
    if isinstance(spec, MetricCircle):
        # metric circle about i of radius r is the coincident-focus case c = 2r
        return two_focus_ellipse_poly(1.0, 2 * spec.r)
    raise TypeError(f"no implicit polynomial for {type(spec).__name__}")


# ------------------------------------------------------------ intercepts

def _axis_breakpoints(spec) -> list[float]:
    if isinstance(spec, TwoFocus):
        lb = math.log(spec.f2.y)
        return [0.0, lb, lb / 2]
    if isinstance(spec, FocusDirectrix):
        return [0.0, math.log(spec.directrix.radius)]
    return [0.0]


def _residual_scale(spec, p: ModelPoint) -> float:
    """Size of the terms that cancel in ``residual``; separates true sign
    changes from rounding noise far out along the axis."""
    if isinstance(spec, TwoFocus):
        return distance(p, spec.f1) + distance(p, spec.f2) + spec.c
    if isinstance(spec, FocusDirectrix):
        return (math.sinh(distance(p, spec.focus))
                + spec.eps * math.sinh(abs(signed_distance_to_geodesic(p, spec.directrix))))
    if isinstance(spec, TwoFocusParabola):
        return (distance(p, spec.focus) + abs(busemann(p, spec.ideal) - busemann(spec.focus, spec.ideal))
                + abs(math.log(spec.C / 2)))
    if isinstance(spec, MetricCircle):
        return distance(p, spec.center) + spec.r
    return 1.0


def axis_intercepts(spec, t_range: float = 25.0, samples: int = 4001) -> list[float]:
    """All y > 0 with residual(spec, i y) = 0, spec in canonical position.

    The residual restricted to the axis is scanned in t = log y with the
    focus/second-focus/directrix heights as forced breakpoints, and every
    sign change is refined by Brent's method. Sign changes where the
    residual is at rounding level relative to its terms are ignored.
    """
    frame, iso = canonical_frame(spec)
    canon = transform_spec(spec, iso) if not _iso_is_identity(iso) else spec
    ts = np.unique(np.concatenate([np.linspace(-t_range, t_range, samples),
                                   [t for t in _axis_breakpoints(canon) if abs(t) < t_range]]))

    def point(t):
        return ModelPoint(ModelKind.HALF_PLANE, 0.0, math.exp(t))

    def f(t):
        return residual(canon, point(t))

    vals = np.array([f(t) for t in ts])
    rel = np.abs(vals) / np.array([max(_residual_scale(canon, point(t)), 1e-300) for t in ts])
    noise = 1e-11
    roots = []
    for k in range(len(ts)):
        if vals[k] == 0:
            if 0 < k < len(ts) - 1 and rel[k - 1] > noise and rel[k + 1] > noise:
                roots.append(ts[k])
        elif (k + 1 < len(ts) and vals[k] * vals[k + 1] < 0
              and rel[k] > noise and rel[k + 1] > noise):
            roots.append(brentq(f, ts[k], ts[k + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))
    ys = sorted({round(math.exp(t), 15) for t in roots})
    return [float(y) for y in ys]


def _iso_is_identity(iso: Isometry) -> bool:
    return iso == Isometry.identity()


# ------------------------------------------------------------- matching

def classify_fd(r: float, eps: float) -> ConicClass:
    """Shape of the focus/directrix conic with focus i and directrix |z| = r.

    Works with R = max(r, 1/r) (the map z -> 1/conj(z) fixes i and swaps
    |z| = r with |z| = 1/r): eps = 1/R is the lemniscate through an ideal
    point, eps = R > 1 the one-vertex degenerate hyperbola. Remaining
    ellipses are closed or open according to the real roots of p(x, 0).
    """
    _check_positive("r", r)
    _check_positive("eps", eps)
    if abs(r - 1) < 1e-15:
        raise ConicError("directrix |z| = 1 passes through the focus i")
    R = max(r, 1 / r)
    if abs(eps - 1) <= EQ_TOL:
        return ConicClass.PARABOLA
    if eps > 1:
        if abs(eps - R) <= EQ_TOL * R:
            return ConicClass.DEGENERATE_ONE_VERTEX
        return ConicClass.HYPERBOLA
    if abs(eps * R - 1) <= EQ_TOL:
        return ConicClass.LEMNISCATE
    # y = 0 slice: (r^2 - e^2) t^2 + 2 r^2 (1 + 2 e^2) t + r^2 (1 - e^2 r^2), t = x^2
    from .implicit import real_roots

    e2 = eps * eps
    quad = [r * r * (1 - e2 * r * r), 2 * r * r * (1 + 2 * e2), r * r - e2]
    if any(t > 0 for t in real_roots(quad)):
        return ConicClass.OPEN_TWO_IDEAL_POINTS
    return ConicClass.CLOSED_ELLIPSE


def _cancel_r2(b: float, c: float) -> float:
    ch = math.cosh(c)
    return b * (b - ch) / (b * ch - 1)


def match_two_focus_hyperbola_to_fd(b: float, c: float) -> tuple[float, float]:
    """Focus/directrix (r, eps) of the two-focus hyperbola with foci i, b i.

    r = sqrt((-b + 2 b^2 e^c - b e^{2c}) / (b - 2 e^c + b e^{2c})),
    eps = sqrt(b (-1 + 2 b e^c - e^{2c})(b - 2 e^c + b e^{2c})) / (b (e^{2c} - 1)).
    """
    if not (b > 1 and 0 < c < math.log(b)):
        raise ConicError("hyperbola matching needs b > 1 and 0 < c < log b")
    ec, e2c = math.exp(c), math.exp(2 * c)
    num = -b + 2 * b * b * ec - b * e2c
    den = b - 2 * ec + b * e2c
    rad = b * (-1 + 2 * b * ec - e2c) * den
    if not (num / den > 0 and rad > 0):
        raise ConicError("negative radicand in the hyperbola matching formulas")
    return math.sqrt(num / den), math.sqrt(rad) / (b * (e2c - 1))


def match_closed_fd_ellipse_to_two_focus(r: float, eps: float) -> tuple[float, float]:
    """Two-focus (b, c) of a closed focus/directrix ellipse: the axis
    intercepts y+ > y- must equal sqrt(b e^{+-c}), so b = y+ y-,
    c = log(y+ / y-)."""
    cls = classify_fd(r, eps)
    if cls is not ConicClass.CLOSED_ELLIPSE:
        raise NoMatchError(_no_match_reason(cls))
    ys = axis_intercepts(fd_spec(r, eps))
    if len(ys) != 2:
        raise NoMatchError(f"expected two axis intercepts, found {len(ys)}")
    lo, hi = ys
    return lo * hi, math.log(hi / lo)


def match_two_focus_ellipse_to_fd(b: float, c: float) -> tuple[float, float]:
    """Closed focus/directrix ellipse (r, eps) with the same axis intercepts as
    the two-focus ellipse, when one exists."""
    if not (b > 0 and c > abs(math.log(b))):
        raise ConicError("two-focus ellipse needs c > |log b|")
    if b == 1:
        raise NoMatchError("coincident foci give a metric circle, which is never a focus/directrix conic")
    r2 = _cancel_r2(b, c)
    if not r2 > 0 or abs(r2 - 1) < 1e-14:
        raise NoMatchError("no focus/directrix ellipse has these axis intercepts")
    r = math.sqrt(r2)
    yp = b * math.exp(c)
    eps = abs(r * (1 - yp) / (yp - r2))
    if classify_fd(r, eps) is not ConicClass.CLOSED_ELLIPSE:
        raise NoMatchError("matching focus/directrix conic is not a closed ellipse")
    return r, eps


def match_fd_hyperbola_to_two_focus(r: float, eps: float) -> tuple[float, float]:
    """Inverse of ``match_two_focus_hyperbola_to_fd`` where one exists."""
    cls = classify_fd(r, eps)
    if cls is not ConicClass.HYPERBOLA:
        raise NoMatchError(_no_match_reason(cls))
    R = max(r, 1 / r)
    ys = axis_intercepts(fd_spec(R, eps))
    if len(ys) != 2 or not ys[0] > 1:
        raise NoMatchError("focus/directrix hyperbola has no pair of vertices between the foci")
    lo, hi = ys
    b, c = lo * hi, math.log(hi / lo)
    r2, e2 = match_two_focus_hyperbola_to_fd(b, c)
    if abs(r2 - R) > 1e-8 * R or abs(e2 - eps) > 1e-8 * eps:
        raise NoMatchError("axis intercepts agree but the curves differ")
    return b, c


def _no_match_reason(cls: ConicClass) -> str:
    return {
        ConicClass.OPEN_TWO_IDEAL_POINTS: "open curve with two ideal points; two-focus ellipses are compact",
        ConicClass.LEMNISCATE: "lemniscate through an ideal point; two-focus ellipses are compact",
        ConicClass.PARABOLA: "focus/directrix parabolas never agree with two-focus parabolas",
        ConicClass.DEGENERATE_ONE_VERTEX: "one-vertex degenerate hyperbola has no two-focus form",
        ConicClass.HYPERBOLA: "focus/directrix hyperbola; use the hyperbola matching",
        ConicClass.CLOSED_ELLIPSE: "closed ellipse; use the ellipse matching",
    }.get(cls, f"no two-focus form for {cls.value}")


# -------------------------------------------- fits used by the theorems

def _hp_dist(z: np.ndarray, w: complex) -> np.ndarray:
    return 2 * np.arctanh(np.abs(z - w) / np.abs(z - np.conj(w)))


def two_focus_fit_floor(points: np.ndarray, log_b_range: float = 6.0) -> tuple[float, float, float]:
    """min over (b, c) of max |d(p, i) + d(p, b i) - c| on half-plane points.

    For fixed b the optimal c is the midrange of the distance sums, so only
    log b is searched (grid scan, then bounded Brent refinement).
    Returns (floor, b, c).
    """
    z = np.asarray(points[:, 0] + 1j * points[:, 1])
    d1 = _hp_dist(z, 1j)

    def spread(lb):
        s = d1 + _hp_dist(z, 1j * math.exp(lb))
        return 0.5 * (s.max() - s.min())

    grid = np.linspace(-log_b_range, log_b_range, 241)
    vals = [spread(t) for t in grid]
    k = int(np.argmin(vals))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    res = minimize_scalar(spread, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    lb = res.x if res.fun < vals[k] else grid[k]
    s = d1 + _hp_dist(z, 1j * math.exp(lb))
    return float(0.5 * (s.max() - s.min())), math.exp(lb), float(0.5 * (s.max() + s.min()))


def metric_circle_fit_floor(points: np.ndarray, center: complex | None = None) -> tuple[float, complex, float]:
    """Best metric circle through half-plane points in the minimax sense.

    With ``center`` given only the radius is fitted; otherwise the center is
    optimized too. Returns (max deviation, center, radius).
    """
    z = np.asarray(points[:, 0] + 1j * points[:, 1])

    def spread_at(w):
        d = _hp_dist(z, w)
        return 0.5 * (d.max() - d.min()), 0.5 * (d.max() + d.min())

    if center is not None:
        dev, rad = spread_at(complex(center))
        return float(dev), complex(center), float(rad)
    # start from the circle through the lowest and highest points on the axis
    ys = points[:, 1]
    y0 = math.sqrt(ys.min() * ys.max())
    x0 = float(np.mean(points[:, 0]))

    def obj(v):
        if v[1] <= 1e-9:
            return 1e9
        return spread_at(complex(v[0], v[1]))[0]

    best = minimize(obj, [x0, y0], method="Nelder-Mead",
                    options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
    w = complex(*best.x)
    dev, rad = spread_at(w)
    return float(dev), w, float(rad)


# ------------------------------------------------------- cycles in the disk

@dataclass(frozen=True)
class CycleCurve:
    """Euclidean picture of a horocycle/hypercycle in the Poincare disk:
    a circle (``kind='circle'``) or, for hypercycles at distance 0 from a
    diameter, the straight segment (``kind='line'``) between ``ends``."""

    kind: str
    center: complex
    radius: float
    ends: tuple
    _sampler: Callable = None

    def sample(self, n: int = 100) -> list[ModelPoint]:
        return self._sampler(n)


def cycle_curve(spec) -> CycleCurve:
    if isinstance(spec, Horocycle):
        xi = spec.ideal.to(ModelKind.POINCARE).z
        p = spec.through.to(ModelKind.POINCARE).z
        s = abs(xi - p) ** 2 / (2 * (1 - (p * xi.conjugate()).real))
        center = (1 - s) * xi

        def sampler(n):
            base = math.atan2(xi.imag, xi.real)
            angles = base + np.linspace(0.05, 2 * math.pi - 0.05, n)
            return [ModelPoint.from_complex(center + s * complex(math.cos(a), math.sin(a)), ModelKind.POINCARE)
                    for a in angles]

        return CycleCurve("circle", center, s, (spec.ideal.to(ModelKind.POINCARE).value,), sampler)

    if isinstance(spec, Hypercycle):
        g = spec.axis.to(ModelKind.HALF_PLANE)
        e1, e2 = g.start.value, g.end.value
        to_norm = _normalizer_iso(e1, e2)
        back = to_norm.inverse()
        sh = math.sinh(spec.h)

        def pt(t):
            w = back.apply_complex(math.exp(t) * complex(-sh, 1.0))
            return ModelPoint.from_complex(halfplane_to_poincare(w), ModelKind.POINCARE)

        def sampler(n):
            return [pt(t) for t in np.linspace(-4.0, 4.0, n)]

        ends = tuple(e.to(ModelKind.POINCARE).value for e in (g.start, g.end))
        a, b, q = (np.exp(1j * ends[0]), np.exp(1j * ends[1]), pt(0.0).z)
        center, radius = _circumcircle(a, b, q)
        if center is None:
            return CycleCurve("line", 0j, math.inf, ends, sampler)
        return CycleCurve("circle", center, radius, ends, sampler)
    raise TypeError("cycle_curve takes a Horocycle or Hypercycle")


def _normalizer_iso(e1: float, e2: float) -> Isometry:
    if math.isinf(e2):
        return Isometry(1.0, -e1, 0.0, 1.0)
    if math.isinf(e1):
        return Isometry(0.0, -1.0, 1.0, -e2)
    s = 1.0 if e1 > e2 else -1.0
    return Isometry(s, -s * e1, 1.0, -e2)


def _circumcircle(a: complex, b: complex, c: complex):
    d = 2 * (a.real * (b.imag - c.imag) + b.real * (c.imag - a.imag) + c.real * (a.imag - b.imag))
    if abs(d) < 1e-12:
        return None, math.inf
    ux = (abs(a) ** 2 * (b.imag - c.imag) + abs(b) ** 2 * (c.imag - a.imag) + abs(c) ** 2 * (a.imag - b.imag)) / d
    uy = (abs(a) ** 2 * (c.real - b.real) + abs(b) ** 2 * (a.real - c.real) + abs(c) ** 2 * (b.real - a.real)) / d
    center = complex(ux, uy)
    return center, abs(a - center)


def horocycle_as_limit(through: ModelPoint, ideal: IdealPoint, radius: float) -> EuclideanCircle:
    """Metric circle through ``through`` whose center lies on the ray towards
    ``ideal`` at distance ``radius``; tends to the horocycle as radius grows."""
    z = through.to(ModelKind.HALF_PLANE)
    e = ideal.to(ModelKind.HALF_PLANE)
    iso = Isometry.to_standard(z)
    ee = iso(e)
    # rotate so the ideal point is at infinity, move up the axis
    if not ee.is_infinite:
        w = halfplane_to_poincare(complex(ee.value, 0))
        iso = Isometry.rotation(-math.atan2(w.imag, w.real)).compose(iso)
    center = iso.inverse()(ModelPoint(ModelKind.HALF_PLANE, 0.0, math.exp(radius)))
    from .hypgeo import metric_circle_to_euclidean

    return metric_circle_to_euclidean(center.to(ModelKind.POINCARE), radius)


# ------------------------------------------------------------ JSON specs

_TAGS = {
    MetricCircle: "metric_circle", TwoFocus: "two_focus", TwoFocusParabola: "two_focus_parabola",
    FocusDirectrix: "focus_directrix", KleinAlgebraic: "klein", Molnar: "molnar",
    Horocycle: "horocycle", Hypercycle: "hypercycle",
}


def spec_to_json(spec) -> dict:
    tag = _TAGS.get(type(spec))
    if tag is None:
        raise TypeError(f"not a conic spec: {type(spec).__name__}")
    out = {"type": tag}
    for name, value in vars(spec).items():
        if hasattr(value, "to_json"):
            value = value.to_json()
        elif isinstance(value, tuple):
            value = [list(row) for row in value]
        out[name] = value
    return out


def spec_from_json(data: dict):
    """Build a spec from {"type": tag, field: value, ...}; geometry fields use
    the hypgeo JSON form and projective fields are 3-element arrays."""
    from .hypgeo import from_json

    if not isinstance(data, dict) or "type" not in data:
        raise ConicError("spec JSON needs a 'type' field")
    by_tag = {v: k for k, v in _TAGS.items()}
    cls = by_tag.get(data["type"])
    if cls is None:
        raise ConicError(f"unknown spec type {data['type']!r}; expected one of {sorted(by_tag)}")
    kwargs = {}
    for name, value in data.items():
        if name == "type":
            continue
        if cls is Molnar and name in ("A", "B"):
            value = pm.ProjPoint(value)
        elif cls is Molnar and name == "x1":
            value = pm.ProjLine(value)
        elif isinstance(value, dict):
            value = from_json(value)
        kwargs[name] = value
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConicError(f"bad fields for {data['type']}: {exc}") from None


__all__ = [name for name in dir() if not name.startswith("_")]
