"""Models of the hyperbolic plane: points, ideal points, geodesics, distances,
reflections, isometries and conversions between the upper half-plane, the
Poincare disk and the Klein disk.

All distances are for curvature -1, so in the upper half-plane

    d(z, w) = 2 atanh |z - w| / |z - conj(w)|,

evaluated in the equivalent form 2 asinh(|z - w| / (2 sqrt(Im z Im w))),
which keeps full relative accuracy when the points are far apart.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

BOUNDARY_TOL = 1e-12
# |argument| of atanh is clamped here; see distance(..., return_flag=True)
ATANH_CLAMP = 1.0 - 1e-15


class GeometryError(ValueError):
    """Raised for data that does not describe a valid hyperbolic object."""


class ModelKind(str, Enum):
    HALF_PLANE = "halfplane"
    POINCARE = "poincare"
    KLEIN = "klein"

    @property
    def is_disk(self) -> bool:
        return self is not ModelKind.HALF_PLANE


def _model(m) -> ModelKind:
    try:
        return ModelKind(m)
    except ValueError:
        raise GeometryError(f"unknown model {m!r}") from None


def _check_interior(model: ModelKind, z: complex) -> None:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise GeometryError(f"non-finite coordinates {z!r}")
    if model is ModelKind.HALF_PLANE:
        if z.imag <= BOUNDARY_TOL:
            raise GeometryError(f"half-plane point needs Im z > 0, got {z!r}")
    elif abs(z) >= 1.0 - BOUNDARY_TOL:
        raise GeometryError(f"{model.value} point needs |z| < 1, got {z!r}")


@dataclass(frozen=True)
class ModelPoint:
    """An interior point of H^2 in one of the three models."""

    model: ModelKind
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "model", _model(self.model))
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        _check_interior(self.model, self.z)

    @classmethod
    def from_complex(cls, z: complex, model=ModelKind.HALF_PLANE) -> ModelPoint:
        z = complex(z)
        return cls(model, z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    def to(self, target) -> ModelPoint:
        return convert(self, target)

    def to_json(self) -> dict:
        return {"model": self.model.value, "kind": "point", "params": [self.x, self.y]}


@dataclass(frozen=True)
class IdealPoint:
    """A point on the ideal boundary.

    ``value`` is the real-axis coordinate (``math.inf`` for the point at
    infinity) in the half-plane and the boundary angle in [0, 2pi) for the
    disk models.
    """

    model: ModelKind
    value: float

    def __post_init__(self):
        model = _model(self.model)
        object.__setattr__(self, "model", model)
        value = float(self.value)
        if model.is_disk:
            if not math.isfinite(value):
                raise GeometryError("disk ideal points are given by a finite angle")
            value = value % (2 * math.pi)
        elif math.isnan(value):
            raise GeometryError("ideal point coordinate is NaN")
        elif math.isinf(value):
            value = math.inf
        object.__setattr__(self, "value", value)

    @property
    def is_infinite(self) -> bool:
        return self.model is ModelKind.HALF_PLANE and math.isinf(self.value)

    @property
    def z(self) -> complex:
        """Boundary position as a complex number (``inf`` for the point at infinity)."""
        if self.model.is_disk:
            return cmath.exp(1j * self.value)
        return complex(math.inf, 0.0) if self.is_infinite else complex(self.value, 0.0)

    def to(self, target) -> IdealPoint:
        return convert(self, target)

    def to_json(self) -> dict:
        v = "inf" if self.is_infinite else self.value
        return {"model": self.model.value, "kind": "ideal", "params": [v]}


def _angle_to_real(theta: float) -> float:
    s = math.sin(theta / 2)
    if abs(s) < 1e-300:
        return math.inf
    return -math.cos(theta / 2) / s


def _real_to_angle(a: float) -> float:
    if math.isinf(a):
        return 0.0
    return cmath.phase((a - 1j) / (a + 1j)) % (2 * math.pi)


@dataclass(frozen=True)
class EuclideanCircle:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise GeometryError("Euclidean circle needs a positive radius")


@dataclass(frozen=True)
class Geodesic:
    """A complete geodesic, stored by its ordered pair of ideal endpoints.

    The order fixes an orientation; ``signed_distance_to_geodesic`` is
    positive on the left of the direction of travel from ``start`` to ``end``.
    The Euclidean shape is exposed through ``kind``/``center``/``radius``:
    ``vertical`` (foot at ``center``) or ``arc`` in the half-plane,
    ``diameter`` or ``arc`` in the Poincare disk, ``chord`` in the Klein disk.
    """

    start: IdealPoint
    end: IdealPoint

    def __post_init__(self):
        if self.start.model is not self.end.model:
            raise GeometryError("geodesic endpoints live in different models")
        if _ideal_close(self.start, self.end):
            raise GeometryError("geodesic endpoints coincide")

    @property
    def model(self) -> ModelKind:
        return self.start.model

    @classmethod
    def from_ideal(cls, model, e1: float, e2: float) -> Geodesic:
        return cls(IdealPoint(model, e1), IdealPoint(model, e2))

    @classmethod
    def vertical(cls, a: float) -> Geodesic:
        """Half-plane line Re z = a, oriented upwards."""
        return cls.from_ideal(ModelKind.HALF_PLANE, a, math.inf)

    @classmethod
    def semicircle(cls, center: float, radius: float) -> Geodesic:
        """Half-plane line |z - center| = radius, oriented left to right."""
        if not radius > 0:
            raise GeometryError("semicircle radius must be positive")
        return cls.from_ideal(ModelKind.HALF_PLANE, center - radius, center + radius)

    @classmethod
    def through(cls, p: ModelPoint, q: ModelPoint) -> Geodesic:
        """The geodesic through two distinct interior points, oriented p -> q."""
        _same_model(p, q)
        if abs(p.z - q.z) < BOUNDARY_TOL:
            raise GeometryError("points coincide")
        model = p.model
        z, w = p.to(ModelKind.HALF_PLANE).z, q.to(ModelKind.HALF_PLANE).z
        if abs(z.real - w.real) < 1e-14 * max(1.0, abs(z), abs(w)):
            e1, e2 = (z.real, math.inf) if w.imag > z.imag else (math.inf, z.real)
        else:
            a = (abs(w) ** 2 - abs(z) ** 2) / (2 * (w.real - z.real))
            rho = abs(z - a)
            e1, e2 = (a - rho, a + rho) if w.real > z.real else (a + rho, a - rho)
        g = cls.from_ideal(ModelKind.HALF_PLANE, e1, e2)
        return g.to(model)

    @property
    def kind(self) -> str:
        if self.model is ModelKind.KLEIN:
            return "chord"
        if self.model is ModelKind.HALF_PLANE:
            return "vertical" if self.start.is_infinite or self.end.is_infinite else "arc"
        if abs(self.start.z + self.end.z) < 1e-13:
            return "diameter"
        return "arc"

    @property
    def center(self) -> complex:
        """Foot (vertical), arc center, or the unit direction of a diameter."""
        a, b = self.start, self.end
        kind = self.kind
        if kind == "vertical":
            return complex(b.value if a.is_infinite else a.value, 0.0)
        if self.model is ModelKind.HALF_PLANE:
            return complex((a.value + b.value) / 2, 0.0)
        if kind == "diameter":
            return a.z
        if kind == "chord":
            return (a.z + b.z) / 2
        return (a.z + b.z) / (1 + (a.z * b.z.conjugate()).real)

    @property
    def radius(self) -> float:
        kind = self.kind
        if kind in ("vertical", "diameter"):
            return math.inf
        if self.model is ModelKind.HALF_PLANE:
            return abs(self.end.value - self.start.value) / 2
        if kind == "chord":
            return abs(self.end.z - self.start.z) / 2
        return math.sqrt(abs(self.center) ** 2 - 1)

    def to(self, target) -> Geodesic:
        return convert(self, target)

    def to_json(self) -> dict:
        ends = [e.to_json()["params"][0] for e in (self.start, self.end)]
        return {"model": self.model.value, "kind": "geodesic", "params": ends}


def _ideal_close(a: IdealPoint, b: IdealPoint) -> bool:
    if a.model.is_disk:
        return abs(a.z - b.z) < BOUNDARY_TOL
    if a.is_infinite or b.is_infinite:
        return a.is_infinite and b.is_infinite
    return abs(a.value - b.value) < BOUNDARY_TOL


def _same_model(*objs) -> None:
    models = {o.model for o in objs}
    if len(models) != 1:
        raise GeometryError(f"model mismatch: {sorted(m.value for m in models)}")


# ---------------------------------------------------------------- conversions

def halfplane_to_poincare(z: complex) -> complex:
    return (z - 1j) / (z + 1j)


def poincare_to_halfplane(w: complex) -> complex:
    return 1j * (1 + w) / (1 - w)


def poincare_to_klein(w: complex) -> complex:
    return 2 * w / (1 + abs(w) ** 2)


def klein_to_poincare(k: complex) -> complex:
    return k / (1 + math.sqrt(max(0.0, 1 - abs(k) ** 2)))


def _to_poincare(model: ModelKind, z: complex) -> complex:
    if model is ModelKind.HALF_PLANE:
        return halfplane_to_poincare(z)
    if model is ModelKind.KLEIN:
        return klein_to_poincare(z)
    return z


def _from_poincare(model: ModelKind, w: complex) -> complex:
    if model is ModelKind.HALF_PLANE:
        return poincare_to_halfplane(w)
    if model is ModelKind.KLEIN:
        return poincare_to_klein(w)
    return w


def convert(obj, target):
    """Carry a point, ideal point or geodesic into the ``target`` model."""
    target = _model(target)
    if isinstance(obj, ModelPoint):
        if obj.model is target:
            return obj
        w = _to_poincare(obj.model, obj.z)
        z = _from_poincare(target, w)
        if target is ModelKind.HALF_PLANE:
            # the Cayley inverse can dip to Im z ~ 1e-17 below 0 only at the boundary
            z = complex(z.real, abs(z.imag))
        return ModelPoint.from_complex(z, target)
    if isinstance(obj, IdealPoint):
        if obj.model is target or (obj.model.is_disk and target.is_disk):
            return IdealPoint(target, obj.value)
        if target is ModelKind.HALF_PLANE:
            return IdealPoint(target, _angle_to_real(obj.value))
        return IdealPoint(target, _real_to_angle(obj.value))
    if isinstance(obj, Geodesic):
        return Geodesic(convert(obj.start, target), convert(obj.end, target))
    raise TypeError(f"cannot convert {type(obj).__name__}")


def from_json(data: dict):
    """Inverse of the ``to_json`` methods: {model, kind, params}."""
    try:
        model, kind, params = _model(data["model"]), data["kind"], list(data["params"])
    except (KeyError, TypeError) as exc:
        raise GeometryError(f"malformed geometry JSON: {data!r}") from exc
    vals = [math.inf if v in ("inf", "Infinity") else float(v) for v in params]
    if kind == "point" and len(vals) == 2:
        return ModelPoint(model, *vals)
    if kind == "ideal" and len(vals) == 1:
        return IdealPoint(model, vals[0])
    if kind == "geodesic" and len(vals) == 2:
        return Geodesic.from_ideal(model, *vals)
    raise GeometryError(f"unknown geometry kind {kind!r} or wrong parameter count")


# ------------------------------------------------------------------ distances

def distance(p: ModelPoint, q: ModelPoint, return_flag: bool = False):
    """Hyperbolic distance between two points of the same model.

    d = 2 atanh t with t = |z - w| / |z - conj(w)| (half-plane) or
    |z - w| / |1 - conj(w) z| (Poincare disk; Klein goes through it). The
    value is computed as the equivalent 2 asinh(|z - w| / (2 sqrt(Im z Im w)))
    (resp. 2 asinh(|z - w| / sqrt((1 - |z|^2)(1 - |w|^2)))), which keeps full
    relative accuracy when t is close to 1. With ``return_flag=True`` returns
    ``(d, saturated)``; ``saturated`` reports t > 1 - 1e-15, where the atanh
    form would no longer resolve the distance.
    """
    _same_model(p, q)
    if p.model is ModelKind.HALF_PLANE:
        z, w = p.z, q.z
        s = abs(z - w) / (2 * math.sqrt(z.imag * w.imag))
        t = abs(z - w) / abs(z - w.conjugate())
    else:
        z, w = _to_poincare(p.model, p.z), _to_poincare(q.model, q.z)
        s = abs(z - w) / math.sqrt((1 - abs(z) ** 2) * (1 - abs(w) ** 2))
        t = abs(z - w) / abs(1 - w.conjugate() * z)
    d = 2 * math.asinh(s)
    return (d, t > ATANH_CLAMP) if return_flag else d


# ---------------------------------------------------------------- reflections

def _reflect_halfplane(z: complex, g: Geodesic) -> complex:
    a, rho = g.center.real, g.radius
    if g.kind == "vertical":
        return 2 * a - z.conjugate()
    return a + rho * rho / (z.conjugate() - a)


def _reflect_poincare(w: complex, g: Geodesic) -> complex:
    # endpoints e^{i(t + f)}, e^{i(t - f)}: inversion in the orthogonal circle
    # written so that it stays accurate as the geodesic approaches a diameter
    t = 0.5 * (g.start.value + g.end.value)
    f = 0.5 * (g.start.value - g.end.value)
    u, cf = cmath.exp(1j * t), math.cos(f)
    wb = w.conjugate()
    return (u * wb - cf) / (cf * wb - u.conjugate())


def reflect_point(p: ModelPoint, g: Geodesic) -> ModelPoint:
    """Reflect ``p`` across the geodesic ``g`` (both in the same model)."""
    _same_model(p, g)
    if p.model is ModelKind.HALF_PLANE:
        z = _reflect_halfplane(p.z, g)
        return ModelPoint.from_complex(complex(z.real, abs(z.imag)), p.model)
    if p.model is ModelKind.POINCARE:
        return ModelPoint.from_complex(_reflect_poincare(p.z, g), p.model)
    w = _reflect_poincare(klein_to_poincare(p.z), g.to(ModelKind.POINCARE))
    return ModelPoint.from_complex(poincare_to_klein(w), p.model)


def signed_distance_to_geodesic(p: ModelPoint, g: Geodesic) -> float:
    """Distance from ``p`` to ``g``, positive on the left of ``g``'s direction."""
    _same_model(p, g)
    z = p.to(ModelKind.HALF_PLANE).z
    h = g.to(ModelKind.HALF_PLANE)
    e1, e2 = h.start.value, h.end.value
    # closed forms for sinh of the distance, with the sign fixed by the
    # normalized picture where g runs from 0 up to infinity
    if h.kind == "vertical":
        a = e1 if math.isinf(e2) else e2
        s = (a - z.real) / z.imag
        return math.asinh(s if math.isinf(e2) else -s)
    a, rho = (e1 + e2) / 2, abs(e2 - e1) / 2
    s = ((z.real - a) * (z.real - a) + z.imag * z.imag - rho * rho) / (2 * rho * z.imag)
    return math.asinh(s if e1 < e2 else -s)


def distance_to_geodesic(p: ModelPoint, g: Geodesic) -> float:
    return abs(signed_distance_to_geodesic(p, g))


def _normalizer(e1: float, e2: float):
    """Orientation-preserving Mobius map of the half-plane sending e1 -> 0, e2 -> inf."""
    if math.isinf(e2):
        return lambda z: z - e1
    if math.isinf(e1):
        return lambda z: -1 / (z - e2)
    s = 1.0 if e1 > e2 else -1.0
    return lambda z: s * (z - e1) / (z - e2)


# ----------------------------------------------------------------- isometries

@dataclass(frozen=True)
class Isometry:
    """Half-plane isometry given by a real 2x2 matrix (a, b, c, d).

    det > 0 acts by z -> (az + b)/(cz + d); det < 0 by the conjugate-linear
    map z -> (a conj(z) + b)/(c conj(z) + d). Acts on every model through
    conversion to the half-plane.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not math.isfinite(det) or abs(det) < 1e-300:
            raise GeometryError("singular isometry matrix")

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def orientation(self) -> int:
        return 1 if self.det > 0 else -1

    @classmethod
    def identity(cls) -> Isometry:
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def reflection(cls, g: Geodesic) -> Isometry:
        g = g.to(ModelKind.HALF_PLANE)
        a = g.center.real
        if g.kind == "vertical":
            return cls(-1.0, 2 * a, 0.0, 1.0)
        rho = g.radius
        return cls(a / rho, (rho * rho - a * a) / rho, 1 / rho, -a / rho)

    @classmethod
    def rotation(cls, angle: float) -> Isometry:
        """Rotation by ``angle`` about i."""
        t = angle / 2
        return cls(math.cos(t), math.sin(t), -math.sin(t), math.cos(t))

    @classmethod
    def to_standard(cls, p: ModelPoint, q: ModelPoint | None = None) -> Isometry:
        """Orientation-preserving isometry sending p to i and, if given, q onto
        the imaginary axis above i."""
        z = p.to(ModelKind.HALF_PLANE).z
        s = math.sqrt(z.imag)
        move = cls(1 / s, -z.real / s, 0.0, s)
        if q is None:
            return move
        w = halfplane_to_poincare(move.apply_complex(q.to(ModelKind.HALF_PLANE).z))
        if abs(w) < 1e-15:
            return move
        # rotation about i by alpha rotates the Cayley disk picture by alpha too
        return cls.rotation(-cmath.phase(w)).compose(move)

    def apply_complex(self, z: complex) -> complex:
        if math.isinf(z.real):
            return complex(math.inf, 0.0) if self.c == 0 else complex(self.a / self.c, 0.0)
        if self.det < 0:
            z = z.conjugate()
        den = self.c * z + self.d
        if den == 0:
            return complex(math.inf, 0.0)
        return (self.a * z + self.b) / den

    def compose(self, other: Isometry) -> Isometry:
        """self after other."""
        # conjugate-linear maps commute with real matrices, so composition is
        # ordinary matrix multiplication
        return Isometry(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> Isometry:
        det = self.det
        return Isometry(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __call__(self, obj):
        if isinstance(obj, ModelPoint):
            z = self.apply_complex(obj.to(ModelKind.HALF_PLANE).z)
            return ModelPoint.from_complex(complex(z.real, abs(z.imag))).to(obj.model)
        if isinstance(obj, IdealPoint):
            z = self.apply_complex(obj.to(ModelKind.HALF_PLANE).z)
            return IdealPoint(ModelKind.HALF_PLANE, z.real).to(obj.model)
        if isinstance(obj, Geodesic):
            return Geodesic(self(obj.start), self(obj.end))
        raise TypeError(f"cannot apply isometry to {type(obj).__name__}")


def busemann(p: ModelPoint, xi: IdealPoint) -> float:
    """Busemann function of the ideal point ``xi`` (horocycles are its level
    sets). Normalized so that it vanishes at i in the half-plane."""
    z = p.to(ModelKind.HALF_PLANE).z
    e = xi.to(ModelKind.HALF_PLANE)
    if e.is_infinite:
        return -math.log(z.imag)
    a = e.value
    return math.log(abs(z - a) ** 2 / (z.imag * (1 + a * a)))


# -------------------------------------------------------- metric circles

def metric_circle_to_euclidean(center: ModelPoint, r: float) -> EuclideanCircle:
    """Euclidean picture of the metric circle of radius ``r`` about ``center``.

    Only the conformal models draw metric circles as circles; the Klein model
    draws them as ellipses and is rejected.
    """
    if not r > 0:
        raise GeometryError("metric circle radius must be positive")
    if center.model is ModelKind.KLEIN:
        raise GeometryError("metric circles are Euclidean ellipses in the Klein model")
    if center.model is ModelKind.HALF_PLANE:
        x, y = center.x, center.y
        return EuclideanCircle(complex(x, y * math.cosh(r)), y * math.sinh(r))
    c = center.z
    t = math.tanh(r / 2)
    den = 1 - t * t * abs(c) ** 2
    return EuclideanCircle(c * (1 - t * t) / den, t * (1 - abs(c) ** 2) / den)


def euclidean_circle_to_metric(circle: EuclideanCircle, model) -> tuple[ModelPoint, float]:
    """Inverse of ``metric_circle_to_euclidean``; the circle must lie strictly
    inside the model (otherwise it is a horocycle or hypercycle)."""
    model = _model(model)
    c, rad = circle.center, circle.radius
    if model is ModelKind.KLEIN:
        raise GeometryError("Euclidean circles are not metric circles in the Klein model")
    if model is ModelKind.HALF_PLANE:
        if c.imag - rad <= BOUNDARY_TOL:
            raise GeometryError("circle touches or crosses the ideal boundary")
        y = math.sqrt((c.imag - rad) * (c.imag + rad))
        return ModelPoint(model, c.real, y), math.atanh(rad / c.imag)
    if abs(c) + rad >= 1 - BOUNDARY_TOL:
        raise GeometryError("circle touches or crosses the ideal boundary")
    u = c / abs(c) if abs(c) > 0 else 1.0
    s1 = 2 * math.atanh(abs(c) - rad)
    s2 = 2 * math.atanh(abs(c) + rad)
    return ModelPoint.from_complex(u * math.tanh((s1 + s2) / 4), model), (s2 - s1) / 2
