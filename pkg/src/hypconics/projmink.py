"""The real projective plane with the Minkowski form x^2 + y^2 - z^2.

Points and lines are homogeneous triples. The affine chart z = 1 is the
Klein disk picture: interior points have B(p, p) < 0, the unit circle is the
absolute, and reflections in lines are the B-orthogonal reflections in their
poles. Also here: Molnar's reflection construction of a conic from two foci
and an auxiliary line, and least-squares conic fitting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

J = np.diag([1.0, 1.0, -1.0])
INCIDENCE_TOL = 1e-12
BOUNDARY_TOL = 1e-12


class ProjectiveError(ValueError):
    pass


class MolnarPreconditionError(ProjectiveError):
    """A hypothesis of the Molnar construction fails; ``clause`` names it."""

    def __init__(self, clause: str, message: str):
        super().__init__(f"{clause}: {message}")
        self.clause = clause


def _normalize(v) -> tuple[float, float, float]:
    v = np.asarray(v, dtype=float).reshape(3)
    n = np.linalg.norm(v)
    if not np.isfinite(n) or n == 0:
        raise ProjectiveError("homogeneous coordinates must be finite and not all zero")
    v = v / n
    for c in v:
        if abs(c) > 1e-14:
            if c < 0:
                v = -v
            break
    return tuple(float(c) + 0.0 for c in v)


class _Homogeneous:
    __slots__ = ("coords",)

    def __init__(self, *v):
        if len(v) == 1:
            v = v[0]
        self.coords = _normalize(v)

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.coords)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return bool(np.allclose(self.coords, other.coords, atol=1e-12, rtol=0))

    def __hash__(self):
        return hash(tuple(round(c, 9) for c in self.coords))

    def __repr__(self):
        return f"{type(self).__name__}({self.coords[0]:.12g}, {self.coords[1]:.12g}, {self.coords[2]:.12g})"

    def to_json(self) -> list[float]:
        return list(self.coords)


class ProjPoint(_Homogeneous):
    """A point [x : y : z] of P^2(R)."""

    __slots__ = ()

    @classmethod
    def chart(cls, x: float, y: float) -> ProjPoint:
        return cls(x, y, 1.0)

    def affine(self) -> tuple[float, float] | None:
        """Klein-chart coordinates, or None for points on the line at infinity."""
        x, y, z = self.coords
        if abs(z) < 1e-14:
            return None
        return x / z, y / z


class ProjLine(_Homogeneous):
    """A line {u x + v y + w z = 0} of P^2(R), stored as its covector."""

    __slots__ = ()

    @classmethod
    def chart(cls, a: float, b: float, c: float) -> ProjLine:
        """The chart line a x + b y + c = 0."""
        return cls(a, b, c)


def minkowski(p, q) -> float:
    """B(p, q) = p1 q1 + p2 q2 - p3 q3 on raw vectors or points."""
    p = p.vec if isinstance(p, _Homogeneous) else np.asarray(p, float)
    q = q.vec if isinstance(q, _Homogeneous) else np.asarray(q, float)
    return float(p @ J @ q)


def polarity(e):
    """B-orthogonal complement: point -> polar line, line -> pole."""
    if isinstance(e, ProjPoint):
        return ProjLine(J @ e.vec)
    if isinstance(e, ProjLine):
        return ProjPoint(J @ e.vec)
    raise TypeError(f"polarity of {type(e).__name__}")


def incident(p: ProjPoint, line: ProjLine, tol: float = INCIDENCE_TOL) -> bool:
    return abs(float(p.vec @ line.vec)) <= tol


def _cross(a: np.ndarray, b: np.ndarray, what: str) -> np.ndarray:
    c = np.cross(a, b)
    if np.linalg.norm(c) <= 1e-12:
        raise ProjectiveError(f"{what} of equal arguments is undefined")
    return c


def join(p: ProjPoint, q: ProjPoint) -> ProjLine:
    return ProjLine(_cross(p.vec, q.vec, "join"))


def meet(l: ProjLine, m: ProjLine) -> ProjPoint:
    return ProjPoint(_cross(l.vec, m.vec, "meet"))


def dual_form(line: ProjLine) -> float:
    u, v, w = line.coords
    return u * u + v * v - w * w


def is_boundary_line(line: ProjLine, tol: float = BOUNDARY_TOL) -> bool:
    """True for lines tangent to the absolute."""
    return abs(dual_form(line)) <= tol


def reflection_matrix(m: ProjLine) -> np.ndarray:
    """Matrix of v -> v - 2 B(v, n)/B(n, n) n, n the pole of ``m``."""
    if is_boundary_line(m):
        raise ProjectiveError("reflection across a boundary line is undefined")
    n = J @ m.vec
    return np.eye(3) - 2.0 * np.outer(n, n) @ J / float(n @ J @ n)


def reflect_across_line(e, m: ProjLine):
    """Reflect a point or a line across the line ``m``."""
    M = reflection_matrix(m)
    if isinstance(e, ProjPoint):
        return ProjPoint(M @ e.vec)
    if isinstance(e, ProjLine):
        # M is an involution, so covectors transform by M^-T = M^T
        return ProjLine(M.T @ e.vec)
    raise TypeError(f"cannot reflect {type(e).__name__}")


# ------------------------------------------------------------- conic fitting

@dataclass
class ConicFit:
    matrix: np.ndarray           # symmetric, unit Frobenius norm
    max_residual: float          # max |p^T M p| over unit-norm input points
    det: float
    degenerate: bool
    singular_values: np.ndarray = field(repr=False)

    def __call__(self, p) -> float:
        v = p.vec if isinstance(p, _Homogeneous) else np.asarray(p, float)
        return float(v @ self.matrix @ v)

    def classify(self) -> str:
        """Euclidean type of the chart curve: ellipse, parabola or hyperbola."""
        a, b, d = self.matrix[0, 0], self.matrix[1, 1], self.matrix[0, 1]
        disc = d * d - a * b
        if abs(disc) < 1e-12:
            return "parabola"
        return "ellipse" if disc < 0 else "hyperbola"


def _veronese(P: np.ndarray) -> np.ndarray:
    x, y, z = P.T
    return np.column_stack([x * x, y * y, z * z, 2 * x * y, 2 * x * z, 2 * y * z])


def fit_conic(points, degenerate_tol: float = 1e-9) -> ConicFit:
    """Least-squares conic through homogeneous points (Veronese nullspace).

    The returned matrix minimizes the sum of squared evaluations over all
    points. ``degenerate`` is set when the nullspace has dimension > 1 or the
    fitted matrix is (numerically) singular.
    """
    P = np.array([p.vec if isinstance(p, _Homogeneous) else _normalize(p) for p in points], dtype=float)
    if len(P) < 5:
        raise ProjectiveError("fit_conic needs at least 5 points")
    _, s, vt = np.linalg.svd(_veronese(P), full_matrices=True)
    sv = np.zeros(6)
    sv[: len(s)] = s
    a, b, c, d, e, f = vt[-1]
    M = np.array([[a, d, e], [d, b, f], [e, f, c]])
    M /= np.linalg.norm(M)
    res = np.abs(np.einsum("ij,jk,ik->i", P, M, P))
    det = float(np.linalg.det(M))
    nullity2 = sv[4] <= degenerate_tol * sv[0]
    return ConicFit(M, float(res.max()), det, bool(nullity2 or abs(det) < degenerate_tol), sv)


def minkowski_spectrum(Q: np.ndarray) -> np.ndarray:
    """Eigenvalues of J Q scaled by the one of largest modulus.

    Invariant under Q -> M^T Q M for B-preserving M and under rescaling Q,
    so it compares conics up to hyperbolic isometry.
    """
    lam = np.linalg.eigvals(J @ np.asarray(Q, float))
    lam = lam / lam[np.argmax(np.abs(lam))]
    return np.sort_complex(lam)


def congruent(Q1: np.ndarray, Q2: np.ndarray, tol: float = 1e-7) -> bool:
    return bool(np.max(np.abs(minkowski_spectrum(Q1) - minkowski_spectrum(Q2))) <= tol)


# ---------------------------------------------------------- Molnar conics

@dataclass
class MolnarResult:
    x11: ProjPoint
    points: list[ProjPoint]          # X11 first, then one point per kept sample
    params: list[float]              # sample parameters (tan theta) of the kept points
    skipped: int                     # samples where a or b is a boundary line
    degenerate: int                  # samples whose reflected lines coincide


def line_parametrization(line: ProjLine):
    """Return Y(t) covering ``line``: chart foot of the perpendicular from the
    origin plus t times the unit chart direction (t = inf gives the point at
    infinity of the line)."""
    u, v, w = line.coords
    r2 = u * u + v * v
    if r2 < 1e-24:
        base, direction = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    else:
        base = np.array([-u * w / r2, -v * w / r2, 1.0])
        direction = np.array([-v, u, 0.0]) / math.sqrt(r2)

    def at(t: float) -> ProjPoint:
        if math.isinf(t):
            return ProjPoint(direction)
        return ProjPoint(base + t * direction)

    return at


def molnar_conic(A: ProjPoint, B: ProjPoint, x1: ProjLine, n: int = 200) -> MolnarResult:
    """Molnar's construction of a conic with foci A, B and auxiliary line x1.

    X11 = a11 ^ b11 with a11 = A B^{x1}, b11 = B A^{x1}. For n sample points Y
    on x1 (parameter tan(theta), theta evenly spaced in (-pi/2, pi/2)) with
    a = YA, b = YB, the point X = a11^a ^ b11^b is added. Samples where a or b
    is a boundary line are skipped and counted.
    """
    if is_boundary_line(x1):
        raise MolnarPreconditionError("x1-boundary", "x1 is tangent to the absolute")
    if A == B:
        raise MolnarPreconditionError("foci-equal", "A and B coincide")
    if incident(A, x1, 1e-12) or incident(B, x1, 1e-12):
        raise MolnarPreconditionError("x1-through-focus", "x1 passes through A or B")
    Bx = reflect_across_line(B, x1)
    Ax = reflect_across_line(A, x1)
    if A == Bx:
        raise MolnarPreconditionError("mirror-foci", "A and B are reflections of each other across x1")
    a11, b11 = join(A, Bx), join(B, Ax)
    if is_boundary_line(a11) or is_boundary_line(b11):
        raise MolnarPreconditionError("a11-b11-boundary", "a11 or b11 is a boundary line")
    x11 = meet(a11, b11)

    Y = line_parametrization(x1)
    points, params = [x11], []
    skipped = degenerate = 0
    for k in range(n):
        t = math.tan(-math.pi / 2 + math.pi * (k + 0.5) / n)
        y = Y(t)
        try:
            a, b = join(y, A), join(y, B)
        except ProjectiveError:
            degenerate += 1
            continue
        if is_boundary_line(a) or is_boundary_line(b):
            skipped += 1
            continue
        try:
            X = meet(reflect_across_line(a11, a), reflect_across_line(b11, b))
        except ProjectiveError:
            degenerate += 1
            continue
        points.append(X)
        params.append(t)
    return MolnarResult(x11, points, params, skipped, degenerate)
