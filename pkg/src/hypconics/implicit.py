"""Dense bivariate polynomials, real-root isolation, implicit curve tracing
and residual audits of traced curves."""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.spatial.distance import directed_hausdorff

from .hypgeo import BOUNDARY_TOL, GeometryError, IdealPoint, ModelKind, ModelPoint

Mask = Callable[[np.ndarray, np.ndarray], np.ndarray]


class BivarPoly:
    """Real polynomial sum c[i, j] x^i y^j with a dense coefficient array."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=float, ndmin=2)
        if c.ndim != 2:
            raise ValueError("coefficients must form a 2-d array")
        self.coeffs = _trim2(c)

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, value: float) -> BivarPoly:
        return cls([[value]])

    @classmethod
    def x(cls) -> BivarPoly:
        return cls([[0.0], [1.0]])

    @classmethod
    def y(cls) -> BivarPoly:
        return cls([[0.0, 1.0]])

    @classmethod
    def from_terms(cls, terms: dict) -> BivarPoly:
        """Build from ``{(i, j): coefficient}``."""
        if not terms:
            return cls.const(0.0)
        n = max(i for i, _ in terms) + 1
        m = max(j for _, j in terms) + 1
        c = np.zeros((n, m))
        for (i, j), v in terms.items():
            c[i, j] += v
        return cls(c)

    # properties ---------------------------------------------------------
    @property
    def degree(self) -> int:
        nz = np.argwhere(self.coeffs != 0)
        if len(nz) == 0:
            return -1
        return int(nz.sum(axis=1).max())

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs) <= tol))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def terms(self) -> dict:
        return {(int(i), int(j)): float(self.coeffs[i, j]) for i, j in np.argwhere(self.coeffs != 0)}

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> BivarPoly:
        if isinstance(other, BivarPoly):
            return other
        return BivarPoly.const(float(other))

    def __add__(self, other):
        other = self._coerce(other)
        n = max(self.coeffs.shape[0], other.coeffs.shape[0])
        m = max(self.coeffs.shape[1], other.coeffs.shape[1])
        c = np.zeros((n, m))
        c[: self.coeffs.shape[0], : self.coeffs.shape[1]] += self.coeffs
        c[: other.coeffs.shape[0], : other.coeffs.shape[1]] += other.coeffs
        return BivarPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly(-self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, BivarPoly):
            return BivarPoly(self.coeffs * float(other))
        a, b = self.coeffs, other.coeffs
        c = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1))
        for i, j in np.argwhere(a != 0):
            c[i : i + b.shape[0], j : j + b.shape[1]] += a[i, j] * b
        return BivarPoly(c)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float):
        return BivarPoly(self.coeffs / float(scalar))

    def __pow__(self, n: int):
        if n < 0 or int(n) != n:
            raise ValueError("only non-negative integer powers")
        out = BivarPoly.const(1.0)
        for _ in range(int(n)):
            out = out * self
        return out

    def __repr__(self):
        return f"BivarPoly(degree={self.degree}, terms={self.terms()})"

    # evaluation ---------------------------------------------------------
    def __call__(self, x, y):
        """Horner evaluation, vectorized over broadcastable ``x``, ``y``."""
        return npoly.polyval2d(x, y, self.coeffs)

    eval = __call__

    def dx(self) -> BivarPoly:
        return BivarPoly(npoly.polyder(self.coeffs, axis=0)) if self.coeffs.shape[0] > 1 else BivarPoly.const(0.0)

    def dy(self) -> BivarPoly:
        return BivarPoly(npoly.polyder(self.coeffs, axis=1)) if self.coeffs.shape[1] > 1 else BivarPoly.const(0.0)

    def compose(self, px: BivarPoly, py: BivarPoly) -> BivarPoly:
        """Substitute x -> px(x, y), y -> py(x, y)."""
        out = BivarPoly.const(0.0)
        xpows = [BivarPoly.const(1.0)]
        for _ in range(self.coeffs.shape[0] - 1):
            xpows.append(xpows[-1] * px)
        ypows = [BivarPoly.const(1.0)]
        for _ in range(self.coeffs.shape[1] - 1):
            ypows.append(ypows[-1] * py)
        for (i, j), v in self.terms().items():
            out = out + v * xpows[i] * ypows[j]
        return out

    def top_form(self) -> BivarPoly:
        """The homogeneous part of highest degree."""
        d = self.degree
        c = np.zeros_like(self.coeffs)
        for i, j in np.argwhere(self.coeffs != 0):
            if i + j == d:
                c[i, j] = self.coeffs[i, j]
        return BivarPoly(c)

    def slice_y(self, y0: float) -> np.ndarray:
        """Univariate coefficients (ascending in x) of p(x, y0)."""
        return npoly.polyval(y0, self.coeffs.T)

    def slice_x(self, x0: float) -> np.ndarray:
        """Univariate coefficients (ascending in y) of p(x0, y)."""
        return npoly.polyval(x0, self.coeffs)

    # normalization ------------------------------------------------------
    def normalized(self) -> BivarPoly:
        """Scaled to max-abs coefficient 1, sign fixed by the first nonzero
        coefficient in (i, j) order being positive."""
        m = self.max_abs()
        if m == 0:
            return self
        c = self.coeffs / m
        first = c.flat[np.flatnonzero(np.abs(c) > 1e-6)[0]]
        return BivarPoly(c * np.sign(first))

    def chop(self, tol: float = 1e-12) -> BivarPoly:
        """Zero out coefficients below ``tol`` relative to the largest."""
        c = self.coeffs.copy()
        c[np.abs(c) <= tol * self.max_abs()] = 0.0
        return BivarPoly(c)

    def divide_y_power(self, tol: float = 1e-12) -> tuple[BivarPoly, int]:
        """Remove the largest power y^k dividing the polynomial (relative ``tol``)."""
        p = self.chop(tol)
        if p.is_zero():
            return p, 0
        k = 0
        while k < p.coeffs.shape[1] and np.all(p.coeffs[:, k] == 0):
            k += 1
        return BivarPoly(p.coeffs[:, k:]), k

    def coefficient_distance(self, other: BivarPoly) -> float:
        """Max coefficient difference after normalizing both polynomials."""
        a, b = self.normalized().coeffs, other.normalized().coeffs
        n, m = max(a.shape[0], b.shape[0]), max(a.shape[1], b.shape[1])
        pa, pb = np.zeros((n, m)), np.zeros((n, m))
        pa[: a.shape[0], : a.shape[1]] = a
        pb[: b.shape[0], : b.shape[1]] = b
        return float(np.max(np.abs(pa - pb)))

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        return {"degree": self.degree, "coefficients": self.coeffs.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> BivarPoly:
        return cls(data["coefficients"])


def _trim2(c: np.ndarray) -> np.ndarray:
    nz = np.argwhere(c != 0)
    if len(nz) == 0:
        return np.zeros((1, 1))
    n, m = nz.max(axis=0) + 1
    return c[:n, :m].copy()


# ------------------------------------------------------- univariate roots

def _trim1(p, tol: float = 0.0) -> np.ndarray:
    p = np.array(p, dtype=float, ndmin=1)
    scale = np.max(np.abs(p)) if p.size else 0.0
    if scale == 0:
        return np.zeros(1)
    p = np.where(np.abs(p) <= tol * scale, 0.0, p)
    nz = np.flatnonzero(p)
    return p[: nz[-1] + 1] if nz.size else np.zeros(1)


def sturm_sequence(p, tol: float = 1e-12) -> list[np.ndarray]:
    """Sturm sequence of a univariate polynomial (ascending coefficients).

    Remainders are chopped at ``tol`` relative to the dividend so that the
    floating-point sequence terminates at the (approximate) gcd of p and p'.
    """
    p = _trim1(p, tol)
    seq = [p]
    if len(p) < 2:
        return seq
    seq.append(_trim1(npoly.polyder(p), tol))
    while len(seq[-1]) > 1:
        _, r = npoly.polydiv(seq[-2], seq[-1])
        scale = max(np.max(np.abs(seq[-2])), np.max(np.abs(seq[-1])))
        r = np.where(np.abs(r) <= tol * scale, 0.0, -np.asarray(r, dtype=float))
        r = _trim1(r)
        if not np.any(r):
            break
        seq.append(r)
    return seq


def sign_variations(seq: Sequence[np.ndarray], x: float) -> int:
    signs = []
    for q in seq:
        v = npoly.polyval(x, q)
        if v != 0:
            signs.append(v > 0)
    return sum(a != b for a, b in zip(signs, signs[1:]))


def root_bound(p) -> float:
    """Cauchy bound on the moduli of the roots."""
    p = _trim1(p)
    if len(p) < 2:
        return 1.0
    return 1.0 + float(np.max(np.abs(p[:-1] / p[-1])))


def real_roots(p, lo: float | None = None, hi: float | None = None, tol: float = 1e-12) -> list[float]:
    """Distinct real roots of ``p`` in (lo, hi], by Sturm isolation + bisection.

    Multiple roots are reported once. Roots are refined to an interval of
    width ``tol`` (bisection on p for odd multiplicity, on the Sturm count
    otherwise).
    """
    p = _trim1(p, 1e-14)
    if len(p) < 2:
        return []
    seq = sturm_sequence(p)
    bound = root_bound(p)
    lo = -bound if lo is None else lo
    hi = bound if hi is None else hi
    # nudge endpoints off exact roots
    for _ in range(8):
        if npoly.polyval(lo, p) != 0:
            break
        lo -= 1e-9 * max(1.0, abs(lo))
    count = lambda a, b: sign_variations(seq, a) - sign_variations(seq, b)

    roots: list[float] = []
    stack = [(lo, hi, count(lo, hi))]
    while stack:
        a, b, n = stack.pop()
        if n <= 0:
            continue
        if n == 1 or b - a <= tol:
            roots.append(_refine(p, seq, a, b, tol))
            continue
        m = 0.5 * (a + b)
        if npoly.polyval(m, p) == 0:
            m += 0.25 * (b - a) * 1e-3
        stack.append((m, b, count(m, b)))
        stack.append((a, m, count(a, m)))
    return sorted(roots)


def _refine(p, seq, a: float, b: float, tol: float) -> float:
    fa, fb = npoly.polyval(a, p), npoly.polyval(b, p)
    if fb == 0:
        return b
    if fa * fb < 0:
        while b - a > tol:
            m = 0.5 * (a + b)
            fm = npoly.polyval(m, p)
            if fm == 0:
                return m
            if (fm > 0) == (fa > 0):
                a, fa = m, fm
            else:
                b = m
        return 0.5 * (a + b)
    va = sign_variations(seq, a)
    while b - a > tol:
        m = 0.5 * (a + b)
        if va - sign_variations(seq, m) >= 1:
            b = m
        else:
            a, va = m, sign_variations(seq, m)
    return 0.5 * (a + b)


def halfplane_poly_to_poincare(p: BivarPoly) -> BivarPoly:
    """Pull a half-plane polynomial back to the Poincare disk.

    With w = u + iv and z = i(1 + w)/(1 - w): x = -2v/D, y = (1 - u^2 - v^2)/D,
    D = (1 - u)^2 + v^2. Returns sum c_ij X^i Y^j D^(n - i - j), which has
    the same zero set as p(x(w), y(w)) inside the disk.
    """
    u, v = BivarPoly.x(), BivarPoly.y()
    X, Y = -2.0 * v, 1.0 - u * u - v * v
    D = (1.0 - u) ** 2 + v * v
    n = p.degree
    out = BivarPoly.const(0.0)
    for (i, j), c in p.terms().items():
        out = out + c * X ** i * Y ** j * D ** (n - i - j)
    return out


# ---------------------------------------------------------------- tracing

@dataclass(frozen=True)
class TraceRegion:
    """Box in model coordinates, grid step ``h`` and crossing refinement depth.

    ``model=None`` traces in the plain Euclidean plane (no domain clipping).
    """

    model: ModelKind | None = ModelKind.HALF_PLANE
    xmin: float = -4.0
    xmax: float = 4.0
    ymin: float = 0.0
    ymax: float = 4.0
    h: float = 1.0 / 512
    refine: int = 40

    def __post_init__(self):
        if self.model is not None:
            object.__setattr__(self, "model", ModelKind(self.model))
        if not (self.h > 0 and self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("empty trace region or non-positive step")

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        y0 = self.ymin
        if self.model is ModelKind.HALF_PLANE and y0 <= BOUNDARY_TOL:
            y0 = self.h / 2
        nx = max(1, int(math.ceil((self.xmax - self.xmin) / self.h - 1e-9)))
        ny = max(1, int(math.ceil((self.ymax - y0) / self.h - 1e-9)))
        return self.xmin + self.h * np.arange(nx + 1), y0 + self.h * np.arange(ny + 1)

    def inside(self, x, y) -> np.ndarray:
        x, y = np.asarray(x, float), np.asarray(y, float)
        if self.model is None:
            return np.isfinite(x) & np.isfinite(y)
        if self.model is ModelKind.HALF_PLANE:
            return y > BOUNDARY_TOL
        return x * x + y * y < (1 - BOUNDARY_TOL) ** 2


@dataclass
class SampledCurve:
    """Traced zero set: polylines of points (N x 2 arrays) with per-point
    polynomial residuals. Closed polylines repeat their first point."""

    model: ModelKind | None
    polylines: list[np.ndarray]
    residuals: list[np.ndarray]
    h: float = 0.0
    ideal_endpoints: list[IdealPoint] = field(default_factory=list)
    singular_points: list[tuple[float, float]] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not any(len(p) for p in self.polylines)

    def points(self) -> np.ndarray:
        if self.is_empty:
            return np.zeros((0, 2))
        return np.vstack([p for p in self.polylines if len(p)])

    def all_residuals(self) -> np.ndarray:
        if self.is_empty:
            return np.zeros(0)
        return np.concatenate([r for r in self.residuals if len(r)])

    def closed(self) -> list[bool]:
        return [len(p) > 2 and bool(np.all(p[0] == p[-1])) for p in self.polylines]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "residual"])
        for k, (pl, res) in enumerate(zip(self.polylines, self.residuals)):
            if k:
                buf.write("\n")
            for (x, y), r in zip(pl, res):
                w.writerow([repr(float(x)), repr(float(y)), repr(float(r))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, model=ModelKind.HALF_PLANE, h: float = 0.0) -> SampledCurve:
        lines = text.splitlines()
        if lines and lines[0].startswith("x"):
            lines = lines[1:]
        polylines, residuals, cur = [], [], []
        for line in lines + [""]:
            if not line.strip():
                if cur:
                    a = np.array(cur, dtype=float)
                    polylines.append(a[:, :2])
                    residuals.append(a[:, 2])
                    cur = []
                continue
            cur.append([float(v) for v in line.split(",")])
        return cls(ModelKind(model), polylines, residuals, h)


def trace(p: BivarPoly, region: TraceRegion | None = None) -> SampledCurve:
    """Trace the zero set of ``p`` inside ``region`` by marching squares.

    Edge crossings are refined by bisection along the grid edge; saddle cells
    are split using the sign at the cell center. Points within 2h of a
    singular point of the curve start separate polylines.
    """
    region = region or TraceRegion()
    q = p.normalized()
    xs, ys = region.grid()
    X, Y = np.meshgrid(xs, ys)
    valid = region.inside(X, Y)
    F = np.where(valid, q(X, Y), np.nan)
    S = F >= 0
    ny, nx = len(ys) - 1, len(xs) - 1
    h = region.h

    # edge crossings: horizontal edges (j, i)-(j, i+1), vertical (j, i)-(j+1, i)
    vh = valid[:, :-1] & valid[:, 1:]
    vv = valid[:-1, :] & valid[1:, :]
    ch = vh & (S[:, :-1] != S[:, 1:])
    cv = vv & (S[:-1, :] != S[1:, :])
    nh = (ny + 1) * nx

    pts: dict[int, tuple[float, float]] = {}
    jh, ih = np.nonzero(ch)
    if len(jh):
        px, py = _refine_edges(q, xs[ih], ys[jh], xs[ih + 1], ys[jh], F[jh, ih], region.refine)
        for j, i, a, b in zip(jh, ih, px, py):
            pts[int(j * nx + i)] = (a, b)
    jv, iv = np.nonzero(cv)
    if len(jv):
        px, py = _refine_edges(q, xs[iv], ys[jv], xs[iv], ys[jv + 1], F[jv, iv], region.refine)
        for j, i, a, b in zip(jv, iv, px, py):
            pts[int(nh + j * (nx + 1) + i)] = (a, b)

    cell_valid = valid[:-1, :-1] & valid[:-1, 1:] & valid[1:, :-1] & valid[1:, 1:]
    active = cell_valid & (ch[:-1, :] | ch[1:, :] | cv[:, :-1] | cv[:, 1:])
    adj: dict[int, list[int]] = {}

    def link(a, b):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    for j, i in zip(*np.nonzero(active)):
        bottom, top = j * nx + i, (j + 1) * nx + i
        left, right = nh + j * (nx + 1) + i, nh + j * (nx + 1) + i + 1
        crossing = [e for e, c in ((bottom, ch[j, i]), (right, cv[j, i + 1]),
                                   (top, ch[j + 1, i]), (left, cv[j, i])) if c]
        if len(crossing) == 2:
            link(*crossing)
        elif len(crossing) == 4:
            center = q(xs[i] + h / 2, ys[j] + h / 2) >= 0
            if center == S[j, i]:
                link(bottom, right)
                link(top, left)
            else:
                link(bottom, left)
                link(top, right)

    chains = _assemble(adj)
    polylines = [np.array([pts[e] for e in ch_], dtype=float) for ch_ in chains]

    singular = _singular_points(q, polylines, region)
    if singular:
        polylines = _split_near(polylines, singular, 2 * h)

    residuals = [q(pl[:, 0], pl[:, 1]) if len(pl) else np.zeros(0) for pl in polylines]
    ideals = []
    if region.model is None:
        return SampledCurve(None, polylines, residuals, h, ideals, singular)
    try:
        lo, hi = (region.xmin, region.xmax)
        for e in ideal_boundary_points(p, region.model):
            if region.model is ModelKind.HALF_PLANE and not e.is_infinite and not lo <= e.value <= hi:
                continue
            ideals.append(e)
    except GeometryError:
        pass
    return SampledCurve(region.model, polylines, residuals, h, ideals, singular)


def _refine_edges(q, x0, y0, x1, y1, f0, steps):
    """Bisection along the segments (x0,y0)-(x1,y1), vectorized."""
    lo = np.zeros_like(x0, dtype=float)
    hi = np.ones_like(x0, dtype=float)
    pos0 = f0 >= 0
    for _ in range(steps):
        m = 0.5 * (lo + hi)
        fm = q(x0 + m * (x1 - x0), y0 + m * (y1 - y0))
        same = (fm >= 0) == pos0
        lo = np.where(same, m, lo)
        hi = np.where(same, hi, m)
    flo = q(x0 + lo * (x1 - x0), y0 + lo * (y1 - y0))
    fhi = q(x0 + hi * (x1 - x0), y0 + hi * (y1 - y0))
    den = flo - fhi
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(den != 0, lo + (hi - lo) * flo / den, 0.5 * (lo + hi))
    t = np.clip(t, lo, hi)
    return x0 + t * (x1 - x0), y0 + t * (y1 - y0)


def _assemble(adj: dict[int, list[int]]) -> list[list[int]]:
    seen: set[int] = set()
    chains = []

    def walk(start):
        chain = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [n for n in adj[cur] if n != prev and (n not in seen or (n == start and len(chain) > 2))]
            if not nxt:
                break
            n = nxt[0]
            chain.append(n)
            if n == start:
                break
            seen.add(n)
            prev, cur = cur, n
        return chain

    for node in sorted(adj):
        if node not in seen and len(adj[node]) == 1:
            chains.append(walk(node))
    for node in sorted(adj):
        if node not in seen:
            chains.append(walk(node))
    return chains


def _singular_points(q: BivarPoly, polylines, region: TraceRegion, tol: float = 1e-8):
    if not polylines or not any(len(p) for p in polylines):
        return []
    P = np.vstack([p for p in polylines if len(p)])
    qx, qy = q.dx(), q.dy()
    g = np.hypot(qx(P[:, 0], P[:, 1]), qy(P[:, 0], P[:, 1]))
    gmax = float(np.max(g)) if len(g) else 0.0
    if gmax == 0:
        return []
    order = np.argsort(g)[:20]
    order = [k for k in order if g[k] < 1e-2 * gmax]
    qxx, qxy, qyy = qx.dx(), qx.dy(), qy.dy()
    found: list[tuple[float, float]] = []
    for k in order:
        x, y = P[k]
        for _ in range(30):
            gx, gy = qx(x, y), qy(x, y)
            a, b, d = qxx(x, y), qxy(x, y), qyy(x, y)
            det = a * d - b * b
            if abs(det) < 1e-300:
                break
            dx, dy = (d * gx - b * gy) / det, (a * gy - b * gx) / det
            x, y = x - dx, y - dy
            if abs(dx) + abs(dy) < 1e-15:
                break
        if abs(q(x, y)) < tol and math.hypot(qx(x, y), qy(x, y)) < tol:
            if region.xmin - region.h <= x <= region.xmax + region.h and region.ymin - region.h <= y <= region.ymax + region.h:
                if all(math.hypot(x - u, y - v) > region.h for u, v in found):
                    found.append((float(x), float(y)))
    return found


def _split_near(polylines, centers, radius):
    out = []
    c = np.array(centers)
    for pl in polylines:
        d = np.min(np.hypot(pl[:, None, 0] - c[None, :, 0], pl[:, None, 1] - c[None, :, 1]), axis=1)
        keep = d > radius
        start = None
        for k, flag in enumerate(list(keep) + [False]):
            if flag and start is None:
                start = k
            elif not flag and start is not None:
                if k - start >= 1:
                    out.append(pl[start:k])
                start = None
    return out


def hausdorff(a: SampledCurve, b: SampledCurve) -> float:
    """Symmetric Hausdorff distance between the sample point sets."""
    pa, pb = a.points(), b.points()
    return max(directed_hausdorff(pa, pb)[0], directed_hausdorff(pb, pa)[0])


# --------------------------------------------------------- ideal boundary

def ideal_boundary_points(p: BivarPoly, model=ModelKind.HALF_PLANE, mask: Mask | None = None,
                          tol: float = 1e-12) -> list[IdealPoint]:
    """Points where the zero set of ``p`` meets the ideal boundary.

    Half-plane: real roots of p(x, 0), plus infinity when the top-degree form
    has a real direction. Disks: roots on the unit circle via the rational
    parametrization x = (1-t^2)/(1+t^2), y = 2t/(1+t^2). Candidates failing
    ``mask`` (evaluated at the boundary point) are dropped.
    """
    model = ModelKind(model)
    q = p.normalized()
    out: list[IdealPoint] = []
    if q.is_zero():
        raise GeometryError("zero polynomial vanishes everywhere")
    if model is ModelKind.HALF_PLANE:
        for x0 in real_roots(q.slice_y(0.0), tol=tol):
            if mask is None or bool(mask(np.array(x0), np.array(0.0))):
                out.append(IdealPoint(model, x0))
        top = q.top_form()
        d = top.degree
        if d > 0:
            horizontal = abs(top.coeffs[d, 0]) if top.coeffs.shape[0] > d else 0.0
            dirs = real_roots(top.slice_y(1.0), tol=tol) if top.slice_y(1.0).size > 1 else []
            if horizontal < 1e-12 or dirs:
                out.append(IdealPoint(model, math.inf))
        return out
    deg = q.degree
    one_plus = BivarPoly([[1.0, 0.0, 1.0]])  # 1 + t^2 with t in the y slot
    ux = BivarPoly([[1.0, 0.0, -1.0]])
    uy = BivarPoly([[0.0, 2.0]])
    acc = BivarPoly.const(0.0)
    for (i, j), v in q.terms().items():
        acc = acc + v * ux ** i * uy ** j * one_plus ** (deg - i - j)
    uni = acc.coeffs[0]
    for t in real_roots(uni, tol=tol):
        x0, y0 = (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)
        if mask is None or bool(mask(np.array(x0), np.array(y0))):
            out.append(IdealPoint(model, math.atan2(y0, x0)))
    if abs(q(-1.0, 0.0)) < 1e-12 and (mask is None or bool(mask(np.array(-1.0), np.array(0.0)))):
        out.append(IdealPoint(model, math.pi))
    return sorted(out, key=lambda e: e.value)


def apply_mask(curve: SampledCurve, mask: Mask) -> SampledCurve:
    """Drop points rejected by ``mask``, splitting polylines where they occur."""
    polylines, residuals = [], []
    for pl, res in zip(curve.polylines, curve.residuals):
        if not len(pl):
            continue
        keep = np.asarray(mask(pl[:, 0], pl[:, 1]), dtype=bool)
        start = None
        for k in range(len(pl) + 1):
            if k < len(pl) and keep[k]:
                if start is None:
                    start = k
            elif start is not None:
                if k - start > 1:
                    polylines.append(pl[start:k])
                    residuals.append(res[start:k])
                start = None
    return SampledCurve(curve.model, polylines, residuals, curve.h,
                        list(curve.ideal_endpoints), list(curve.singular_points))


# ------------------------------------------------------------------ audit

@dataclass
class AuditReport:
    max_residual: float
    checked: int
    rejected: int
    skipped: int

    def to_json(self) -> dict:
        return dict(max_residual=self.max_residual, checked=self.checked,
                    rejected=self.rejected, skipped=self.skipped)


def audit(curve: SampledCurve, spec, mask: Mask | None = None) -> AuditReport:
    """Evaluate the metric residual of ``spec`` on every traced point.

    Points rejected by the branch ``mask`` (spurious squaring branches) are
    counted, not checked; points on or outside the model boundary are skipped.
    """
    from .conicdefs import residual

    P = curve.points()
    if len(P) == 0:
        return AuditReport(0.0, 0, 0, 0)
    keep = np.ones(len(P), dtype=bool) if mask is None else np.asarray(mask(P[:, 0], P[:, 1]), dtype=bool)
    worst, checked, skipped = 0.0, 0, 0
    for (x, y), ok in zip(P, keep):
        if not ok:
            continue
        try:
            pt = ModelPoint(curve.model, x, y)
        except GeometryError:
            skipped += 1
            continue
        worst = max(worst, abs(residual(spec, pt)))
        checked += 1
    return AuditReport(worst, checked, int(np.count_nonzero(~keep)), skipped)
