"""Figure reproduction: traced curves written as CSV and as minimal SVG.

Each figure is a list of named curves plus decorations (foci, directrices,
reference circles) drawn over the model boundary.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import conicdefs as cd
from . import projmink as pm
from .hypgeo import EuclideanCircle, ModelKind, euclidean_circle_to_metric
from .implicit import BivarPoly, SampledCurve, TraceRegion, apply_mask, trace
from .verify import FIG1

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#bcbd22"]


@dataclass
class Figure:
    fid: int
    title: str
    model: ModelKind
    box: tuple[float, float, float, float]
    curves: list[tuple[str, SampledCurve]] = field(default_factory=list)
    markers: list[tuple[str, float, float]] = field(default_factory=list)
    circles: list[tuple[str, EuclideanCircle]] = field(default_factory=list)   # dashed references
    segments: list[tuple[str, tuple[float, float], tuple[float, float]]] = field(default_factory=list)
    dots: list[tuple[float, float]] = field(default_factory=list)
    params: dict = field(default_factory=dict)

    def add(self, name: str, cpoly: cd.ConicPoly, h: float = 1 / 256) -> SampledCurve:
        xmin, xmax, ymin, ymax = self.box
        region = TraceRegion(self.model if self.model is ModelKind.HALF_PLANE else None,
                             xmin, xmax, ymin, ymax, h)
        curve = apply_mask(trace(cpoly.poly, region), cpoly.mask)
        self.curves.append((name, curve))
        return curve

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["curve", "x", "y", "residual"])
        first = True
        for name, curve in self.curves:
            for pl, res in zip(curve.polylines, curve.residuals):
                if not first:
                    buf.write("\n")
                first = False
                for (x, y), r in zip(pl, res):
                    w.writerow([name, repr(float(x)), repr(float(y)), repr(float(r))])
        for k, (x, y) in enumerate(self.dots):
            if k == 0 and not first:
                buf.write("\n")
            w.writerow(["construction_points", repr(float(x)), repr(float(y)), "0.0"])
        return buf.getvalue()

    def to_svg(self, width: int = 800) -> str:
        xmin, xmax, ymin, ymax = self.box
        scale = width / (xmax - xmin)
        height = int(round((ymax - ymin) * scale))

        def px(x, y):
            return (x - xmin) * scale, height - (y - ymin) * scale

        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
               f'viewBox="0 0 {width} {height}">',
               f"<title>{self.title}</title>",
               '<rect width="100%" height="100%" fill="white"/>']
        if self.model is ModelKind.HALF_PLANE:
            _, y0 = px(0, 0)
            out.append(f'<line x1="0" y1="{y0:.2f}" x2="{width}" y2="{y0:.2f}" stroke="gray"/>')
        else:
            cx, cy = px(0, 0)
            out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{scale:.2f}" fill="none" stroke="gray"/>')
        for label, circ in self.circles:
            cx, cy = px(circ.center.real, circ.center.imag)
            out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{circ.radius * scale:.2f}" fill="none" '
                       f'stroke="black" stroke-dasharray="6,4"><title>{label}</title></circle>')
        for label, a, b in self.segments:
            (x1, y1), (x2, y2) = px(*a), px(*b)
            out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="orange" '
                       f'stroke-dasharray="6,4"><title>{label}</title></line>')
        for k, (name, curve) in enumerate(self.curves):
            color = PALETTE[k % len(PALETTE)]
            for pl in curve.polylines:
                pts = " ".join("{:.2f},{:.2f}".format(*px(x, y)) for x, y in pl)
                out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5">'
                           f"<title>{name}</title></polyline>")
        for x, y in self.dots:
            cx, cy = px(x, y)
            out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="1.5" fill="black"/>')
        for label, x, y in self.markers:
            cx, cy = px(x, y)
            out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3" fill="black"/>')
            out.append(f'<text x="{cx + 5:.2f}" y="{cy - 5:.2f}" font-size="12">{label}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def write(self, out_dir) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        svg, csv_path = out / f"figure{self.fid}.svg", out / f"figure{self.fid}.csv"
        svg.write_text(self.to_svg())
        csv_path.write_text(self.to_csv())
        return svg, csv_path


HP_BOX = (-4.0, 4.0, 0.0, 4.0)


def _semicircle(label: str, r: float) -> tuple[str, EuclideanCircle]:
    return label, EuclideanCircle(0j, r)


def figure1() -> Figure:
    """Molnar's construction, A = (0, 0), B = (.5, 0), x1 = {y = .5}, Klein disk."""
    fig = Figure(1, "Molnar construction of a conic", ModelKind.KLEIN, (-1.05, 1.05, -1.05, 1.05),
                 params={"A": [0.0, 0.0], "B": [0.5, 0.0], "x1": "y = 0.5", "samples": 200})
    res = pm.molnar_conic(FIG1["A"], FIG1["B"], FIG1["x1"], 200)
    fit = pm.fit_conic(res.points)
    Q = fit.matrix
    X, Y = BivarPoly.x(), BivarPoly.y()
    poly = (Q[0, 0] * X * X + 2 * Q[0, 1] * X * Y + Q[1, 1] * Y * Y + 2 * Q[0, 2] * X
            + 2 * Q[1, 2] * Y + Q[2, 2])
    inside = lambda x, y: np.asarray(x) ** 2 + np.asarray(y) ** 2 < 1
    fig.add("fitted_conic", cd.ConicPoly(poly, inside), h=1 / 256)
    for p in res.points:
        a = p.affine()
        if a is not None and abs(a[0]) < 1.05 and abs(a[1]) < 1.05:
            fig.dots.append(a)
    fig.markers += [("A", 0.0, 0.0), ("B", 0.5, 0.0), ("X11", *res.x11.affine())]
    half = math.sqrt(1 - 0.25)
    fig.segments.append(("x1", (-half, 0.5), (half, 0.5)))
    fig.params.update(points=len(res.points), fit_residual=fit.max_residual)
    return fig


def figure2() -> Figure:
    """Circle-limit curve |z^2 + 1| = 2r, r = .25, with the tangent metric circle."""
    fig = Figure(2, "focus i and r = .25", ModelKind.HALF_PLANE, (-2.0, 2.0, 0.0, 2.0), params={"r": 0.25})
    fig.add("circle_limit_r0.25", cd.fd_circle_limit_poly(0.25))
    lo, hi = math.sqrt(0.5), math.sqrt(1.5)
    circ = EuclideanCircle(1j * (lo + hi) / 2, (hi - lo) / 2)
    center, radius = euclidean_circle_to_metric(circ, ModelKind.HALF_PLANE)
    fig.circles.append((f"metric circle center {center.y:.6f}i radius {radius:.6f}", circ))
    fig.markers.append(("i", 0.0, 1.0))
    fig.params.update(tangent_circle_center=center.y, tangent_circle_radius=radius)
    return fig


def figure3(cs=(0.5, 1.0, 1.5, 2.0)) -> Figure:
    """Two-focus ellipses with foci i and 3i/4."""
    fig = Figure(3, "two-focus ellipses, foci i and 3i/4", ModelKind.HALF_PLANE, HP_BOX,
                 params={"b": 0.75, "c": list(cs)})
    for c in cs:
        fig.add(f"two_focus_b0.75_c{c:g}", cd.two_focus_ellipse_poly(0.75, c))
    fig.markers += [("i", 0.0, 1.0), ("3i/4", 0.0, 0.75)]
    return fig


def figure4(eps=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)) -> Figure:
    """Focus/directrix ellipses, focus i, directrix |z| = 2."""
    fig = Figure(4, "focus/directrix ellipses, directrix |z|=2", ModelKind.HALF_PLANE, HP_BOX,
                 params={"r": 2.0, "eps": list(eps)})
    for e in eps:
        fig.add(f"fd_r2_eps{e:g}", cd.focus_directrix_poly(2.0, e))
    fig.circles.append(_semicircle("directrix |z|=2", 2.0))
    fig.markers.append(("i", 0.0, 1.0))
    return fig


def figure5(rs=(0.25, 0.5, 0.75, 1.5, 2.0, 3.0)) -> Figure:
    """Focus/directrix parabolas, focus i, directrix |z| = r."""
    fig = Figure(5, "focus/directrix parabolas, directrix |z|=r", ModelKind.HALF_PLANE, HP_BOX,
                 params={"eps": 1.0, "r": list(rs)})
    for r in rs:
        fig.add(f"fd_parabola_r{r:g}", cd.fd_parabola_poly(r))
        fig.circles.append(_semicircle(f"directrix |z|={r:g}", r))
    fig.markers.append(("i", 0.0, 1.0))
    return fig


def figure6() -> Figure:
    """Two-focus hyperbola, foci i and 2i, c = log(3/2)."""
    c = math.log(1.5)
    fig = Figure(6, "hyperbola, foci i and 2i, c = log(3/2)", ModelKind.HALF_PLANE, HP_BOX,
                 params={"b": 2.0, "c": c})
    fig.add("two_focus_hyperbola_b2", cd.two_focus_hyperbola_poly(2.0, c))
    fig.markers += [("i", 0.0, 1.0), ("2i", 0.0, 2.0)]
    return fig


FIGURES = {1: figure1, 2: figure2, 3: figure3, 4: figure4, 5: figure5, 6: figure6}


def build(fid: int) -> Figure:
    if fid not in FIGURES:
        raise KeyError(fid)
    return FIGURES[fid]()
