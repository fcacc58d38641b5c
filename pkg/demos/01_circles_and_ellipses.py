"""Metric circles and ellipses in the upper half-plane.

Run with ``python demos/01_circles_and_ellipses.py``. Each cell prints what
it computes; nothing is written to disk.
"""

# %% A metric circle is a Euclidean circle with a shifted center
import math

import numpy as np

from hypconics import conicdefs as cd
from hypconics.hypgeo import ModelKind, ModelPoint, metric_circle_to_euclidean
from hypconics.implicit import (
      TraceRegion,
      apply_mask,
      audit,
      ideal_boundary_points,
      trace,
)

i = ModelPoint(ModelKind.HALF_PLANE, 0.0, 1.0)
circ = metric_circle_to_euclidean(i, math.log(2))
print("metric circle about i of radius log 2:")
print(f"  Euclidean center {circ.center}, radius {circ.radius}")

# %% The sinh focus/directrix curve with a far directrix is close to a circle but is not one
region = TraceRegion(ModelKind.HALF_PLANE, -2, 2, 0, 2, 1 / 256)
curve = trace(cd.fd_circle_limit_poly(0.25).poly, region)
dev_i, _, rad = cd.metric_circle_fit_floor(curve.points(), center=1j)
dev_any, center, _ = cd.metric_circle_fit_floor(curve.points())
print("\n|z^2 + 1| = 1/2 traced with", len(curve.points()), "points")
print(f"  best metric circle about i: radius {rad:.4f}, max deviation {dev_i:.4f}")
print(f"  best metric circle anywhere: center {center:.4f}, max deviation {dev_any:.4f}")

# %% A closed focus/directrix ellipse that is also a two-focus ellipse
r, eps = math.sqrt(11 / 19), math.sqrt(209) / 21
print(f"\nfocus i, directrix |z| = {r:.4f}, eps = {eps:.4f}: {cd.classify_fd(r, eps).value}")
print("  axis intercepts:", cd.axis_intercepts(cd.fd_spec(r, eps)))
b, c = cd.match_closed_fd_ellipse_to_two_focus(r, eps)
print(f"  two-focus form: second focus {b:.6f} i, c = {c:.6f} (log 2.5 = {math.log(2.5):.6f})")
fd = cd.focus_directrix_poly(r, eps).poly
tf = cd.two_focus_ellipse_poly(b, c).poly
print(f"  coefficient distance between the two quartics: {fd.coefficient_distance(tf):.1e}")
print("  two-focus quartic, scaled so x^4 has coefficient 20:")
terms = (tf * (20 / tf.coeffs[4, 0])).chop(1e-12).terms()
print("   ", {k: round(v, 9) for k, v in sorted(terms.items())})

# %% An open focus/directrix ellipse reaches the ideal boundary
cp = cd.focus_directrix_poly(3.0, 0.5)
ideal = [p.value for p in ideal_boundary_points(cp.poly, mask=cp.mask)]
print(f"\nfocus i, directrix |z| = 3, eps = 1/2: {cd.classify_fd(3.0, 0.5).value}")
print(f"  ideal points {np.round(ideal, 12)} (sqrt(3/7) = {math.sqrt(3 / 7):.12f})")
pts = trace(cp.poly, TraceRegion(h=1 / 64)).points()
floor, fb, fc = cd.two_focus_fit_floor(pts)
print(f"  best two-focus ellipse fit leaves a max error of {floor:.3f} (b = {fb:.3f}, c = {fc:.3f})")

# %% The traced polynomial really is the metric locus
spec = cd.fd_spec(2.0, 0.25)
cp = cd.focus_directrix_poly(2.0, 0.25)
rep = audit(apply_mask(trace(cp.poly, TraceRegion(h=1 / 128)), cp.mask), spec)
print(f"\nfocus/directrix ellipse r = 2, eps = 1/4: {rep.checked} traced points, "
      f"max |sinh d1 - eps sinh d2| = {rep.max_residual:.1e}")
