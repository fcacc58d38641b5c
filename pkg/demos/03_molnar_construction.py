"""The reflection construction of a conic in the Klein disk.

Run with ``python demos/03_molnar_construction.py``.
"""

# %% Build the conic from two foci and a line
import numpy as np

from hypconics import projmink as pm

A, B = pm.ProjPoint.chart(0.0, 0.0), pm.ProjPoint.chart(0.5, 0.0)
x1 = pm.ProjLine.chart(0.0, 1.0, -0.5)          # the line y = 1/2
res = pm.molnar_conic(A, B, x1, 200)
fit = pm.fit_conic(res.points)
print(f"{len(res.points)} constructed points, X11 = {res.x11.affine()}")
print(f"conic fit residual {fit.max_residual:.1e}, type {fit.classify()}")
Q = fit.matrix / np.max(np.abs(fit.matrix))
print("quadratic form (max-abs normalized):\n", np.round(Q, 6))

# %% The construction commutes with hyperbolic reflections
rng = np.random.default_rng(3)
phi = rng.uniform(0, 2 * np.pi)
mirror = pm.ProjLine.chart(np.cos(phi), np.sin(phi), -rng.uniform(-0.8, 0.8))
moved = [pm.reflect_across_line(v, mirror) for v in (A, B, x1)]
fit2 = pm.fit_conic(pm.molnar_conic(*moved, 200).points)
print("\nafter reflecting the foci and the line:")
print("  Minkowski spectrum before", np.round(np.real(pm.minkowski_spectrum(fit.matrix)), 9))
print("  Minkowski spectrum after ", np.round(np.real(pm.minkowski_spectrum(fit2.matrix)), 9))
print("  congruent:", pm.congruent(fit.matrix, fit2.matrix, 1e-7))
