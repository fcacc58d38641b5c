"""Parabolas and hyperbolas: where the two-focus and focus/directrix
definitions agree and where they part ways.

Run with ``python demos/02_parabolas_and_hyperbolas.py``.
"""

# %% Two kinds of parabola
import math

from hypconics import conicdefs as cd
from hypconics.cli import main

print("value at the ideal point 0 (the origin of the half-plane):")
for r in (0.5, 2.0, 3.0):
    print(f"  focus/directrix parabola, directrix |z| = {r}: {cd.fd_parabola_poly(r).poly(0.0, 0.0):+.4f}")
for C in (3.0, 4.0, 8.0):
    print(f"  two-focus parabola, C = {C}: {cd.two_focus_parabola_poly(C).poly(0.0, 0.0):+.4f}")

print("\nvertices on the imaginary axis:")
for r in (0.5, 2.0):
    print(f"  fd parabola r = {r}: {cd.axis_intercepts(cd.fd_spec(r, 1.0))}, sqrt(r) = {math.sqrt(r):.12f}")
print(f"  two-focus parabola C = 4: {cd.axis_intercepts(cd.two_focus_parabola_spec(4.0))}, sqrt 2 = {math.sqrt(2):.12f}")

# %% Every two-focus hyperbola is a focus/directrix hyperbola
b, c = 2.0, math.log(1.5)
r, eps = cd.match_two_focus_hyperbola_to_fd(b, c)
print(f"\nfoci i and 2i, c = log 1.5 -> directrix |z| = {r:.12f}, eps = {eps:.12f}")
print(f"  sqrt(11/7) = {math.sqrt(11 / 7):.12f}, sqrt(77)/5 = {math.sqrt(77) / 5:.12f}")
tf = cd.two_focus_hyperbola_poly(b, c).poly
fd = cd.focus_directrix_poly(r, eps).poly
print(f"  coefficient distance between the quartics: {tf.coefficient_distance(fd):.1e}")
print("  vertices:", cd.axis_intercepts(cd.two_focus_spec(b, c, "hyperbola")))

# %% but not the other way round
print(f"\nfocus i, directrix |z| = 2, eps = 2: {cd.classify_fd(2.0, 2.0).value}")
print("  single vertex:", cd.axis_intercepts(cd.fd_spec(2.0, 2.0)), f"sqrt(5/2) = {math.sqrt(2.5):.12f}")
print("  the command line reports the missing match with exit code 3:")
code = main(["match", "--from", "fd", "--r", "2", "--eps", "2"])
print("  exit code", code)
