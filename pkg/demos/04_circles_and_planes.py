"""
Oriented circles and Lagrangian planes
======================================

Oriented circles are null points of the quadric
xi^2 + eta^2 - zeta^2 - mu nu = 0. Two of them touch with matching
orientation exactly when their polar form vanishes. The same quadric
parametrises Lagrangian planes in a symplectic 4-space, and Sp(4,R) acts
on it through SO(2,3).
"""

from fractions import Fraction

import numpy as np

from cargeom import lie_sphere as ls
from cargeom import twistor as tw

unit = ls.OrientedCircle(0, 0, 1)
for other in (ls.OrientedCircle(2, 0, -1), ls.OrientedCircle(2, 0, 1), ls.OrientedCircle(1, 0, 0)):
    a, b = ls.circle_to_quadric(unit), ls.circle_to_quadric(other)
    print(f"{other}: incident={ls.incident(a, b)}, interval={ls.minkowski_interval(unit, other)}")

# %%
# The wedge square of a bivector in omega-perp is -2 Q, exactly.
v = (Fraction(1, 2), Fraction(-1, 3), 2, Fraction(5, 7), 1)
Y = tw.omega_perp_embed(*v)
print("Y ^ Y =", tw.wedge_square_coeff(Y), "  -2 Q =", -2 * tw.quadric_form(v))

# %%
# Symplectic matrices act on the quadric; A and -A act the same way.
rng = np.random.default_rng(2)
A = tw.random_symplectic(rng)
M = tw.induced_quadric_action(A)
print("Q preserved to %.1e" % tw.q_preservation_residual(M))
print("-A acts like A: %.1e" % np.max(np.abs(tw.induced_quadric_action(-A) - M)))

# %%
# Stabilisers of a plane, a line, and a line inside a plane.
plane = tw.plane_from_params(0, 0, 0)
line = np.array([0.0, 0.0, 0.0, 1.0])
print("stabiliser dimensions:", tw.stabilizer_dimension(plane), tw.stabilizer_dimension(line),
      tw.stabilizer_dimension((line, plane)))
