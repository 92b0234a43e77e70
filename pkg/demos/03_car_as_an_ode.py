"""
The car as the ODE y''' = 3 p q^2 / (1 + p^2)
=============================================

With p = tan(alpha) and q = -tan(beta) sec(alpha)^3 / l the rear wheel
traces graphs y(x) of this third-order ODE. Both of its contact
invariants vanish, which makes it locally equivalent to y''' = 0.
Its solutions are circles, so every solution is a point on the Lie quadric.
"""

import numpy as np

from cargeom import lie_sphere as ls
from cargeom.ode import (
    car_ode,
    chart_car_to_jet,
    chern_invariant,
    contact_coframe,
    geodesic_vs_solution,
    normalize_car_coframe,
    solve_ode,
    wunschmann,
)

F = car_ode()
pts = np.random.default_rng(1).uniform(-2, 2, size=(5, 4))
print("Wunschmann:", [f"{wunschmann(F, p):.1e}" for p in pts])
print("Chern:     ", [f"{chern_invariant(F, p):.1e}" for p in pts])
print("for comparison, Wunschmann of y''' = y is", wunschmann("y", pts[0]))

# %%
# The car coframe, normalised, is the contact coframe of the ODE.
config = (0.2, -0.4, 0.5, 0.3)
diff = normalize_car_coframe(config) - contact_coframe(chart_car_to_jet(config))
print("coframe mismatch: %.1e" % np.max(np.abs(diff)))

# %%
# A solution arc, fitted with a cycle nu (x^2+y^2) - 2 xi x - 2 eta y + mu = 0.
curve = solve_ode(F, (0.0, 0.0, 0.2, 0.5), 1.0, 1000)
fit = ls.fit_cycle(curve[:, :2])
cycle = ls.solution_to_cycle(*fit.coefficients())
print("fit residual %.1e; circle %s" % (fit.residual, ls.quadric_to_circle(cycle)))

# %%
# Geodesics of the gauge-fixed contact projective connection project to solutions.
print("geodesic vs solution: %.1e" % geodesic_vs_solution(F, (0.0, 0.0, 0.2, 0.2)))
