"""
Ten symmetries of the car
=========================

The vector fields S1..S10 preserve the steering line and the gas line
separately. Their brackets close up into a 10-dimensional Lie algebra,
and its Killing form has the same signature as that of sp(2,R).
"""

import numpy as np

from cargeom import sp2r
from cargeom.symmetries import (
    extract_structure_constants,
    generators,
    killing_form,
    random_configs,
    verify_all_symmetries,
)

rng = np.random.default_rng(0)
gen = generators()

check = verify_all_symmetries(gen, random_configs(rng, 50))
for name, res in check.residuals.items():
    print(f"{name:>4s}: parallelism residual {res:.1e}")

# %%
# Structure constants from a least-squares fit over sample points,
# validated on points that were held out of the fit.
sc = extract_structure_constants(gen, random_configs(rng, 40))
print("held-out residual: %.1e" % sc.residual)
print("[S1, S3] =", np.round(sc.c[0, 2], 12))
print("Jacobi residual: %.1e" % sc.jacobi_residual())

K = killing_form(sc)
print("Killing signature of the car symmetries:", K.signature)
print("Killing signature of sp(2,R), exact:     ", sp2r.killing_signature())

# %%
# Inside sp(2,R) itself: the gradation and the three parabolic subalgebras.
print("grade dimensions:", sp2r.verify_gradation().dimensions)
for p in ("p1", "p2", "p12"):
    orth = sp2r.killing_orthogonal(sp2r.Subalgebra.named(p))
    print(f"{p}: Killing-orthogonal complement spans E{orth.indices()}")
