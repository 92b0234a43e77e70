"""The ten infinitesimal symmetries of the car split and their Lie algebra.

The bracket table of the generators is recovered numerically: for each pair
``(I, J)`` the field ``[S_I, S_J]`` is sampled at random points and fitted by
a constant combination ``sum_K c^K_IJ S_K``. The Killing form and its
signature then come from the fitted constants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .car import CHART, CarParams, car_split
from .distribution import VectorField, bracket_jets, is_infinitesimal_symmetry, numerical_rank
from .errors import ClosureError, PreconditionError, RankDeficientError

DIM = 10


def _generator_components(L):
    # (x, y, alpha, beta) components; L is the wheelbase as text
    sx, cx = "sin(alpha)", "cos(alpha)"
    return [
        (1, 0, 0, 0),
        (0, 1, 0, 0),
        ("-y", "x", 1, 0),
        (f"{L}*{sx}", f"-{L}*{cx}", 0, "sin(beta)^2"),
        ("x", "y", 0, "-sin(beta)*cos(beta)"),
        (
            "x^2 - y^2",
            "2*x*y",
            "2*y",
            f"-2*cos(beta)*({L}*cos(beta)*{sx} + x*sin(beta))",
        ),
        (
            f"{L}*x*{sx}",
            f"-{L}*x*{cx}",
            f"-{L}*{cx}",
            f"sin(beta)*({L}*cos(beta)*{sx} + x*sin(beta))",
        ),
        (
            f"{L}*y*{sx}",
            f"-{L}*y*{cx}",
            f"-{L}*{sx}",
            f"-sin(beta)*({L}*cos(beta)*{cx} - y*sin(beta))",
        ),
        (
            "2*x*y",
            "y^2 - x^2",
            "-2*x",
            f"2*cos(beta)*({L}*cos(beta)*{cx} - y*sin(beta))",
        ),
        (
            f"{L}*(x^2 + y^2)*{sx}",
            f"-{L}*(x^2 + y^2)*{cx}",
            f"-2*{L}*(x*{cx} + y*{sx})",
            f"2*{L}*sin(beta)*cos(beta)*(x*{sx} - y*{cx}) + sin(beta)^2*(x^2 + y^2)"
            f" + 2*{L}^2*cos(beta)^2",
        ),
    ]


@dataclass(frozen=True)
class GeneratorSet:
    """``S1..S10``; indexing is 0-based (``gen[0]`` is S1)."""

    fields: tuple
    params: CarParams

    def __len__(self):
        return len(self.fields)

    def __getitem__(self, i):
        return self.fields[i]

    def __iter__(self):
        return iter(self.fields)

    def names(self):
        return [f"S{i + 1}" for i in range(len(self.fields))]

    def replaced(self, i, field):
        f = list(self.fields)
        f[i] = field
        return GeneratorSet(tuple(f), self.params)

    def values(self, point):
        """10x4 array of generator values at ``point``."""
        return np.array([S(point) for S in self.fields])


def generators(params=CarParams()):
    L = f"({float(params.length)!r})"
    comps = _generator_components(L)
    return GeneratorSet(tuple(VectorField.from_components(CHART, c) for c in comps), params)


def random_configs(rng, n, box=2.0):
    """``n`` points with ``x, y`` in ``[-box, box]`` and angles in ``[-pi, pi)``."""
    xy = rng.uniform(-box, box, size=(n, 2))
    ang = rng.uniform(-np.pi, np.pi, size=(n, 2))
    return np.hstack([xy, ang])


@dataclass
class SymmetryCheck:
    passed: bool
    residuals: dict  # generator name -> max residual

    def __bool__(self):
        return self.passed


def verify_all_symmetries(gen, samples, tol=1e-9):
    D = car_split(gen.params)
    residuals = {}
    passed = True
    for name, S in zip(gen.names(), gen):
        rep = is_infinitesimal_symmetry(S, D, samples, tol)
        residuals[name] = rep.max_residual
        passed &= rep.passed
    return SymmetryCheck(bool(passed), residuals)


# -- structure constants -------------------------------------------------------------


@dataclass
class StructureConstants:
    """``c[I, J, K]`` is the coefficient of basis element ``K`` in ``[e_I, e_J]`` (0-based)."""

    c: np.ndarray
    residual: float = 0.0

    @property
    def dim(self):
        return self.c.shape[0]

    def bracket(self, u, v):
        return np.einsum("i,j,ijk->k", u, v, self.c)

    def ad(self, i):
        """Matrix of ``ad(e_i)``: column ``l`` is ``[e_i, e_l]``."""
        return self.c[i].T

    def antisymmetry_residual(self):
        return float(np.max(np.abs(self.c + self.c.transpose(1, 0, 2)), initial=0.0))

    def jacobi_residual(self):
        """max over basis triples of ``|[[a,b],c] + [[b,c],a] + [[c,a],b]|``."""
        c = self.c
        # [[e_i, e_j], e_k] = c_ij^m c_mk^n
        t = np.einsum("ijm,mkn->ijkn", c, c)
        cyc = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
        return float(np.max(np.abs(cyc), initial=0.0))

    def derived_dimension(self, rtol=1e-8):
        """Dimension of the span of all brackets ``[e_i, e_j]``."""
        n = self.dim
        rows = [self.c[i, j] for i in range(n) for j in range(i + 1, n)]
        if not rows or not np.any(rows):
            return 0
        return numerical_rank(rows, rtol)

    def is_perfect(self, rtol=1e-8):
        return self.derived_dimension(rtol) == self.dim


def _bracket_values(A, B, points):
    out = []
    for pt in points:
        out.append([j.value for j in bracket_jets(A.jets(pt, 1), B.jets(pt, 1))])
    return np.array(out)


def extract_structure_constants(gen, sample_points, tol=1e-8, holdout=10):
    """Fit ``[S_I, S_J] = sum_K c^K_IJ S_K`` by least squares.

    The first ``len(sample_points) - holdout`` points are used for the fit
    (at least 20 are required) and the last ``holdout`` points validate it.
    ``residual`` is the largest held-out misfit relative to the size of the
    bracket values.
    """
    pts = np.asarray(sample_points, dtype=float)
    n_fit = len(pts) - holdout
    if n_fit < 20 or holdout < 1:
        raise PreconditionError(f"need >= 20 fit points plus {holdout} held out, got {len(pts)}")
    fit_pts, val_pts = pts[:n_fit], pts[n_fit:]
    n = len(gen)

    def design(points):
        vals = np.array([gen.values(p) for p in points])  # (npts, n, 4)
        return vals.transpose(0, 2, 1).reshape(-1, n)

    A_fit, A_val = design(fit_pts), design(val_pts)
    if numerical_rank(A_fit) < n:
        raise RankDeficientError("generator samples do not have full column rank")

    c = np.zeros((n, n, n))
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            b_fit = _bracket_values(gen[i], gen[j], fit_pts).ravel()
            b_val = _bracket_values(gen[i], gen[j], val_pts).ravel()
            coef = np.linalg.lstsq(A_fit, b_fit, rcond=None)[0]
            scale = max(1.0, np.max(np.abs(b_val)))
            res = float(np.max(np.abs(A_val @ coef - b_val)) / scale)
            worst = max(worst, res)
            if res > tol:
                raise ClosureError(
                    f"[{gen.names()[i]}, {gen.names()[j]}] is not a constant combination (residual {res:.3g})"
                )
            c[i, j] = coef
            c[j, i] = -coef
    return StructureConstants(c, worst)


# -- Killing form ----------------------------------------------------------------------


def signature(sym, rtol=1e-8):
    """``(n_plus, n_minus, n_zero)`` of a real symmetric matrix."""
    ev = np.linalg.eigvalsh(np.asarray(sym, dtype=float))
    top = np.max(np.abs(ev), initial=0.0)
    if top == 0.0:
        return (0, 0, len(ev))
    thr = rtol * top
    return (int(np.sum(ev > thr)), int(np.sum(ev < -thr)), int(np.sum(np.abs(ev) <= thr)))


@dataclass
class KillingForm:
    matrix: np.ndarray
    signature: tuple

    @property
    def nondegenerate(self):
        return self.signature[2] == 0

    def invariance_residual(self, sc):
        """max |K([x, y], z) + K(y, [x, z])| over basis triples."""
        K = self.matrix
        # K([e_i,e_j], e_k) = c_ij^m K_mk
        t = np.einsum("ijm,mk->ijk", sc.c, K)
        return float(np.max(np.abs(t + t.transpose(0, 2, 1)), initial=0.0))


def killing_form(sc, rtol=1e-8):
    """``K_IJ = c^K_IL c^L_JK = tr(ad e_I ad e_J)``."""
    K = np.einsum("ilk,jkl->ij", sc.c, sc.c)
    K = 0.5 * (K + K.T)
    return KillingForm(K, signature(K, rtol))
