"""Bivectors of the symplectic space (R^4, omega = e^1^e^4 + e^2^e^3).

The 5-dimensional space of bivectors ``Y`` with ``Y -| omega = 0`` is
parametrised by ``(xi, eta, zeta, mu, nu)``; ``Y ^ Y = -2 Q(xi, ..., nu)``
times the volume form, so the simple elements (Lagrangian planes) are exactly
the points of the Lie quadric. Symplectic matrices act on this space through
``Y -> A Y A^T`` and preserve ``Q``.

Bivectors are stored as antisymmetric 4x4 arrays ``Y[m, n] = Y^{mn}`` with
``Y = 1/2 Y^{mn} e_m ^ e_n`` (0-based in code, 1-based in docstrings).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import expm

from . import sp2r
from .errors import DegenerateError, NotSymplecticError

OMEGA = np.array(sp2r.OMEGA.tolist(), dtype=float)
SYMPLECTIC_TOL = 1e-12
KERNEL_RTOL = 1e-8

# the quadratic form Q as a symmetric matrix in (xi, eta, zeta, mu, nu)
Q_MATRIX = np.array(
    [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, -0.5],
        [0.0, 0.0, 0.0, -0.5, 0.0],
    ]
)


def _basis_float():
    return [np.array(E.tolist(), dtype=float) for E in sp2r.basis()]


def _exact(*values):
    return any(isinstance(v, (Fraction, int)) and not isinstance(v, bool) for v in values) and all(
        isinstance(v, (Fraction, int)) for v in values
    )


def wedge(u, v):
    """Bivector ``u ^ v``: ``Y^{mn} = u^m v^n - v^m u^n``."""
    u, v = np.asarray(u), np.asarray(v)
    return np.outer(u, v) - np.outer(v, u)


def omega_perp_embed(xi, eta, zeta, mu, nu):
    """``(eta+zeta) e1^e2 + mu e1^e3 + nu e4^e2 + (eta-zeta) e4^e3 + xi (e1^e4 - e2^e3)``.

    Exact (object-dtype) when all inputs are ints or Fractions.
    """
    dtype = object if _exact(xi, eta, zeta, mu, nu) else float
    Y = np.zeros((4, 4), dtype=dtype)
    if dtype is object:
        Y[:] = 0
    entries = {
        (0, 1): eta + zeta,
        (0, 2): mu,
        (1, 3): -nu,
        (2, 3): -(eta - zeta),
        (0, 3): xi,
        (1, 2): -xi,
    }
    for (m, n), val in entries.items():
        Y[m, n] = val
        Y[n, m] = -val
    return Y


def bivector_coordinates(Y):
    """``(xi, eta, zeta, mu, nu)`` of an element of omega-perp."""
    return (
        Y[0, 3],
        (Y[0, 1] - Y[2, 3]) / 2,
        (Y[0, 1] + Y[2, 3]) / 2,
        Y[0, 2],
        -Y[1, 3],
    )


def contract_omega(Y):
    """``omega_{mn} Y^{mn}`` (zero exactly on omega-perp)."""
    return sum(OMEGA[m, n] * Y[m, n] for m in range(4) for n in range(4) if OMEGA[m, n] != 0)


def quadric_form(v):
    xi, eta, zeta, mu, nu = v
    return xi * xi + eta * eta - zeta * zeta - mu * nu


def wedge_coeff(Y, Z):
    """Coefficient of ``e1^e2^e3^e4`` in ``Y ^ Z``."""
    return (
        Y[0, 1] * Z[2, 3]
        + Y[2, 3] * Z[0, 1]
        - Y[0, 2] * Z[1, 3]
        - Y[1, 3] * Z[0, 2]
        + Y[0, 3] * Z[1, 2]
        + Y[1, 2] * Z[0, 3]
    )


def wedge_square_coeff(Y):
    """Coefficient of ``e1^e2^e3^e4`` in ``Y ^ Y``: ``2 (Y12 Y34 - Y13 Y24 + Y14 Y23)``."""
    return wedge_coeff(Y, Y)


def wedge4(a, b, c, d):
    """Coefficient of ``e1^e2^e3^e4`` in ``a ^ b ^ c ^ d``."""
    return float(np.linalg.det(np.array([a, b, c, d], dtype=float)))


def is_simple(Y, tol=1e-12):
    scale = np.max(np.abs(np.asarray(Y, dtype=float)))
    if scale == 0:
        raise DegenerateError("zero bivector")
    return abs(float(wedge_square_coeff(np.asarray(Y, dtype=float) / scale))) <= tol


def symplectic_form(u, v):
    return float(np.asarray(u, dtype=float) @ OMEGA @ np.asarray(v, dtype=float))


def identity_i2_residual():
    """``max |omega_[mn omega_rs] - eps_mnrs / 3|`` over all index quadruples (exact)."""
    om = [[Fraction(int(x)) for x in row] for row in sp2r.OMEGA.tolist()]

    def parity(perm):
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
        return -1 if inv % 2 else 1

    worst = Fraction(0)
    for idx in itertools.product(range(4), repeat=4):
        total = Fraction(0)
        for perm in itertools.permutations(range(4)):
            a, b, c, d = (idx[p] for p in perm)
            total += parity(perm) * om[a][b] * om[c][d]
        anti = total / 24
        eps = parity(idx) if len(set(idx)) == 4 else 0
        worst = max(worst, abs(anti - Fraction(eps, 3)))
    return worst


# -- Lagrangian planes and lines ----------------------------------------------------


@dataclass(frozen=True)
class LagrangianPlane:
    Y1: tuple
    Y2: tuple

    def __post_init__(self):
        u, v = np.asarray(self.Y1, dtype=float), np.asarray(self.Y2, dtype=float)
        if np.linalg.matrix_rank(np.array([u, v])) < 2:
            raise DegenerateError("spanning vectors are dependent")
        scale = np.linalg.norm(u) * np.linalg.norm(v)
        if abs(symplectic_form(u, v)) > 1e-12 * scale:
            raise DegenerateError("plane is not Lagrangian")

    @property
    def bivector(self):
        return wedge(np.asarray(self.Y1, dtype=float), np.asarray(self.Y2, dtype=float))

    def basis(self):
        return np.array([self.Y1, self.Y2], dtype=float)


def plane_from_params(xi, eta, zeta):
    """``Y1 = (eta+zeta) e1 + e4 + xi e3``, ``Y2 = -xi e1 + e2 + (eta-zeta) e3``."""
    return LagrangianPlane((eta + zeta, 0.0, xi, 1.0), (-xi, 1.0, eta - zeta, 0.0))


def planes_intersect_in_line(P1, P2, tol=1e-12):
    """Two distinct Lagrangian planes meet in a line iff the 4-form ``Y1 ^ Y2 ^ Y1' ^ Y2'`` vanishes.

    Equal planes also pass. The spanning vectors are normalised before the test.
    """
    vecs = [v / np.linalg.norm(v) for v in (*P1.basis(), *P2.basis())]
    return abs(wedge4(*vecs)) <= tol


def line_in_plane(v, P, tol=1e-12):
    """All 3x3 minors of ``[v; Y1; Y2]`` (the components of ``v ^ Y1 ^ Y2``) vanish."""
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        raise DegenerateError("zero vector spans no line")
    rows = np.array([v / np.linalg.norm(v), *(w / np.linalg.norm(w) for w in P.basis())])
    for cols in itertools.combinations(range(4), 3):
        if abs(np.linalg.det(rows[:, cols])) > tol:
            return False
    return True


def lines_in_plane_dimension(P):
    """Dimension of ``{v : v ^ Y1 ^ Y2 = 0}`` (should be 2)."""
    Y1, Y2 = P.basis()
    # v -> components of v^Y1^Y2 is linear in v; build its matrix column by column
    cols = []
    for k in range(4):
        e = np.zeros(4)
        e[k] = 1.0
        rows = np.array([e, Y1, Y2])
        cols.append([np.linalg.det(rows[:, c]) for c in itertools.combinations(range(4), 3)])
    M = np.array(cols).T
    s = np.linalg.svd(M, compute_uv=False)
    rank = int(np.sum(s > KERNEL_RTOL * s[0])) if s[0] > 0 else 0
    return 4 - rank


# -- symplectic group action --------------------------------------------------------


def check_symplectic(A, tol=SYMPLECTIC_TOL):
    """Raise :class:`NotSymplecticError` unless ``A^T Omega A = Omega`` (tolerance scaled by ``|A|^2``)."""
    A = np.asarray(A, dtype=float)
    if A.shape != (4, 4):
        raise NotSymplecticError("expected a 4x4 matrix")
    err = np.max(np.abs(A.T @ OMEGA @ A - OMEGA))
    if err > tol * max(1.0, np.max(np.abs(A)) ** 2):
        raise NotSymplecticError(f"A^T Omega A differs from Omega by {err:.3g}")
    return A


def random_algebra_element(rng, scale=0.5):
    return sum(c * E for c, E in zip(rng.normal(0.0, scale, size=10), _basis_float()))


def random_symplectic(rng, scale=0.5):
    """``expm`` of a random element of sp(2,R)."""
    return expm(random_algebra_element(rng, scale))


def induced_quadric_action(A):
    """5x5 matrix of ``Y -> A Y A^T`` on omega-perp in ``(xi, eta, zeta, mu, nu)`` coordinates."""
    A = check_symplectic(A)
    M = np.empty((5, 5))
    for k in range(5):
        e = np.zeros(5)
        e[k] = 1.0
        M[:, k] = bivector_coordinates(A @ omega_perp_embed(*e) @ A.T)
    return M


def q_preservation_residual(M):
    return float(np.max(np.abs(M.T @ Q_MATRIX @ M - Q_MATRIX)))


# -- stabilizers --------------------------------------------------------------------


def _kernel_dimension(M):
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return M.shape[1]
    rank = int(np.sum(s > KERNEL_RTOL * s[0]))
    return M.shape[1] - rank


def _line_block(v, basis):
    # E v - lam v = 0, columns: 10 basis coefficients, then lam
    return np.column_stack([E @ v for E in basis] + [-v])


def _plane_block(Y, basis):
    # E Y + Y E^T - lam Y = 0 (upper-triangular entries), columns as above
    iu = np.triu_indices(4, 1)
    return np.column_stack([(E @ Y + Y @ E.T)[iu] for E in basis] + [-Y[iu]])


def stabilizer_dimension(obj):
    """Dimension of the subalgebra of sp(2,R) fixing ``obj`` projectively.

    ``obj`` is a :class:`LagrangianPlane`, a 4-vector (a line), or a pair
    ``(vector, plane)``. Each defining tensor gets its own scale unknown.
    """
    basis = _basis_float()
    if isinstance(obj, LagrangianPlane):
        M = _plane_block(obj.bivector, basis)
    elif isinstance(obj, tuple) and len(obj) == 2 and isinstance(obj[1], LagrangianPlane):
        v = np.asarray(obj[0], dtype=float)
        if not np.any(v):
            raise DegenerateError("zero vector spans no line")
        if not line_in_plane(v, obj[1]):
            raise DegenerateError("the line does not lie in the plane")
        L = _line_block(v, basis)
        P = _plane_block(obj[1].bivector, basis)
        # unknowns: 10 coefficients, lam_line, lam_plane
        M = np.vstack(
            [
                np.column_stack([L, np.zeros(L.shape[0])]),
                np.column_stack([P[:, :10], np.zeros(P.shape[0]), P[:, 10]]),
            ]
        )
    else:
        v = np.asarray(obj, dtype=float)
        if v.shape != (4,) or not np.any(v):
            raise DegenerateError("expected a nonzero 4-vector, a plane, or a (vector, plane) pair")
        M = _line_block(v, basis)
    return _kernel_dimension(M)
