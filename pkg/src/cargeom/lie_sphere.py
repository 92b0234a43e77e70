"""Oriented circles, lines and points of the plane as points of a projective quadric.

A cycle is a homogeneous 5-tuple ``[xi : eta : zeta : mu : nu]`` with

    Q = xi^2 + eta^2 - zeta^2 - mu nu = 0.

For ``nu != 0`` it is the oriented circle with centre ``(xi/nu, eta/nu)`` and
signed radius ``zeta/nu`` (``zeta = 0``: a point); ``nu = 0`` gives lines.
Two cycles are in oriented contact iff the polar form of ``Q`` vanishes on
them; for circles this is null separation in ``da^2 + db^2 - dR^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, NotOnQuadricError, PreconditionError

QUADRIC_TOL = 1e-10
STRATUM_TOL = 1e-10


@dataclass(frozen=True)
class QuadricPoint:
    xi: float
    eta: float
    zeta: float
    mu: float
    nu: float

    def __post_init__(self):
        if not any(self.as_array()):
            raise DegenerateError("the zero 5-tuple is not a projective point")

    def as_array(self):
        return np.array([self.xi, self.eta, self.zeta, self.mu, self.nu], dtype=float)

    @classmethod
    def from_array(cls, v):
        return cls(*(float(t) for t in v))

    def normalized(self):
        """Representative with largest absolute component equal to 1 in size."""
        v = self.as_array()
        return v / np.max(np.abs(v))


@dataclass(frozen=True)
class OrientedCircle:
    a: float
    b: float
    R: float  # > 0 counterclockwise, < 0 clockwise, 0 for a point


def quadric_value(v):
    xi, eta, zeta, mu, nu = np.asarray(v, dtype=float)
    return xi * xi + eta * eta - zeta * zeta - mu * nu


def polar_form(q1, q2):
    """``B = xi1 xi2 + eta1 eta2 - zeta1 zeta2 - (mu1 nu2 + mu2 nu1) / 2``; ``B(q, q) = Q(q)``."""
    u = q1.as_array() if isinstance(q1, QuadricPoint) else np.asarray(q1, dtype=float)
    v = q2.as_array() if isinstance(q2, QuadricPoint) else np.asarray(q2, dtype=float)
    return float(u[0] * v[0] + u[1] * v[1] - u[2] * v[2] - 0.5 * (u[3] * v[4] + v[3] * u[4]))


def circle_to_quadric(c):
    return QuadricPoint(c.a, c.b, c.R, c.a * c.a + c.b * c.b - c.R * c.R, 1.0)


def point_to_quadric(a, b):
    return circle_to_quadric(OrientedCircle(a, b, 0.0))


def on_quadric(qp, tol=QUADRIC_TOL):
    return abs(quadric_value(qp.normalized())) <= tol


def classify(qp, tol=STRATUM_TOL):
    """``"line"`` if ``nu = 0``, else ``"point"`` if ``zeta = 0``, else ``"circle"``.

    Thresholds apply after scaling the largest component to 1.
    """
    v = qp.normalized()
    if abs(quadric_value(v)) > QUADRIC_TOL:
        raise NotOnQuadricError(f"Q = {quadric_value(v):.3g} after normalisation")
    if abs(v[4]) <= tol:
        return "line"
    if abs(v[2]) <= tol:
        return "point"
    return "circle"


def quadric_to_circle(qp):
    """Inverse of :func:`circle_to_quadric` for the circle and point strata."""
    v = qp.as_array()
    if abs(v[4]) <= STRATUM_TOL * np.max(np.abs(v)):
        raise DegenerateError("a line has no centre and radius")
    return OrientedCircle(v[0] / v[4], v[1] / v[4], v[2] / v[4])


def incident(q1, q2, tol=1e-12):
    """Oriented contact: ``|B| <= tol`` after scaling each argument's largest component to 1."""
    return abs(polar_form(q1.normalized(), q2.normalized())) <= tol


def minkowski_interval(c1, c2):
    """``(da)^2 + (db)^2 - (dR)^2``."""
    return (c1.a - c2.a) ** 2 + (c1.b - c2.b) ** 2 - (c1.R - c2.R) ** 2


def solution_to_cycle(xi, eta, mu, nu, orientation=1):
    """Complete ``nu (x^2 + y^2) - 2 xi x - 2 eta y + mu = 0`` to a quadric point.

    ``zeta = orientation * sqrt(xi^2 + eta^2 - mu nu)`` with ``orientation`` in ``{+1, -1}``.
    """
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    if not any((xi, eta, mu, nu)):
        raise DegenerateError("all coefficients vanish")
    disc = xi * xi + eta * eta - mu * nu
    scale = max(abs(xi), abs(eta), abs(mu), abs(nu)) ** 2
    if disc < 0:
        if disc >= -QUADRIC_TOL * scale:
            disc = 0.0
        else:
            raise PreconditionError(f"xi^2 + eta^2 - mu nu = {disc:.3g} < 0: no real cycle")
    return QuadricPoint(xi, eta, orientation * math.sqrt(disc), mu, nu)


@dataclass
class CycleFit:
    nu: float
    xi: float
    eta: float
    mu: float
    residual: float  # smallest singular value over sqrt(number of points)

    def coefficients(self):
        return self.xi, self.eta, self.mu, self.nu


def fit_cycle(xy):
    """Total-least-squares fit of ``nu (x^2 + y^2) - 2 xi x - 2 eta y + mu = 0``.

    The smallest right singular vector of the design matrix with columns
    ``(x^2 + y^2, x, y, 1)`` gives ``(nu, -2 xi, -2 eta, mu)``; its sign is
    chosen so that ``nu >= 0``. Rows are scaled to unit norm so the residual is
    a relative misfit.
    """
    xy = np.asarray(xy, dtype=float)
    if xy.ndim != 2 or xy.shape[1] != 2 or len(xy) < 4:
        raise PreconditionError("need at least 4 planar points")
    x, y = xy[:, 0], xy[:, 1]
    M = np.column_stack([x * x + y * y, x, y, np.ones_like(x)])
    M /= np.linalg.norm(M, axis=1, keepdims=True)
    _, s, vt = np.linalg.svd(M, full_matrices=False)
    v = vt[-1]
    if v[0] < 0:
        v = -v
    return CycleFit(nu=v[0], xi=-0.5 * v[1], eta=-0.5 * v[2], mu=v[3], residual=float(s[-1] / math.sqrt(len(x))))
