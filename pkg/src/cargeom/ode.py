"""Third-order ODEs ``y''' = F(x, y, p, q)`` with ``p = y'``, ``q = y''``.

Contains the total-derivative field, the Wunschmann and Chern invariants
(evaluated with jets), the change of chart that turns the car into the ODE
``y''' = 3 p q^2 / (1 + p^2)``, the normalisation of the car coframe to the
contact coframe, RK4 solving, and a contact projective connection for ODEs
cubic in ``q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .car import CarConfig, CarParams, car_coframe
from .distribution import VectorField, rk4
from .errors import NotPolynomialError, PreconditionError
from .expr import ScalarFieldExpr, as_expr, eval_jet
from .jets import Jet

JET_CHART = ("x", "y", "p", "q")
CAR_ODE = "3*p*q^2/(1+p^2)"
CHERN_TOL = 1e-9


@dataclass(frozen=True)
class JetPoint:
    x: float
    y: float
    p: float
    q: float

    def as_array(self):
        return np.array([self.x, self.y, self.p, self.q])


def _as_jet_point(pt):
    if isinstance(pt, JetPoint):
        return pt.as_array()
    return np.asarray(pt, dtype=float)


@dataclass(frozen=True)
class ThirdOrderODE:
    F: ScalarFieldExpr

    @classmethod
    def parse(cls, text):
        return cls(as_expr(text, JET_CHART))

    def __call__(self, pt):
        return self.F(_as_jet_point(pt))


def _rhs(F):
    """Coerce an ODE, expression or text into a ScalarFieldExpr over (x, y, p, q)."""
    if isinstance(F, ThirdOrderODE):
        return F.F
    return as_expr(F, JET_CHART)


def car_ode():
    return ThirdOrderODE.parse(CAR_ODE)


def ode_fields(F):
    """``(X3, X4)`` with ``X3 = d_q`` and ``X4 = d_x + p d_y + q d_p + F d_q``."""
    F = _rhs(F)
    X3 = VectorField.from_components(JET_CHART, [0, 0, 0, 1])
    X4 = VectorField.from_components(JET_CHART, [1, "p", "q", F])
    return X3, X4


# -- invariants ------------------------------------------------------------------------


def _total_derivative(G, P, Q, FJ):
    """Jet of ``X4(G)`` given the jet ``G``; P, Q are the coordinate jets, FJ the jet of F."""
    return G.deriv(0) + P * G.deriv(1) + Q * G.deriv(2) + FJ * G.deriv(3)


def wunschmann(F, point):
    """Wunschmann invariant

    W = 9 X4 X4 X3F - 27 X4(F_p) - 18 X3F X4(X3F) + 18 X3F F_p + 4 (X3F)^3 + 54 F_y

    where ``X3F = F_q``; nested total derivatives are taken on jets, so the
    result is exact up to rounding.
    """
    F = _rhs(F)
    pt = _as_jet_point(point)
    J = eval_jet(F, pt, 3)
    P = Jet.variable(2, J.point, 3)
    Q = Jet.variable(3, J.point, 3)
    F3 = J.deriv(3)
    Fp = J.deriv(2)
    Fy = J.deriv(1)
    X4F3 = _total_derivative(F3, P, Q, J)
    X4X4F3 = _total_derivative(X4F3, P, Q, J)
    X4Fp = _total_derivative(Fp, P, Q, J)
    f3 = F3.value
    return (
        9.0 * X4X4F3.value
        - 27.0 * X4Fp.value
        - 18.0 * f3 * X4F3.value
        + 18.0 * f3 * Fp.value
        + 4.0 * f3**3
        + 54.0 * Fy.value
    )


def chern_invariant(F, point):
    """``d^4 F / dq^4`` at ``point``."""
    return eval_jet(_rhs(F), _as_jet_point(point), 4).partial((0, 0, 0, 4))


# -- the car as an ODE -----------------------------------------------------------------


def _in_branch(alpha, beta):
    return abs(alpha) < math.pi / 2 and abs(beta) < math.pi / 2


def chart_car_to_jet(config, params=CarParams()):
    """``(x, y, alpha, beta) -> (x, y, tan(alpha), -tan(beta) sec(alpha)^3 / l)``."""
    c = config if isinstance(config, CarConfig) else CarConfig.from_array(config)
    if not _in_branch(c.alpha, c.beta):
        raise PreconditionError("chart needs |alpha| < pi/2 and |beta| < pi/2")
    sec_a = 1.0 / math.cos(c.alpha)
    return JetPoint(c.x, c.y, math.tan(c.alpha), -math.tan(c.beta) * sec_a**3 / params.length)


def chart_jet_to_car(point, params=CarParams()):
    """Inverse of :func:`chart_car_to_jet` on the principal branch."""
    x, y, p, q = _as_jet_point(point)
    alpha = math.atan(p)
    beta = math.atan(-params.length * q * math.cos(alpha) ** 3)
    return CarConfig(float(x), float(y), alpha, beta)


def chart_jacobian(config, params=CarParams()):
    """``d(x, y, p, q) / d(x, y, alpha, beta)``."""
    c = config if isinstance(config, CarConfig) else CarConfig.from_array(config)
    L = params.length
    ta, tb = math.tan(c.alpha), math.tan(c.beta)
    sa, sb = 1.0 / math.cos(c.alpha), 1.0 / math.cos(c.beta)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, sa**2, 0.0],
            [0.0, 0.0, -3.0 * tb * sa**3 * ta / L, -(sb**2) * sa**3 / L],
        ]
    )


def normalization_matrices(config, params=CarParams()):
    """``(A1, A2, A3, A4)``; applying ``A4 A3 A2 A1`` to the car coframe gives the contact coframe."""
    c = config if isinstance(config, CarConfig) else CarConfig.from_array(config)
    if abs(math.cos(c.alpha)) < 1e-12 or abs(math.cos(c.beta)) < 1e-12:
        raise PreconditionError("normalisation is singular where cos(alpha) or cos(beta) vanishes")
    L = params.length
    ca, cb = math.cos(c.alpha), math.cos(c.beta)
    ta, tb = math.tan(c.alpha), math.tan(c.beta)
    sa, sb = 1.0 / ca, 1.0 / cb
    A1 = np.diag([L * sa, 1.0, 1.0, 1.0])
    A2 = np.eye(4)
    A2[1] = [-tb * ta * sa / L, -sb * sa**2, 0.0, 0.0]
    A3 = np.eye(4)
    A3[2] = [0.0, -3.0 * sa * ta * tb / L, -(sa**3) * sb**2 / L, 0.0]
    A4 = np.eye(4)
    A4[3] = [-0.5 * cb**2 * math.sin(2 * c.alpha), 0.5 * L * ca**3 * math.sin(2 * c.beta), 0.0, L * ca * cb]
    return A1, A2, A3, A4


def normalize_car_coframe(config, params=CarParams()):
    """Rows of ``A4 A3 A2 A1 omega`` expressed in the jet cobasis ``(dx, dy, dp, dq)``."""
    A1, A2, A3, A4 = normalization_matrices(config, params)
    rows = A4 @ A3 @ A2 @ A1 @ car_coframe(config, params)
    return rows @ np.linalg.inv(chart_jacobian(config, params))


def contact_coframe(point, F=CAR_ODE):
    """Rows ``dy - p dx``, ``dp - q dx``, ``dq - F dx``, ``dx`` in ``(dx, dy, dp, dq)``."""
    x, y, p, q = _as_jet_point(point)
    f = _rhs(F)((x, y, p, q))
    return np.array(
        [
            [-p, 1.0, 0.0, 0.0],
            [-q, 0.0, 1.0, 0.0],
            [-f, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, 0.0],
        ]
    )


# -- solutions -------------------------------------------------------------------------


def solve_ode(F, initial, x_span=1.0, steps=1000):
    """RK4 for ``(x, y, p, q)' = (1, p, q, F)``; rows of the result are jet points.

    ``x`` runs from ``initial.x`` to ``initial.x + x_span``.
    """
    _, X4 = ode_fields(F)
    return rk4(X4, _as_jet_point(initial), float(x_span), steps)


def extract_q_polynomial(F, base, q_samples=(-2.0, -1.0, 0.0, 1.0, 2.0), tol=CHERN_TOL):
    """``(A0, A1, A2, A3)`` with ``F = A3 q^3 + A2 q^2 + A1 q + A0`` at ``base = (x, y, p)``.

    Raises :class:`NotPolynomialError` when the fourth q-derivative is nonzero
    at any of ``q_samples``.
    """
    F = _rhs(F)
    x, y, p = (float(v) for v in base)
    for q in q_samples:
        C = chern_invariant(F, (x, y, p, q))
        if abs(C) > tol:
            raise NotPolynomialError(f"F is not cubic in q: d^4F/dq^4 = {C:.6g} at q = {q}")
    J = eval_jet(F, (x, y, p, 0.0), 3)
    return tuple(J.coeff((0, 0, 0, k)) for k in range(4))


@dataclass(frozen=True)
class ProjectiveConnectionCoeffs:
    """Gauge-fixed connection coefficients ``Gamma^i_jk`` as functions of ``(x, y, p)``.

    Gauge: ``G3_33 = G3_23 = 0``, so that
    ``G2_33 = A3``, ``G2_23 = A2 / 2``, ``G2_22 = A1``, ``G3_22 = -A0``.
    """

    F: ScalarFieldExpr

    def at(self, x, y, p, check=True):
        samples = (-2.0, -1.0, 0.0, 1.0, 2.0) if check else ()
        A0, A1, A2, A3 = extract_q_polynomial(self.F, (x, y, p), samples)
        return {
            "G2_22": A1,
            "G2_23": 0.5 * A2,
            "G2_33": A3,
            "G3_22": -A0,
            "G3_23": 0.0,
            "G3_33": 0.0,
        }

    def reconstruct(self, point):
        """``G2_33 q^3 + (2 G2_23 - G3_33) q^2 + (G2_22 - 2 G3_23) q - G3_22``."""
        x, y, p, q = _as_jet_point(point)
        G = self.at(x, y, p)
        return (
            G["G2_33"] * q**3
            + (2 * G["G2_23"] - G["G3_33"]) * q**2
            + (G["G2_22"] - 2 * G["G3_23"]) * q
            - G["G3_22"]
        )


def contact_projective_connection(F, probe_points=None):
    """Connection for an ODE cubic in ``q``; probes a few points for the cubic condition."""
    F = _rhs(F)
    if probe_points is None:
        probe_points = [(0.0, 0.0, 0.0), (0.3, -0.2, 0.7), (-0.5, 0.4, -1.1)]
    for base in probe_points:
        extract_q_polynomial(F, base)
    return ProjectiveConnectionCoeffs(F)


def integrate_geodesic(conn, start, velocity, x_span=1.0, rtol=1e-12, atol=1e-12):
    """Integrate the geodesic equations of ``conn`` on ``(x, y, p)`` space.

        x'' = -(G2_22 x'^2 + 2 G2_23 x' p' + G2_33 p'^2)
        p'' = -(G3_22 x'^2 + 2 G3_23 x' p' + G3_33 p'^2)
        y'  = p x'

    from ``start = (x0, y0, p0)`` with ``velocity = (x'0, p'0)``, stopping when
    ``x`` has advanced by ``x_span``. Returns the scipy solution (dense output on).
    """
    x0, y0, p0 = (float(v) for v in start)
    xd0, pd0 = (float(v) for v in velocity)
    if xd0 <= 0:
        raise PreconditionError("the geodesic must start with x' > 0")

    def rhs(t, s):
        x, y, p, xd, pd = s
        G = conn.at(x, y, p, check=False)
        xdd = -(G["G2_22"] * xd * xd + 2 * G["G2_23"] * xd * pd + G["G2_33"] * pd * pd)
        pdd = -(G["G3_22"] * xd * xd + 2 * G["G3_23"] * xd * pd + G["G3_33"] * pd * pd)
        return [xd, p * xd, pd, xdd, pdd]

    def reached(t, s):
        return s[0] - (x0 + x_span)

    reached.terminal = True
    reached.direction = 1
    sol = solve_ivp(
        rhs,
        (0.0, 1e3 * x_span / xd0),
        [x0, y0, p0, xd0, pd0],
        method="DOP853",
        rtol=rtol,
        atol=atol,
        events=reached,
        dense_output=True,
    )
    if sol.status != 1:
        raise PreconditionError(f"geodesic did not reach x = x0 + {x_span}: {sol.message}")
    return sol


def geodesic_vs_solution(F, initial, x_span=1.0, steps=2000, nodes=11):
    """Largest deviation in ``(y, p)`` between the geodesic and the ODE solution.

    Both curves are compared at ``nodes`` equally spaced values of ``x``.
    """
    from scipy.optimize import brentq

    init = _as_jet_point(initial)
    conn = contact_projective_connection(F)
    sol = integrate_geodesic(conn, init[:3], (1.0, init[3]), x_span)
    t_end = sol.t_events[0][0]
    curve = solve_ode(F, init, x_span, steps)
    stride = steps // (nodes - 1)
    worst = 0.0
    for row in curve[::stride]:
        xt = row[0]
        if xt <= init[0]:
            t = 0.0
        elif xt >= init[0] + x_span:
            t = t_end
        else:
            t = brentq(lambda s: sol.sol(s)[0] - xt, 0.0, t_end, xtol=1e-15)
        g = sol.sol(t)
        worst = max(worst, abs(g[1] - row[1]), abs(g[2] - row[2]))
    return worst
