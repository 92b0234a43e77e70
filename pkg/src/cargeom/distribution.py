"""Vector fields, Lie brackets, derived flags and flows on a 4-chart.

Brackets are computed from jets: ``[X, Y]^i = X^j d_j Y^i - Y^j d_j X^i``,
with the component jets taken one order higher than the result needs. Nested
brackets work the same way on jets of higher order (see :func:`bracket_jets`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FlowError, PoleError, PreconditionError
from .expr import ScalarFieldExpr, as_expr, eval_jet

RANK_RTOL = 1e-8


@dataclass(frozen=True)
class VectorField:
    components: tuple
    chart: tuple

    def __post_init__(self):
        if len(self.components) != 4:
            raise ValueError("a vector field on a 4-chart has 4 components")

    @classmethod
    def from_components(cls, chart, components):
        """Build from strings, numbers or expressions (mixed freely)."""
        chart = tuple(chart)
        return cls(tuple(as_expr(c, chart) for c in components), chart)

    @classmethod
    def coordinate(cls, chart, index):
        """The coordinate field ``d/d chart[index]``."""
        return cls.from_components(chart, [1.0 if i == index else 0.0 for i in range(4)])

    def __call__(self, point):
        return np.array([c(point) for c in self.components])

    def jets(self, point, order):
        return [eval_jet(c, point, order) for c in self.components]

    def __add__(self, other):
        return VectorField(tuple(a + b for a, b in zip(self.components, other.components)), self.chart)

    def __rmul__(self, scalar):
        if isinstance(scalar, ScalarFieldExpr):
            return VectorField(tuple(scalar * c for c in self.components), self.chart)
        return VectorField(tuple(float(scalar) * c for c in self.components), self.chart)


@dataclass(frozen=True)
class SplitDistribution:
    """Rank-2 distribution ``span(Dw, Dg)`` with its splitting into two lines."""

    Dw: VectorField
    Dg: VectorField

    @property
    def chart(self):
        return self.Dw.chart


def bracket_jets(xj, yj):
    """Jets of ``[X, Y]`` from component jets of ``X`` and ``Y`` (order drops by one)."""
    out = []
    for i in range(4):
        acc = None
        for j in range(4):
            term = xj[j] * yj[i].deriv(j) - yj[j] * xj[i].deriv(j)
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def lie_bracket(X, Y, point):
    """``[X, Y]`` evaluated at ``point`` as a length-4 array."""
    return np.array([j.value for j in bracket_jets(X.jets(point, 1), Y.jets(point, 1))])


def numerical_rank(vectors, rtol=RANK_RTOL):
    m = np.atleast_2d(np.asarray(vectors, dtype=float))
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def derived_flag_ranks(D, point, rtol=RANK_RTOL):
    """Ranks ``(r1, r2, r3)`` of ``D``, ``D + [D, D]`` and ``D + [D, D + [D, D]]`` at a point."""
    w = D.Dw.jets(point, 2)
    g = D.Dg.jets(point, 2)
    wg = bracket_jets(w, g)  # order 1
    w_wg = bracket_jets([j.truncate(1) for j in w], wg)
    g_wg = bracket_jets([j.truncate(1) for j in g], wg)

    def vals(jets):
        return [j.value for j in jets]

    level1 = [vals(w), vals(g)]
    level2 = level1 + [vals(wg)]
    level3 = level2 + [vals(w_wg), vals(g_wg)]
    return tuple(numerical_rank(v, rtol) for v in (level1, level2, level3))


@dataclass
class EngelReport:
    passed: bool
    ranks: list = field(default_factory=list)  # one entry per sample: tuple or None
    errors: dict = field(default_factory=dict)  # sample index -> message

    def __bool__(self):
        return self.passed


def is_engel(D, samples, tol=RANK_RTOL):
    """Check growth vector (2, 3, 4) at every sample point.

    Pole errors at a sample are recorded in the report and make the check fail.
    """
    if len(samples) < 1:
        raise PreconditionError("is_engel needs at least one sample")
    report = EngelReport(passed=True)
    for k, pt in enumerate(samples):
        try:
            r = derived_flag_ranks(D, pt, tol)
        except PoleError as exc:
            report.ranks.append(None)
            report.errors[k] = str(exc)
            report.passed = False
            continue
        report.ranks.append(r)
        if r != (2, 3, 4):
            report.passed = False
    return report


def rk4(rhs, q0, T, steps):
    """Classical fixed-step RK4 for the autonomous system ``q' = rhs(q)``.

    Returns an array of shape ``(steps + 1, len(q0))``; row 0 is ``q0``.
    """
    if steps < 1:
        raise PreconditionError("steps must be >= 1")
    h = T / steps
    q = np.array(q0, dtype=float)
    out = np.empty((steps + 1, q.size))
    out[0] = q
    for n in range(steps):
        try:
            k1 = rhs(q)
            k2 = rhs(q + 0.5 * h * k1)
            k3 = rhs(q + 0.5 * h * k2)
            k4 = rhs(q + h * k3)
        except PoleError as exc:
            raise FlowError(str(exc), n) from exc
        q = q + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out[n + 1] = q
    return out


def flow(X, q0, T, steps):
    """Integrate the flow of ``X`` for time ``T`` with ``steps`` RK4 steps."""
    return rk4(X, q0, T, steps)


def _parallel_residual(u, v):
    """``|u ^ v| / (|u| max(|u|, |v|))`` from the 2x2 minors.

    The floor ``|u|`` in the second factor keeps a bracket that vanishes up to
    rounding (``|v| ~ 1e-16``) from producing an O(1) residual.
    """
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    minors = np.outer(u, v) - np.outer(v, u)
    return float(np.linalg.norm(minors[np.triu_indices(4, 1)]) / (nu * max(nu, nv)))


@dataclass
class SymmetryReport:
    passed: bool
    max_residual: float

    def __bool__(self):
        return self.passed


def symmetry_residual(S, D, point):
    """Largest parallelism residual of ``[S, Dw] || Dw`` and ``[S, Dg] || Dg`` at a point."""
    sj = S.jets(point, 1)
    res = 0.0
    for line in (D.Dw, D.Dg):
        lj = line.jets(point, 1)
        base = np.array([j.value for j in lj])
        if not np.any(base):
            raise PreconditionError(f"split line vanishes at {tuple(point)}")
        br = np.array([j.value for j in bracket_jets(sj, lj)])
        res = max(res, _parallel_residual(base, br))
    return res


def is_infinitesimal_symmetry(S, D, samples, tol=1e-9):
    """Does the flow of ``S`` preserve both lines of the split (sampled)?"""
    if len(samples) < 1:
        raise PreconditionError("need at least one sample")
    worst = max(symmetry_residual(S, D, pt) for pt in samples)
    return SymmetryReport(worst <= tol, worst)
