"""Named verification suites: lists of checks with measured residuals and tolerances.

Each check returns a residual; it passes when ``residual <= tol``. Exact
checks use residual 0/1 style counts with ``tol = 0``. All randomness comes
from a single ``numpy.random.Generator`` seeded by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lie_sphere as ls
from . import sp2r, twistor
from .car import CarParams, car_fields, car_split, frame_matrix, integral_curve_X4
from .distribution import SplitDistribution, VectorField, derived_flag_ranks, flow
from .errors import CarGeomError, ClosureError
from .ode import car_ode, solve_ode
from .symmetries import (
    extract_structure_constants,
    generators,
    killing_form,
    random_configs,
    verify_all_symmetries,
)

SUITES = ("engel", "symmetries", "algebra", "sp2r", "quadric", "twistor")


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "error"
    residual: float
    tol: float

    def as_dict(self):
        return {"name": self.name, "status": self.status, "residual": self.residual, "tol": self.tol}


def run_check(name, fn, tol):
    try:
        residual = float(fn())
    except CarGeomError:
        # an error is reported with residual -1 so the JSON stays numeric
        return CheckResult(name, "error", -1.0, tol)
    status = "pass" if residual <= tol else "fail"
    return CheckResult(name, status, residual, tol)


def perturbed_generators(params=CarParams(), amount=0.01):
    """Generators with S4 replaced by ``S4 + amount * x d_beta`` (a broken symmetry)."""
    gen = generators(params)
    bump = VectorField.from_components(gen[3].chart, [0, 0, 0, f"{amount!r}*x"])
    return gen.replaced(3, gen[3] + bump)


# -- engel ---------------------------------------------------------------------------


def _engel_checks(rng, samples):
    P = CarParams(1.0)
    D = car_split(P)
    pts = random_configs(rng, samples)

    def growth():
        return sum(derived_flag_ranks(D, p) != (2, 3, 4) for p in pts)

    def volume():
        worst = 0.0
        for L in (0.5, 1.0, 2.0):
            for p in pts:
                worst = max(worst, abs(np.linalg.det(frame_matrix(p, CarParams(L))) / L**2 - 1.0))
        return worst

    def normal_form():
        chart = ("x", "y", "p", "q")
        DE = SplitDistribution(
            VectorField.from_components(chart, [0, 0, 0, 1]),
            VectorField.from_components(chart, [1, "p", "q", 0]),
        )
        return sum(derived_flag_ranks(DE, p) != (2, 3, 4) for p in rng.uniform(-2, 2, size=(10, 4)))

    def x4_flow():
        _, _, _, X4 = car_fields(P)
        worst = 0.0
        for q0 in random_configs(rng, 5):
            end = flow(X4, q0, 1.0, 400)[-1]
            worst = max(worst, np.max(np.abs(end - integral_curve_X4(q0, 1.0, P).as_array())))
        return worst

    return [
        ("growth_vector", growth, 0.0),
        ("frame_volume", volume, 1e-10),
        ("engel_normal_form", normal_form, 0.0),
        ("x4_flow_closed_form", x4_flow, 1e-8),
    ]


# -- symmetries / algebra --------------------------------------------------------------


def _symmetry_checks(rng, samples, inject_fault=False):
    P = CarParams(1.0)
    gen = perturbed_generators(P) if inject_fault else generators(P)
    pts = random_configs(rng, max(samples, 1))
    control = random_configs(rng, 20)

    def all_symmetric():
        return max(verify_all_symmetries(gen, pts).residuals.values())

    def negative_control():
        # passes when the broken generator is detected (residual well above 1e-9)
        bad = verify_all_symmetries(perturbed_generators(P), control)
        return 0.0 if not bad.passed else 1.0

    return [
        ("generators_preserve_split", all_symmetric, 1e-9),
        ("perturbed_generator_detected", negative_control, 0.0),
    ]


def _algebra_checks(rng, samples, inject_fault=False):
    P = CarParams(1.0)
    gen = perturbed_generators(P) if inject_fault else generators(P)
    state = {}

    def closure():
        sc = extract_structure_constants(gen, random_configs(rng, 30), tol=1e-8)
        state["sc"] = sc
        return sc.residual

    def fitted():
        if "sc" not in state:
            raise ClosureError("structure constants were not extracted")
        return state["sc"]

    def jacobi():
        return fitted().jacobi_residual()

    def perfect():
        return 0.0 if fitted().is_perfect() else 1.0

    def signature():
        sig = killing_form(fitted()).signature
        return 0.0 if sig == sp2r.killing_signature() == (6, 4, 0) else 1.0

    def sample_independence():
        other = extract_structure_constants(gen, random_configs(rng, 30), tol=1e-8)
        return float(np.max(np.abs(other.c - fitted().c)))

    return [
        ("closure_heldout", closure, 1e-8),
        ("jacobi", jacobi, 1e-8),
        ("perfect", perfect, 0.0),
        ("killing_signature_matches_sp2r", signature, 0.0),
        ("sample_independence", sample_independence, 1e-7),
    ]


# -- sp2r ------------------------------------------------------------------------------


def _sp2r_checks(rng, samples):
    def parabolic():
        bad = 0
        for p, n in (("p1", "n1"), ("p2", "n2"), ("p12", "n12")):
            sub = sp2r.Subalgebra.named(p)
            bad += sp2r.killing_orthogonal(sub).indices() != sp2r.NAMED[n]
            bad += not sp2r.is_parabolic(sub)
        return bad

    def killing_pattern():
        coeffs = sp2r.killing_quadratic_coefficients()
        expected_pairs = [(1, 10), (2, 9), (3, 8), (4, 7), (5, 5), (6, 6)]
        if sorted(coeffs) != expected_pairs:
            return 1.0
        unit = coeffs[(3, 8)]
        ratios = [coeffs[k] / unit for k in expected_pairs]
        return float(max(abs(a - b) for a, b in zip(ratios, (-4, 2, 1, -2, 1, 1))))

    return [
        ("printed_table", lambda: len(sp2r.table_mismatches()), 0.0),
        ("jacobi_exact", lambda: len(sp2r.jacobi_violations()), 0.0),
        ("gradation", lambda: len(sp2r.verify_gradation().violations), 0.0),
        ("killing_pattern", killing_pattern, 0.0),
        ("killing_signature", lambda: float(sp2r.killing_signature() != (6, 4, 0)), 0.0),
        ("parabolics", parabolic, 0.0),
        ("m_three_step", lambda: float(sp2r.nilpotency_degree(sp2r.Subalgebra.named("m")) != 3), 0.0),
    ]


# -- quadric ---------------------------------------------------------------------------


def _quadric_checks(rng, samples):
    def null_identity():
        worst = 0.0
        for _ in range(1000):
            a, b = rng.uniform(-3, 3, size=(2, 3))
            c1, c2 = ls.OrientedCircle(*a), ls.OrientedCircle(*b)
            B = ls.polar_form(ls.circle_to_quadric(c1), ls.circle_to_quadric(c2))
            worst = max(worst, abs(2 * B + ls.minkowski_interval(c1, c2)))
        return worst

    def hand_cases():
        unit = ls.circle_to_quadric(ls.OrientedCircle(0, 0, 1))
        got = (
            ls.incident(unit, ls.circle_to_quadric(ls.OrientedCircle(2, 0, -1))),
            ls.incident(unit, ls.circle_to_quadric(ls.OrientedCircle(2, 0, 1))),
            ls.incident(unit, ls.point_to_quadric(1, 0)),
        )
        return float(got != (True, False, True))

    def ode_circles():
        worst = 0.0
        for _ in range(max(1, min(samples, 20))):
            p0 = rng.uniform(-1, 1)
            q0 = rng.uniform(0.2, 1.0) * rng.choice([-1.0, 1.0])
            R = (1 + p0 * p0) ** 1.5 / abs(q0)
            span = 0.5 * R * (1 - abs(p0) / math.sqrt(1 + p0 * p0))
            curve = solve_ode(car_ode(), (0.0, 0.0, p0, q0), span, 1000)
            fit = ls.fit_cycle(curve[:, :2])
            qp = ls.solution_to_cycle(*fit.coefficients())
            worst = max(worst, fit.residual, abs(ls.quadric_value(qp.normalized())))
        return worst

    return [
        ("incidence_is_null_separation", null_identity, 1e-12),
        ("tangency_cases", hand_cases, 0.0),
        ("ode_solutions_are_cycles", ode_circles, 1e-6),
    ]


# -- twistor ---------------------------------------------------------------------------


def _twistor_checks(rng, samples):
    from fractions import Fraction

    def wedge_exact():
        bad = 0
        for _ in range(50):
            v = [Fraction(int(n), int(d)) for n, d in zip(rng.integers(-30, 30, 5), rng.integers(1, 9, 5))]
            bad += twistor.wedge_square_coeff(twistor.omega_perp_embed(*v)) != -2 * twistor.quadric_form(v)
        return bad

    def minus_identity():
        return float(np.max(np.abs(twistor.induced_quadric_action(-np.eye(4)) - np.eye(5))))

    def homomorphism():
        worst = 0.0
        for _ in range(50):
            A, B = twistor.random_symplectic(rng), twistor.random_symplectic(rng)
            lhs = twistor.induced_quadric_action(A @ B)
            rhs = twistor.induced_quadric_action(A) @ twistor.induced_quadric_action(B)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst

    def stabilizers():
        P = twistor.plane_from_params(0.0, 0.0, 0.0)
        e4 = np.array([0.0, 0.0, 0.0, 1.0])
        dims = (
            twistor.stabilizer_dimension(P),
            twistor.stabilizer_dimension(e4),
            twistor.stabilizer_dimension((e4, P)),
        )
        return float(dims != (7, 7, 6))

    return [
        ("wedge_square_exact", wedge_exact, 0.0),
        ("minus_identity_acts_trivially", minus_identity, 1e-15),
        ("homomorphism", homomorphism, 1e-10),
        ("stabilizer_dimensions", stabilizers, 0.0),
        ("identity_i2", lambda: float(twistor.identity_i2_residual()), 0.0),
    ]


_BUILDERS = {
    "engel": _engel_checks,
    "symmetries": _symmetry_checks,
    "algebra": _algebra_checks,
    "sp2r": _sp2r_checks,
    "quadric": _quadric_checks,
    "twistor": _twistor_checks,
}


def run_suite(name, seed=0, samples=100, tol=None, inject_fault=False):
    """Run one suite (or ``"all"``) and return check results sorted by name."""
    names = SUITES if name == "all" else (name,)
    if any(n not in _BUILDERS for n in names):
        raise ValueError(f"unknown suite {name!r}")
    rng = np.random.default_rng(seed)
    results = []
    for n in names:
        builder = _BUILDERS[n]
        if n in ("symmetries", "algebra"):
            checks = builder(rng, samples, inject_fault=inject_fault)
        else:
            checks = builder(rng, samples)
        prefix = f"{n}." if name == "all" else ""
        for check_name, fn, default_tol in checks:
            results.append(run_check(prefix + check_name, fn, default_tol if tol is None else tol))
    return sorted(results, key=lambda r: r.name)
