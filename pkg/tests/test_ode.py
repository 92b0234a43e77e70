import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from cargeom.car import CarParams, car_fields
from cargeom.errors import NotPolynomialError, PreconditionError
from cargeom.ode import (
    JetPoint,
    ThirdOrderODE,
    car_ode,
    chart_car_to_jet,
    chart_jacobian,
    chart_jet_to_car,
    chern_invariant,
    contact_coframe,
    contact_projective_connection,
    extract_q_polynomial,
    geodesic_vs_solution,
    integrate_geodesic,
    normalize_car_coframe,
    ode_fields,
    solve_ode,
    wunschmann,
)

X, Y, P, Q = sp.symbols("x y p q")

in_branch = st.tuples(
    st.floats(-2, 2), st.floats(-2, 2), st.floats(-1.4, 1.4), st.floats(-1.4, 1.4)
)


def wunschmann_sym(F):
    """Reference value of W from sympy differentiation."""

    def D(G):
        return sp.diff(G, X) + P * sp.diff(G, Y) + Q * sp.diff(G, P) + F * sp.diff(G, Q)

    Fq = sp.diff(F, Q)
    return (
        9 * D(D(Fq))
        - 27 * D(sp.diff(F, P))
        - 18 * Fq * D(Fq)
        + 18 * Fq * sp.diff(F, P)
        + 4 * Fq**3
        + 54 * sp.diff(F, Y)
    )


def test_car_ode_is_flat():
    rng = np.random.default_rng(21)
    pts = rng.uniform(-2, 2, size=(100, 4))
    F = car_ode()
    assert max(abs(wunschmann(F, p)) for p in pts) <= 1e-10
    assert max(abs(chern_invariant(F, p)) for p in pts) <= 1e-10


def test_reference_invariant_values():
    assert wunschmann("y", (0.3, 0.1, -0.4, 0.9)) == pytest.approx(54.0, abs=1e-10)
    assert wunschmann("0", (1, 2, 3, 4)) == 0.0
    assert chern_invariant("q^4", (0.5, -1, 2, 0.7)) == 24.0
    assert chern_invariant("0", (0, 0, 0, 0)) == 0.0


@pytest.mark.parametrize(
    "text",
    ["x*q^2 + sin(p)*y", "q^3*p - y^2", "cos(x)*q + p^3*q^2", "3*p*q^2/(1+p^2)", "q^4 + x*y*p"],
)
def test_wunschmann_matches_symbolic_oracle(text):
    F_sym = sp.sympify(text.replace("^", "**"), locals={"x": X, "y": Y, "p": P, "q": Q})
    W = sp.lambdify((X, Y, P, Q), wunschmann_sym(F_sym))
    rng = np.random.default_rng(22)
    for pt in rng.uniform(-1.5, 1.5, size=(10, 4)):
        expected = W(*pt)
        assert wunschmann(text, pt) == pytest.approx(expected, rel=1e-10, abs=1e-10)


@settings(max_examples=50, deadline=None)
@given(in_branch, st.sampled_from([0.5, 1.0, 2.0]))
def test_chart_carries_car_fields_to_ode_fields(q, L):
    Pm = CarParams(L)
    _, _, X3c, X4c = car_fields(Pm)
    jp = chart_car_to_jet(q, Pm).as_array()
    J = chart_jacobian(q, Pm)
    X3j, X4j = ode_fields(car_ode())
    u = J @ X4c(q)
    v = X4j(jp)
    # the image of X4 is a multiple of d_x + p d_y + q d_p + F d_q
    np.testing.assert_allclose(u, u[0] * v, rtol=1e-10, atol=1e-10 * max(1.0, np.max(np.abs(u))))
    w = J @ X3c(q)
    assert np.all(w[:3] == 0) and w[3] != 0
    np.testing.assert_allclose(w / w[3], X3j(jp))


@settings(max_examples=50, deadline=None)
@given(in_branch)
def test_chart_jacobian_matches_finite_differences(q):
    h = 1e-6
    J = chart_jacobian(q)
    for k in range(4):
        e = np.zeros(4)
        e[k] = h
        col = (chart_car_to_jet(np.add(q, e)).as_array() - chart_car_to_jet(np.subtract(q, e)).as_array()) / (2 * h)
        np.testing.assert_allclose(J[:, k], col, rtol=1e-5, atol=1e-5 * max(1.0, np.max(np.abs(col))))


@settings(max_examples=50, deadline=None)
@given(in_branch)
def test_chart_round_trip(q):
    back = chart_jet_to_car(chart_car_to_jet(q))
    np.testing.assert_allclose(back.as_array(), q, atol=1e-12)


def test_chart_branch():
    with pytest.raises(PreconditionError):
        chart_car_to_jet((0, 0, 2.0, 0))
    assert chart_car_to_jet((0, 0, 0, 0)) == JetPoint(0, 0, 0, 0)


def test_coframe_pipeline():
    rng = np.random.default_rng(23)
    for L in (0.5, 1.0, 2.0):
        Pm = CarParams(L)
        for _ in range(100):
            q = np.concatenate([rng.uniform(-2, 2, 2), rng.uniform(-1.4, 1.4, 2)])
            got = normalize_car_coframe(q, Pm)
            expected = contact_coframe(chart_car_to_jet(q, Pm))
            # entries grow like sec^6 near the branch edge, so compare relative to their size
            assert np.max(np.abs(got - expected)) <= 1e-10 * max(1.0, np.max(np.abs(expected)))


def test_solve_ode_zero_rhs_is_a_parabola():
    sol = solve_ode("0", (0.0, 1.0, 0.5, 0.25), 2.0, 100)
    x = sol[:, 0]
    np.testing.assert_allclose(sol[:, 1], 1.0 + 0.5 * x + 0.125 * x**2, atol=1e-13)
    np.testing.assert_allclose(sol[-1], [2.0, 2.5, 1.0, 0.25], atol=1e-13)


def test_polynomial_extraction():
    A = extract_q_polynomial("p*q^3 + 2*q^2 - x*q + y", (0.5, -0.3, 1.5))
    np.testing.assert_allclose(A, (-0.3, -0.5, 2.0, 1.5), atol=1e-14)
    with pytest.raises(NotPolynomialError):
        extract_q_polynomial("q^4", (0, 0, 0))
    with pytest.raises(NotPolynomialError):
        contact_projective_connection("sin(q)")


@settings(max_examples=50, deadline=None)
@given(st.tuples(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2)))
def test_connection_reproduces_rhs(pt):
    for text in ("3*p*q^2/(1+p^2)", "x*q^3 - y*q + p^2", "0"):
        conn = contact_projective_connection(text)
        F = ThirdOrderODE.parse(text)
        assert abs(conn.reconstruct(pt) - F(pt)) <= 1e-12 * max(1.0, abs(F(pt)))


def test_gauge_fixed_coefficients():
    G = contact_projective_connection(car_ode()).at(0.0, 0.0, 0.5)
    assert G["G3_33"] == G["G3_23"] == 0.0
    assert G["G2_23"] == pytest.approx(1.5 * 0.5 / 1.25)
    assert G["G2_22"] == G["G2_33"] == G["G3_22"] == 0.0


@pytest.mark.parametrize("initial", [(0.0, 0.0, 0.3, 0.2), (0.0, 0.5, -0.4, -0.25), (1.0, 0.0, 0.0, 0.1)])
def test_geodesics_project_to_solutions(initial):
    assert geodesic_vs_solution(car_ode(), initial, 1.0, steps=2000) <= 1e-6


def test_geodesic_requires_forward_start():
    conn = contact_projective_connection(car_ode())
    with pytest.raises(PreconditionError):
        integrate_geodesic(conn, (0, 0, 0), (0.0, 1.0))


def test_solutions_of_car_ode_have_constant_curvature():
    # the car ODE says the curvature q / (1 + p^2)^(3/2) is constant along solutions
    sol = solve_ode(car_ode(), (0.0, 0.0, 0.2, 0.3), 1.0, 1000)
    k = sol[:, 3] / (1 + sol[:, 2] ** 2) ** 1.5
    assert np.max(np.abs(k - k[0])) <= 1e-10
    assert math.isclose(k[0], 0.3 / 1.04**1.5)
