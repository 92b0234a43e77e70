from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from cargeom import twistor as tw
from cargeom.errors import DegenerateError, NotSymplecticError

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
five = st.tuples(*[fractions] * 5)
reals = st.floats(-3, 3, allow_subnormal=False)


def test_embedding_examples():
    Y = tw.omega_perp_embed(0, 0, 0, 1, 0)
    np.testing.assert_array_equal(Y.astype(int), tw.wedge(np.eye(4)[0], np.eye(4)[2]).astype(int))
    Y = tw.omega_perp_embed(1, 0, 0, 0, 0)
    e = np.eye(4)
    expected = tw.wedge(e[0], e[3]) - tw.wedge(e[1], e[2])
    np.testing.assert_array_equal(Y.astype(float), expected)


@settings(max_examples=100, deadline=None)
@given(five)
def test_embedding_is_exact_and_in_omega_perp(v):
    Y = tw.omega_perp_embed(*v)
    assert Y.dtype == object
    assert tw.contract_omega(Y) == 0
    assert tuple(tw.bivector_coordinates(Y)) == v
    assert tw.wedge_square_coeff(Y) == -2 * tw.quadric_form(v)


@settings(max_examples=100, deadline=None)
@given(st.tuples(*[reals] * 5))
def test_wedge_square_is_twice_the_pfaffian(v):
    # independent check: Pf(Y)^2 = det(Y) and Y ^ Y = 2 Pf(Y) vol
    Y = tw.omega_perp_embed(*(float(t) for t in v))
    assert abs(tw.contract_omega(Y)) <= 1e-15
    pf = tw.wedge_square_coeff(Y) / 2
    assert pf * pf == pytest.approx(np.linalg.det(Y), rel=1e-9, abs=1e-9)


def test_wedge_square_examples():
    assert tw.wedge_square_coeff(tw.omega_perp_embed(1, 0, 0, 0, 0)) == -2
    assert tw.wedge_square_coeff(tw.omega_perp_embed(0, 0, 0, 1, 0)) == 0
    assert tw.identity_i2_residual() == 0


def test_simplicity_iff_quadric():
    rng = np.random.default_rng(31)
    base = tw.plane_from_params(0.0, 0.0, 0.0)
    for _ in range(50):
        A = tw.random_symplectic(rng)
        Y = A @ base.bivector @ A.T
        v = tw.bivector_coordinates(Y)
        assert abs(tw.contract_omega(Y)) <= 1e-12 * np.max(np.abs(Y))
        assert tw.is_simple(Y, tol=1e-10)
        assert abs(tw.quadric_form(v)) <= 1e-10 * max(1.0, np.max(np.abs(v)) ** 2)
    for _ in range(50):
        v = rng.normal(size=5)
        if abs(tw.quadric_form(v)) > 1e-3:
            assert not tw.is_simple(tw.omega_perp_embed(*v))
    with pytest.raises(DegenerateError):
        tw.is_simple(np.zeros((4, 4)))


def test_plane_examples():
    P = tw.plane_from_params(0, 0, 0)
    np.testing.assert_array_equal(P.basis(), [[0, 0, 0, 1], [0, 1, 0, 0]])
    P = tw.plane_from_params(1, 0, 1)
    np.testing.assert_array_equal(P.Y1, (1, 0, 1, 1))
    assert tw.symplectic_form(P.Y1, P.Y2) == 0.0
    with pytest.raises(DegenerateError):
        tw.LagrangianPlane((1, 0, 0, 0), (0, 0, 0, 1))
    with pytest.raises(DegenerateError):
        tw.LagrangianPlane((1, 0, 0, 0), (2, 0, 0, 0))


@settings(max_examples=100, deadline=None)
@given(reals, reals, reals)
def test_plane_bivector_is_quadric_point(xi, eta, zeta):
    P = tw.plane_from_params(xi, eta, zeta)
    assert abs(tw.symplectic_form(P.Y1, P.Y2)) <= 1e-12
    expected = tw.omega_perp_embed(xi, eta, zeta, xi * xi + eta * eta - zeta * zeta, 1.0)
    B = P.bivector
    # proportional, and the factor is fixed by the e4^e2 entry
    lam = B[3, 1] / expected[3, 1]
    np.testing.assert_allclose(B, lam * expected, atol=1e-12 * max(1.0, np.max(np.abs(B))))


@settings(max_examples=100, deadline=None)
@given(st.tuples(reals, reals, reals), st.tuples(reals, reals, reals))
def test_plane_incidence_is_null_separation(a, b):
    P1, P2 = tw.plane_from_params(*a), tw.plane_from_params(*b)
    d = np.subtract(a, b)
    interval = d[0] ** 2 + d[1] ** 2 - d[2] ** 2
    Y = [*P1.basis(), *P2.basis()]
    assert tw.wedge4(*Y) == pytest.approx(interval, abs=1e-9 * max(1.0, np.max(np.abs(Y)) ** 4))


def test_plane_intersection_examples():
    O = tw.plane_from_params(0, 0, 0)
    assert tw.planes_intersect_in_line(O, tw.plane_from_params(1, 0, 1))
    assert not tw.planes_intersect_in_line(O, tw.plane_from_params(1, 0, 0))
    assert tw.planes_intersect_in_line(O, O)


def test_lines_in_planes():
    P = tw.plane_from_params(0.3, -0.2, 0.5)
    assert tw.line_in_plane(np.add(P.Y1, np.multiply(3, P.Y2)), P)
    assert not tw.line_in_plane((1, 0, 0, 0), tw.plane_from_params(0, 0, 0))
    assert tw.lines_in_plane_dimension(P) == 2
    with pytest.raises(DegenerateError):
        tw.line_in_plane((0, 0, 0, 0), P)


def test_induced_action_examples():
    np.testing.assert_array_equal(tw.induced_quadric_action(np.eye(4)), np.eye(5))
    assert np.max(np.abs(tw.induced_quadric_action(-np.eye(4)) - np.eye(5))) <= 1e-15
    D = np.diag([2.0, 3.0, 1 / 3, 1 / 2])
    M = tw.induced_quadric_action(D)
    rng = np.random.default_rng(32)
    for v in rng.normal(size=(100, 5)):
        assert abs(tw.quadric_form(M @ v) - tw.quadric_form(v)) <= 1e-12 * max(1.0, abs(tw.quadric_form(v)))
    with pytest.raises(NotSymplecticError):
        tw.induced_quadric_action(np.diag([2.0, 1.0, 1.0, 1.0]))
    with pytest.raises(NotSymplecticError):
        tw.check_symplectic(np.eye(3))


def test_homomorphism_and_q_preservation():
    rng = np.random.default_rng(33)
    for _ in range(50):
        A, B = tw.random_symplectic(rng), tw.random_symplectic(rng)
        assert tw.check_symplectic(A) is not None
        MA, MB = tw.induced_quadric_action(A), tw.induced_quadric_action(B)
        assert np.max(np.abs(tw.induced_quadric_action(A @ B) - MA @ MB)) <= 1e-10
        assert tw.q_preservation_residual(MA) <= 1e-10
        # A and -A act alike
        assert np.max(np.abs(tw.induced_quadric_action(-A) - MA)) <= 1e-12


def test_action_moves_planes_to_planes():
    rng = np.random.default_rng(34)
    P = tw.plane_from_params(0.4, 0.1, -0.3)
    A = tw.random_symplectic(rng)
    image = tw.LagrangianPlane(tuple(A @ P.basis()[0]), tuple(A @ P.basis()[1]))
    got = tw.bivector_coordinates(image.bivector)
    expected = tw.induced_quadric_action(A) @ np.array(tw.bivector_coordinates(P.bivector))
    np.testing.assert_allclose(got, expected, atol=1e-12)


def test_stabilizer_dimensions():
    O = tw.plane_from_params(0, 0, 0)
    e4 = np.array([0.0, 0.0, 0.0, 1.0])
    assert tw.stabilizer_dimension(O) == 7
    assert tw.stabilizer_dimension(e4) == 7
    assert tw.stabilizer_dimension((e4, O)) == 6
    with pytest.raises(DegenerateError):
        tw.stabilizer_dimension(np.zeros(4))
    with pytest.raises(DegenerateError):
        tw.stabilizer_dimension((np.array([1.0, 0, 0, 0]), O))


def test_stabilizer_dimensions_are_conjugation_invariant():
    rng = np.random.default_rng(35)
    O = tw.plane_from_params(0, 0, 0)
    for _ in range(5):
        A = tw.random_symplectic(rng, 0.3)
        P = tw.LagrangianPlane(tuple(A @ O.Y1), tuple(A @ O.Y2))
        v = A @ np.array([0.0, 0.0, 0.0, 1.0])
        assert (tw.stabilizer_dimension(P), tw.stabilizer_dimension(v), tw.stabilizer_dimension((v, P))) == (7, 7, 6)


def test_stabilizer_of_e4_matches_exact_nullspace():
    # sympy oracle: {a : E(a) e4 is parallel to e4}
    from cargeom import sp2r

    a = sp.symbols("a1:11")
    v = sp2r.generic_element(a) * sp.Matrix([0, 0, 0, 1])
    eqs = [v[i] for i in range(3)]
    M = sp.Matrix([[sp.diff(e, s) for s in a] for e in eqs])
    assert 10 - M.rank() == tw.stabilizer_dimension(np.array([0.0, 0, 0, 1]))


def test_exact_inputs_stay_exact():
    Y = tw.omega_perp_embed(Fraction(1, 3), 2, 0, Fraction(-1, 2), 1)
    assert Y.dtype == object
    assert isinstance(tw.wedge_square_coeff(Y), Fraction)
    assert tw.omega_perp_embed(0.5, 0, 0, 0, 0).dtype == float
