import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cargeom.car import (
    CarConfig,
    CarParams,
    Segment,
    Trajectory,
    car_coframe,
    car_fields,
    constraint_residuals,
    execute_maneuver,
    frame_matrix,
    helix_axis_and_radius,
    integral_curve_X4,
    max_parking_offset,
    plan_parallel_park,
    write_csv,
)
from cargeom.distribution import flow, lie_bracket
from cargeom.errors import DegenerateError, OffsetTooLargeError, PreconditionError
from cargeom.symmetries import random_configs

config = st.tuples(
    st.floats(-2, 2), st.floats(-2, 2), st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi)
)
lengths = st.sampled_from([0.5, 1.0, 2.0])


def test_fields_at_reference_points():
    X1, X2, X3, X4 = car_fields(CarParams(1.0))
    np.testing.assert_allclose(X4((0, 0, 0, 0)), [1, 0, 0, 0])
    np.testing.assert_allclose(X3((0, 0, 0, 0)), [0, 0, 0, 1])
    np.testing.assert_allclose(X4((0, 0, 0, math.pi / 2)), [0, 0, -1, 0], atol=1e-16)


def test_x4_x2_bracket_is_x1():
    X1, X2, _, X4 = car_fields(CarParams(1.5))
    for q in random_configs(np.random.default_rng(5), 30):
        np.testing.assert_allclose(lie_bracket(X4, X2, q), X1(q), atol=1e-10)


def test_frame_matrix_matches_fields():
    P = CarParams(0.7)
    fields = car_fields(P)
    for q in random_configs(np.random.default_rng(6), 10):
        np.testing.assert_allclose(frame_matrix(q, P), np.column_stack([X(q) for X in fields]), atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(config, lengths)
def test_frame_volume(q, L):
    assert abs(np.linalg.det(frame_matrix(q, CarParams(L))) / L**2 - 1.0) <= 1e-10


@settings(max_examples=100, deadline=None)
@given(config, lengths)
def test_coframe_is_dual(q, L):
    P = CarParams(L)
    np.testing.assert_allclose(car_coframe(q, P) @ frame_matrix(q, P), np.eye(4), atol=1e-14)
    np.testing.assert_array_equal(car_coframe(q, P)[2], [0, 0, 0, 1])


def test_coframe_at_origin():
    np.testing.assert_allclose(
        car_coframe((0, 0, 0, 0)), [[0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0]], atol=1e-16
    )


def test_params_validation():
    with pytest.raises(PreconditionError):
        CarParams(0.0)
    with pytest.raises(PreconditionError):
        CarParams(-1.0)


def test_integral_curve_examples():
    q = integral_curve_X4((1, 2, 0.3, 0), 2.0, CarParams(1.5)).as_array()
    np.testing.assert_allclose(q, [1 + 3 * math.cos(0.3), 2 + 3 * math.sin(0.3), 0.3, 0])
    q = integral_curve_X4((0, 0, 0, math.pi / 2), 1.25).as_array()
    np.testing.assert_allclose(q, [0, 0, -1.25, math.pi / 2], atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(config, st.floats(-3, 3), lengths)
def test_integral_curve_matches_flow(q0, t, L):
    P = CarParams(L)
    _, _, _, X4 = car_fields(P)
    end = flow(X4, q0, t, 400)[-1]
    np.testing.assert_allclose(end, integral_curve_X4(q0, t, P).as_array(), atol=1e-8)


def test_helix_axis():
    (cx, cy), R = helix_axis_and_radius((0, 0, 0, math.pi / 4))
    assert R == pytest.approx(1.0)
    assert (cx, cy) == pytest.approx((0.0, -1.0))
    # the rear wheel keeps its distance to the centre along the flow
    for t in np.linspace(0, 5, 7):
        q = integral_curve_X4((0, 0, 0, math.pi / 4), t)
        assert math.hypot(q.x - cx, q.y - cy) == pytest.approx(abs(R))
    (_, _), R = helix_axis_and_radius((0, 0, 0, math.pi / 2))
    assert R == 0.0
    with pytest.raises(DegenerateError):
        helix_axis_and_radius((0, 0, 0, 0))


def test_config_comparison_mod_two_pi():
    assert CarConfig(0, 0, math.pi, 0).close_to((0, 0, -math.pi, 0))
    assert not CarConfig(0, 0, 0, 0).close_to((1e-3, 0, 0, 0))


def test_parallel_park_reference_case():
    P = CarParams(1.0)
    m = plan_parallel_park(CarConfig(0, 0, 0, 0), 0.5, P, math.pi / 4)
    assert [s.kind for s in m.segments] == ["steer", "gas", "steer", "gas", "steer"]
    traj = execute_maneuver((0, 0, 0, 0), m, P, 400)
    np.testing.assert_allclose(traj.q[-1], m.predicted_end.as_array(), atol=1e-6)
    assert m.predicted_end.y == pytest.approx(-0.5)
    rear, front = constraint_residuals(traj.q, P)
    assert np.max(np.abs(rear)) <= 1e-8 and np.max(np.abs(front)) <= 1e-8


@settings(max_examples=15, deadline=None)
@given(
    st.floats(-1.9, 1.9),
    st.sampled_from([0.5, 1.0, 2.0]),
    st.floats(0.2, 1.3),
    st.floats(-math.pi, math.pi),
    st.one_of(st.none(), st.floats(-1, 1)),
)
def test_parking_reaches_prediction(frac, L, beta0, alpha0, advance):
    P = CarParams(L)
    offset = frac / 2 * max_parking_offset(P, beta0)
    q0 = CarConfig(0.3, -0.2, alpha0, 0.0)
    m = plan_parallel_park(q0, offset, P, beta0, advance)
    traj = execute_maneuver(q0, m, P, 200)
    assert m.predicted_end.close_to(traj.q[-1], 1e-6)
    assert traj.end.beta == pytest.approx(0.0, abs=1e-12)
    rear, front = constraint_residuals(traj.q, P)
    assert np.max(np.abs(rear), initial=0.0) <= 1e-8 and np.max(np.abs(front), initial=0.0) <= 1e-8
    if advance is not None:
        assert m.drift == pytest.approx(advance)


def test_parking_edge_cases():
    m = plan_parallel_park((0, 0, 0, 0), 0.0)
    assert len(m) == 0 and m.predicted_end.close_to((0, 0, 0, 0))
    with pytest.raises(OffsetTooLargeError):
        plan_parallel_park((0, 0, 0, 0), 1e9)
    with pytest.raises(PreconditionError):
        plan_parallel_park((0, 0, 0, 0.1), 0.5)
    with pytest.raises(PreconditionError):
        plan_parallel_park((0, 0, 0, 0), 0.5, beta0=math.pi / 2)


def test_parking_left_is_mirror_of_right():
    P = CarParams(1.0)
    right = execute_maneuver((0, 0, 0, 0), plan_parallel_park((0, 0, 0, 0), 0.4, P), P, 100).q
    left = execute_maneuver((0, 0, 0, 0), plan_parallel_park((0, 0, 0, 0), -0.4, P), P, 100).q
    np.testing.assert_allclose(left, right * [1, -1, -1, -1], atol=1e-14)


def test_constraints_detect_skidding():
    # sliding sideways violates the rear constraint
    q = np.array([[0, 0, 0, 0], [0, 0.1, 0, 0]], dtype=float)
    rear, _ = constraint_residuals(q)
    assert abs(rear[0]) == pytest.approx(1.0)


def test_segment_validation():
    with pytest.raises(ValueError):
        Segment("reverse", 1.0)
    with pytest.raises(ValueError):
        Segment("gas", math.inf)


def test_csv_output(tmp_path):
    traj = Trajectory(np.array([0.0, 0.5]), np.array([[0, 0, 0, 0], [0.1, 1 / 3, 0, 0]], dtype=float), [0])
    buf = io.StringIO()
    write_csv(buf, traj)
    lines = buf.getvalue().split("\n")
    assert lines[0] == "t,x,y,alpha,beta"
    assert float(lines[2].split(",")[2]) == 1 / 3
    path = tmp_path / "out.csv"
    write_csv(path, traj)
    assert path.read_bytes() == buf.getvalue().encode()
