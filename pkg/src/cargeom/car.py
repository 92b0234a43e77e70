"""Kinematic car on the configuration space (x, y, alpha, beta).

``(x, y)`` is the rear-axle midpoint, ``alpha`` the heading of the body and
``beta`` the front-wheel angle relative to the body; ``length`` is the
wheelbase. Admissible velocities are spanned by

    X3 = d_beta                                    (steer)
    X4 = -sin(b) d_alpha + l cos(b) (cos(a) d_x + sin(a) d_y)   (gas)

with the brackets ``X2 = [X3, X4]`` and ``X1 = [X4, X2]`` completing a frame.

Sign convention for the gas flow: with unit control the heading obeys
``alpha' = -sin(beta)``, so a turn of ``phi`` radians takes time
``phi / |sin(beta)|``; negative durations drive backwards.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .distribution import SplitDistribution, VectorField, flow
from .errors import DegenerateError, OffsetTooLargeError, PreconditionError

CHART = ("x", "y", "alpha", "beta")
STRAIGHT_EPS = 1e-12


@dataclass(frozen=True)
class CarParams:
    length: float = 1.0

    def __post_init__(self):
        if not self.length > 0:
            raise PreconditionError(f"car length must be positive, got {self.length}")


@dataclass(frozen=True)
class CarConfig:
    x: float
    y: float
    alpha: float
    beta: float

    def as_array(self):
        return np.array([self.x, self.y, self.alpha, self.beta])

    @classmethod
    def from_array(cls, q):
        return cls(*(float(v) for v in q))

    def close_to(self, other, tol=1e-9):
        """Compare with angles reduced mod 2 pi."""
        d = self.as_array() - CarConfig.from_array(other).as_array()
        d[2:] = (d[2:] + math.pi) % (2 * math.pi) - math.pi
        return bool(np.max(np.abs(d)) <= tol)


def _as_point(q):
    if isinstance(q, CarConfig):
        return q.as_array()
    return np.asarray(q, dtype=float)


def car_fields(params=CarParams()):
    """The frame ``(X1, X2, X3, X4)`` as vector fields over ``(x, y, alpha, beta)``."""
    L = repr(float(params.length))
    X1 = VectorField.from_components(CHART, [f"-{L}*sin(alpha)", f"{L}*cos(alpha)", 0, 0])
    X2 = VectorField.from_components(
        CHART, [f"-{L}*sin(beta)*cos(alpha)", f"-{L}*sin(beta)*sin(alpha)", "-cos(beta)", 0]
    )
    X3 = VectorField.from_components(CHART, [0, 0, 0, 1])
    X4 = VectorField.from_components(
        CHART, [f"{L}*cos(beta)*cos(alpha)", f"{L}*cos(beta)*sin(alpha)", "-sin(beta)", 0]
    )
    return X1, X2, X3, X4


def car_split(params=CarParams()):
    """The car distribution split into steering (``Dw``) and gas (``Dg``) lines."""
    _, _, X3, X4 = car_fields(params)
    return SplitDistribution(Dw=X3, Dg=X4)


def frame_matrix(q, params=CarParams()):
    """4x4 matrix whose columns are X1..X4 at ``q``."""
    x, y, a, b = _as_point(q)
    L = params.length
    ca, sa, cb, sb = math.cos(a), math.sin(a), math.cos(b), math.sin(b)
    return np.array(
        [
            [-L * sa, -L * sb * ca, 0.0, L * cb * ca],
            [L * ca, -L * sb * sa, 0.0, L * cb * sa],
            [0.0, -cb, 0.0, -sb],
            [0.0, 0.0, 1.0, 0.0],
        ]
    )


def car_coframe(q, params=CarParams()):
    """Rows are omega^1..omega^4 in the cobasis (dx, dy, dalpha, dbeta), dual to X1..X4."""
    x, y, a, b = _as_point(q)
    L = params.length
    ca, sa, cb, sb = math.cos(a), math.sin(a), math.cos(b), math.sin(b)
    return np.array(
        [
            [-sa / L, ca / L, 0.0, 0.0],
            [-sb * ca / L, -sb * sa / L, -cb, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [cb * ca / L, cb * sa / L, -sb, 0.0],
        ]
    )


def integral_curve_X4(q0, t, params=CarParams()):
    """Closed-form point at time ``t`` on the unit-control flow of X4 from ``q0``.

    Constant ``beta``: a circle of signed radius ``l cot(beta)`` traversed with
    ``alpha = alpha0 - t sin(beta)``; a straight line when ``beta = 0``.
    """
    x0, y0, a0, b0 = _as_point(q0)
    L = params.length
    sb = math.sin(b0)
    if abs(sb) <= STRAIGHT_EPS:
        s = t * L * math.cos(b0)
        return CarConfig(x0 + s * math.cos(a0), y0 + s * math.sin(a0), a0, b0)
    R = L * math.cos(b0) / sb
    a = a0 - t * sb
    return CarConfig(x0 - R * (math.sin(a) - math.sin(a0)), y0 + R * (math.cos(a) - math.cos(a0)), a, b0)


def helix_axis_and_radius(q0, params=CarParams()):
    """Centre ``(cx, cy)`` of the rear-wheel circle and its signed radius ``l cot(beta)``."""
    x0, y0, a0, b0 = _as_point(q0)
    sb = math.sin(b0)
    if abs(sb) <= STRAIGHT_EPS:
        raise DegenerateError("beta = 0: the rear wheels move on a straight line")
    R = params.length * math.cos(b0) / sb
    if abs(R) < 1e-15:
        R = 0.0
    return (x0 + R * math.sin(a0), y0 - R * math.cos(a0)), R


# -- maneuvers -------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    kind: str  # "steer" (flow of X3) or "gas" (flow of X4)
    duration: float

    def __post_init__(self):
        if self.kind not in ("steer", "gas"):
            raise ValueError(f"segment kind must be 'steer' or 'gas', got {self.kind!r}")
        if not math.isfinite(self.duration):
            raise ValueError("segment duration must be finite")


@dataclass(frozen=True)
class Maneuver:
    segments: tuple = ()
    predicted_end: CarConfig | None = None
    drift: float = 0.0  # longitudinal displacement along the initial heading
    sweep: float = 0.0  # arc angle phi of each of the two turning arcs

    def __len__(self):
        return len(self.segments)


def max_parking_offset(params, beta0):
    """Largest lateral offset reachable with two quarter-circle arcs: ``2 l cot(beta0)``."""
    return 2.0 * params.length / math.tan(beta0)


def plan_parallel_park(q_init, offset, params=CarParams(), beta0=math.pi / 4, advance=None):
    """Plan a sideways move by ``offset`` (positive = to the right of the heading).

    The car reverses along two arcs of equal sweep ``phi`` with opposite wheel
    angles ``+-beta0``; each arc shifts it sideways by ``R (1 - cos phi)`` and
    backwards by ``R sin phi`` with ``R = l cot(beta0)``. The wheels start and
    end straight. The net longitudinal drift ``-2 R sin(phi)`` is reported as
    ``Maneuver.drift``; if ``advance`` is given, a final straight gas segment
    brings the net longitudinal displacement to ``advance``.
    """
    q = CarConfig.from_array(_as_point(q_init))
    if abs(q.beta) > 1e-12:
        raise PreconditionError("parking starts with straight wheels (beta = 0)")
    if not 0.0 < beta0 < math.pi / 2:
        raise PreconditionError(f"beta0 must lie in (0, pi/2), got {beta0}")
    L = params.length
    R = L / math.tan(beta0)
    limit = 2.0 * R
    if abs(offset) > limit:
        raise OffsetTooLargeError(f"offset {offset} exceeds the two-arc limit {limit}")

    segments = []
    drift = 0.0
    phi = 0.0
    if offset != 0.0:
        phi = math.acos(1.0 - abs(offset) / (2.0 * R))
        # mirror the wheel angles to shift left instead of right
        b = beta0 if offset > 0 else -beta0
        back = -phi / math.sin(beta0)
        segments = [
            Segment("steer", b),
            Segment("gas", back),
            Segment("steer", -2.0 * b),
            Segment("gas", back),
            Segment("steer", b),
        ]
        drift = -2.0 * R * math.sin(phi)
    if advance is not None and advance != drift:
        segments.append(Segment("gas", (advance - drift) / L))
        drift = float(advance)

    ca, sa = math.cos(q.alpha), math.sin(q.alpha)
    end = CarConfig(
        q.x + drift * ca + offset * sa,
        q.y + drift * sa - offset * ca,
        q.alpha,
        0.0,
    )
    return Maneuver(tuple(segments), end, drift, phi)


@dataclass
class Trajectory:
    t: np.ndarray
    q: np.ndarray  # shape (n, 4)
    segment_start: list = field(default_factory=list)  # row index where each segment begins

    @property
    def end(self):
        return CarConfig.from_array(self.q[-1])


def execute_maneuver(q0, maneuver, params=CarParams(), steps=200):
    """Integrate each segment with RK4 and concatenate the pieces."""
    if steps < 1:
        raise PreconditionError("steps must be >= 1")
    _, _, X3, X4 = car_fields(params)
    fields = {"steer": X3, "gas": X4}
    q = _as_point(q0).astype(float)
    ts, qs, starts = [np.array([0.0])], [q[None, :]], []
    t = 0.0
    segments = maneuver.segments if isinstance(maneuver, Maneuver) else tuple(maneuver)
    for seg in segments:
        starts.append(sum(len(a) for a in ts) - 1)
        path = flow(fields[seg.kind], q, seg.duration, steps)
        ts.append(t + np.abs(seg.duration) * np.arange(1, steps + 1) / steps)
        qs.append(path[1:])
        t += abs(seg.duration)
        q = path[-1]
    return Trajectory(np.concatenate(ts), np.vstack(qs), starts)


def constraint_residuals(q, params=CarParams()):
    """Rear and front no-skid residuals ``(rear, front)``, one entry per step of ``q``.

    Velocities are chord differences between consecutive rows, paired with the
    angles at the chord midpoint and divided by the chord length. On a
    constant-beta arc both wheel points move on circles, so the chord is
    exactly parallel to the midpoint tangent and the residual is pure rounding.
    The divisor never drops below ``sqrt(eps) (1 + |(x, y)|)``.

    rear:  x' sin(a) - y' cos(a)
    front: d/dt(x + l cos a, y + l sin a) parallel to (cos(a - b), sin(a - b))
    """
    q = np.asarray(q, dtype=float)
    if len(q) < 2:
        return np.zeros(0), np.zeros(0)
    L = params.length
    d = np.diff(q, axis=0)
    a_mid = 0.5 * (q[:-1, 2] + q[1:, 2])
    b_mid = 0.5 * (q[:-1, 3] + q[1:, 3])
    # chords shorter than the rounding floor of the coordinates are measured absolutely
    floor = math.sqrt(np.finfo(float).eps) * (1.0 + np.max(np.abs(q[:, :2]), axis=1))[1:]
    scale = np.maximum(np.linalg.norm(d, axis=1), floor)
    rear = (d[:, 0] * np.sin(a_mid) - d[:, 1] * np.cos(a_mid)) / scale
    fx = d[:, 0] + L * (np.cos(q[1:, 2]) - np.cos(q[:-1, 2]))
    fy = d[:, 1] + L * (np.sin(q[1:, 2]) - np.sin(q[:-1, 2]))
    front = (fx * np.sin(a_mid - b_mid) - fy * np.cos(a_mid - b_mid)) / scale
    return rear, front


def write_csv(target, trajectory):
    """Write ``t,x,y,alpha,beta`` rows with 17 significant digits to a path or open text file."""
    if hasattr(target, "write"):
        _write_rows(target, trajectory)
        return
    with open(target, "w", newline="") as fh:
        _write_rows(fh, trajectory)


def _write_rows(fh, trajectory):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", "x", "y", "alpha", "beta"])
    for t, row in zip(trajectory.t, trajectory.q):
        w.writerow(["%.17g" % v for v in (t, *row)])
