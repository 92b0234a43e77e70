"""Nonholonomic geometry of the kinematic car.

Modules:

- ``jets``, ``expr``: truncated Taylor arithmetic and a parser for scalar fields
- ``distribution``: vector fields, Lie brackets, derived flags, flows, symmetry tests
- ``car``: the car's frame and coframe, closed-form motions, parallel parking
- ``symmetries``: the ten symmetry generators and their structure constants
- ``sp2r``: exact matrix model of sp(2,R), its grading, Killing form and parabolics
- ``ode``: the car as the ODE y''' = 3 p q^2 / (1 + p^2) and its contact invariants
- ``lie_sphere``: oriented circles as points of the Lie quadric
- ``twistor``: omega-perp bivectors, Lagrangian planes and the Sp(2,R) action
- ``cli``: the ``cargeom`` command
"""

from .car import CarConfig, CarParams, car_fields, car_split, plan_parallel_park, execute_maneuver
from .distribution import SplitDistribution, VectorField, derived_flag_ranks, is_engel, lie_bracket, flow
from .errors import CarGeomError
from .expr import ScalarFieldExpr, eval_jet, parse_expr
from .jets import Jet

__version__ = "0.1.0"

__all__ = [
    "CarConfig",
    "CarGeomError",
    "CarParams",
    "Jet",
    "ScalarFieldExpr",
    "SplitDistribution",
    "VectorField",
    "car_fields",
    "car_split",
    "derived_flag_ranks",
    "eval_jet",
    "execute_maneuver",
    "flow",
    "is_engel",
    "lie_bracket",
    "parse_expr",
    "plan_parallel_park",
]
