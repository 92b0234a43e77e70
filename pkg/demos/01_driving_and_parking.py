"""
Driving a car and parallel parking
==================================

A car is a point (x, y, alpha, beta): the rear-axle midpoint, the heading
and the steering angle. Only two motions are available: turn the wheel
(the field X3) and drive (the field X4). Their brackets fill out all four
directions, which is why a car can park sideways at all.
"""

import math

import numpy as np

from cargeom import CarParams, car_fields, car_split, derived_flag_ranks
from cargeom.car import constraint_residuals, execute_maneuver, integral_curve_X4, plan_parallel_park
from cargeom.distribution import flow

params = CarParams(length=1.0)
X1, X2, X3, X4 = car_fields(params)

# the growth vector: 2 directions, then 3 after one bracket, then all 4
D = car_split(params)
q = np.array([0.3, -1.2, 0.7, 0.4])
print("growth vector at", q, "->", derived_flag_ranks(D, q))

# %%
# Driving with the wheel held at 45 degrees traces a circle of radius
# l cot(beta). One full turn takes 2 pi / sin(beta) time units.
start = (0.0, 0.0, 0.0, math.pi / 4)
T = 2 * math.pi / math.sin(math.pi / 4)
path = flow(X4, start, T, 2000)
print("after one turn, rear axle is back at", path[-1][:2].round(8))
print("closed form after t = 1:", integral_curve_X4(start, 1.0, params))

# %%
# Parallel parking half a car length to the right: steer, reverse,
# counter-steer, reverse, straighten.
maneuver = plan_parallel_park((0.0, 0.0, 0.0, 0.0), 0.5, params)
for seg in maneuver.segments:
    print(f"  {seg.kind:5s} for {seg.duration:+.4f}")
traj = execute_maneuver((0.0, 0.0, 0.0, 0.0), maneuver, params, steps=400)
print("predicted end:", maneuver.predicted_end)
print("reached end:  ", traj.end)
rear, front = constraint_residuals(traj.q, params)
print("worst wheel skid along the way: %.2e" % max(np.max(np.abs(rear)), np.max(np.abs(front))))
