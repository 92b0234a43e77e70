"""Independent symbolic reference implementations built on sympy.

These share no code with the jet machinery: brackets come from ``sympy.diff``
and are evaluated through ``lambdify``.
"""

import functools

import numpy as np
import sympy as sp

x, y, a, b = sp.symbols("x y alpha beta")
COORDS = (x, y, a, b)
ell = sp.Symbol("ell", positive=True)


def car_fields_sym():
    X3 = sp.Matrix([0, 0, 0, 1])
    X4 = sp.Matrix([ell * sp.cos(b) * sp.cos(a), ell * sp.cos(b) * sp.sin(a), -sp.sin(b), 0])
    return X3, X4


def generators_sym():
    s, c = sp.sin(a), sp.cos(a)
    sb, cb = sp.sin(b), sp.cos(b)
    r2 = x**2 + y**2
    S = [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [-y, x, 1, 0],
        [ell * s, -ell * c, 0, sb**2],
        [x, y, 0, -sb * cb],
        [x**2 - y**2, 2 * x * y, 2 * y, -2 * cb * (ell * cb * s + x * sb)],
        [ell * x * s, -ell * x * c, -ell * c, sb * (ell * cb * s + x * sb)],
        [ell * y * s, -ell * y * c, -ell * s, -sb * (ell * cb * c - y * sb)],
        [2 * x * y, y**2 - x**2, -2 * x, 2 * cb * (ell * cb * c - y * sb)],
        [
            ell * r2 * s,
            -ell * r2 * c,
            -2 * ell * (x * c + y * s),
            2 * ell * sb * cb * (x * s - y * c) + sb**2 * r2 + 2 * ell**2 * cb**2,
        ],
    ]
    return [sp.Matrix(v) for v in S]


def bracket_sym(X, Y):
    JX = X.jacobian(COORDS)
    JY = Y.jacobian(COORDS)
    return JY * X - JX * Y


@functools.lru_cache(maxsize=None)
def generator_bracket_functions(length):
    """Numeric callables ``(i, j) -> f(point) -> [S_i, S_j](point)`` for a fixed wheelbase."""
    S = [g.subs(ell, length) for g in generators_sym()]
    out = {}
    for i in range(10):
        for j in range(i + 1, 10):
            out[i, j] = sp.lambdify([COORDS], list(bracket_sym(S[i], S[j])), "numpy")
    gens = [sp.lambdify([COORDS], list(g), "numpy") for g in S]
    return out, gens


def values(fn, point):
    return np.array(fn(tuple(point)), dtype=float)
