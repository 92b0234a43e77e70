"""Truncated multivariate Taylor expansions ("jets") in four variables.

A :class:`Jet` of order ``k`` at a base point ``x0`` stores the Taylor
coefficients ``c_m`` of ``f(x0 + h) = sum_m c_m h^m`` for every multi-index
``m`` of total degree ``<= k``. Coefficients are kept dense over a graded
monomial basis (70 monomials at order 4), and products are evaluated with a
precomputed index table, so every operation is a handful of numpy calls.

Partial derivatives are read off with :meth:`Jet.partial`:
``d^|m| f / dx^m = c_m * prod(m_i!)``.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import DomainError, PoleError

NVARS = 4
MAX_ORDER = 4

# |value| below which a divisor counts as zero
DIV_EPS = np.finfo(float).eps
# |cos| below which tan/sec are treated as being at a pole
TRIG_POLE_EPS = 1e-12


def _build_tables():
    monomials = []
    for degree in range(MAX_ORDER + 1):
        level = [m for m in itertools.product(range(degree + 1), repeat=NVARS) if sum(m) == degree]
        monomials.extend(sorted(level, reverse=True))
    index = {m: i for i, m in enumerate(monomials)}
    sizes = [sum(1 for m in monomials if sum(m) <= k) for k in range(MAX_ORDER + 1)]

    products = []
    for k in range(MAX_ORDER + 1):
        ii, jj, kk = [], [], []
        for i in range(sizes[k]):
            for j in range(sizes[k]):
                m = tuple(a + b for a, b in zip(monomials[i], monomials[j]))
                if sum(m) <= k:
                    ii.append(i)
                    jj.append(j)
                    kk.append(index[m])
        products.append((np.array(ii), np.array(jj), np.array(kk)))

    derivs = [None]
    for k in range(1, MAX_ORDER + 1):
        per_var = []
        for v in range(NVARS):
            src, fac = [], []
            for m in monomials[: sizes[k - 1]]:
                up = list(m)
                up[v] += 1
                src.append(index[tuple(up)])
                fac.append(m[v] + 1)
            per_var.append((np.array(src), np.array(fac, dtype=float)))
        derivs.append(per_var)

    factorials = np.array([math.prod(math.factorial(e) for e in m) for m in monomials], dtype=float)
    return tuple(monomials), index, sizes, products, derivs, factorials


MONOMIALS, MONOMIAL_INDEX, SIZES, _PRODUCTS, _DERIVS, _FACTORIALS = _build_tables()
_LINEAR_INDEX = np.array([MONOMIAL_INDEX[tuple(int(v == j) for v in range(NVARS))] for j in range(NVARS)])


def n_coefficients(order):
    """Number of monomials of total degree ``<= order`` in four variables."""
    return SIZES[order]


def _check_order(order):
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"jet order must be in 0..{MAX_ORDER}, got {order}")


class Jet:
    """Order-``k`` Taylor expansion of a scalar field about ``point``."""

    __slots__ = ("coeffs", "order", "point")
    __array_priority__ = 100  # make numpy scalars defer to Jet's reflected ops

    def __init__(self, coeffs, order, point):
        _check_order(order)
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (SIZES[order],):
            raise ValueError(f"order-{order} jet needs {SIZES[order]} coefficients, got {coeffs.shape}")
        self.coeffs = coeffs
        self.order = order
        self.point = tuple(float(v) for v in point)

    @classmethod
    def constant(cls, value, point, order):
        _check_order(order)
        c = np.zeros(SIZES[order])
        c[0] = value
        return cls(c, order, point)

    @classmethod
    def variable(cls, index, point, order):
        _check_order(order)
        c = np.zeros(SIZES[order])
        c[0] = point[index]
        if order >= 1:
            e = [0] * NVARS
            e[index] = 1
            c[MONOMIAL_INDEX[tuple(e)]] = 1.0
        return cls(c, order, point)

    # -- access -------------------------------------------------------------

    @property
    def value(self):
        return float(self.coeffs[0])

    def coeff(self, multi_index):
        multi_index = tuple(multi_index)
        if sum(multi_index) > self.order:
            raise ValueError(f"monomial {multi_index} exceeds jet order {self.order}")
        return float(self.coeffs[MONOMIAL_INDEX[multi_index]])

    def partial(self, multi_index):
        """Mixed partial derivative ``d^|m| f / dx^m`` at the base point."""
        multi_index = tuple(multi_index)
        if sum(multi_index) > self.order:
            raise ValueError(f"monomial {multi_index} exceeds jet order {self.order}")
        i = MONOMIAL_INDEX[multi_index]
        return float(self.coeffs[i] * _FACTORIALS[i])

    def gradient(self):
        if self.order < 1:
            raise ValueError("gradient needs an order >= 1 jet")
        return self.coeffs[_LINEAR_INDEX].copy()

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot raise jet order {self.order} to {order}")
        if order == self.order:
            return self
        return Jet(self.coeffs[: SIZES[order]], order, self.point)

    def deriv(self, var):
        """Jet of ``df/dx_var``; the order drops by one."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        src, fac = _DERIVS[self.order][var]
        return Jet(self.coeffs[src] * fac, self.order - 1, self.point)

    def __repr__(self):
        return f"Jet(order={self.order}, point={self.point}, value={self.value:.6g})"

    # -- arithmetic ---------------------------------------------------------

    def _align(self, other):
        if isinstance(other, Jet):
            if other.point != self.point:
                raise ValueError("jets are expanded about different points")
            k = min(self.order, other.order)
            return self.truncate(k), other.truncate(k)
        return self, Jet.constant(float(other), self.point, self.order)

    def __add__(self, other):
        a, b = self._align(other)
        return Jet(a.coeffs + b.coeffs, a.order, a.point)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._align(other)
        return Jet(a.coeffs - b.coeffs, a.order, a.point)

    def __rsub__(self, other):
        a, b = self._align(other)
        return Jet(b.coeffs - a.coeffs, a.order, a.point)

    def __neg__(self):
        return Jet(-self.coeffs, self.order, self.point)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs * float(other), self.order, self.point)
        a, b = self._align(other)
        ii, jj, kk = _PRODUCTS[a.order]
        out = np.bincount(kk, weights=a.coeffs[ii] * b.coeffs[jj], minlength=SIZES[a.order])
        return Jet(out, a.order, a.point)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            other = float(other)
            if abs(other) < DIV_EPS:
                raise PoleError("division by zero constant")
            return Jet(self.coeffs / other, self.order, self.point)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * float(other)

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)):
            raise TypeError("jets support integer powers only")
        n = int(n)
        if n < 0:
            return (self ** (-n)).reciprocal()
        result = Jet.constant(1.0, self.point, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- elementary functions -----------------------------------------------

    def _compose(self, taylor):
        """``g(self)`` given the Taylor coefficients ``g^(n)(u0)/n!`` of ``g``."""
        h = Jet(self.coeffs.copy(), self.order, self.point)
        h.coeffs[0] = 0.0
        result = Jet.constant(taylor[self.order], self.point, self.order)
        for n in range(self.order - 1, -1, -1):
            result = result * h
            result.coeffs[0] += taylor[n]
        return result

    def reciprocal(self):
        u0 = self.value
        if abs(u0) < DIV_EPS:
            raise PoleError(f"division by {u0!r}")
        return self._compose([(-1) ** n / u0 ** (n + 1) for n in range(self.order + 1)])

    def sin(self):
        u0 = self.value
        return self._compose([math.sin(u0 + n * math.pi / 2) / math.factorial(n) for n in range(self.order + 1)])

    def cos(self):
        u0 = self.value
        return self._compose([math.cos(u0 + n * math.pi / 2) / math.factorial(n) for n in range(self.order + 1)])

    def _cos_guarded(self, name):
        c = self.cos()
        if abs(c.value) < TRIG_POLE_EPS:
            raise PoleError(f"{name} pole at argument {self.value!r}")
        return c

    def tan(self):
        c = self._cos_guarded("tan")
        return self.sin() * c.reciprocal()

    def sec(self):
        return self._cos_guarded("sec").reciprocal()

    def sqrt(self):
        u0 = self.value
        if u0 < 0:
            raise DomainError(f"sqrt of negative value {u0!r}")
        if u0 == 0:
            if self.order == 0:
                return Jet.constant(0.0, self.point, 0)
            raise PoleError("sqrt is not differentiable at 0")
        coeffs = []
        binom = 1.0
        for n in range(self.order + 1):
            coeffs.append(binom * u0 ** (0.5 - n))
            binom *= (0.5 - n) / (n + 1)
        return self._compose(coeffs)
