"""Exact matrix model of sp(2,R): basis, brackets, grading, Killing form, subalgebras.

The generic element preserving ``Omega`` (``Omega_14 = Omega_23 = 1``) is

    [[ a5,  a7,  a9, 2a10],
     [-a4,  a6,  a8,   a9],
     [ a2,  a3, -a6,  -a7],
     [-2a1, a2,  a4,  -a5]]

and ``E_I = dE/da_I``. All arithmetic is over the rationals (sympy), so the
bracket table, Killing matrix and subalgebra computations are exact.
Indices are 1-based throughout this module to match the ``E_I`` labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import sympy as sp

from .errors import ExpansionError, NotSubalgebraError

DIM = 10
INDICES = tuple(range(1, DIM + 1))

OMEGA = sp.Matrix([[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]])

GRADE = {1: -3, 2: -2, 3: -1, 4: -1, 5: 0, 6: 0, 7: 1, 8: 1, 9: 2, 10: 3}
# the two lines inside g_{-1} and g_{1}: "w" pairs with the steering direction,
# "g" with the gas direction
LINE_LABEL = {3: "w", 4: "g", 7: "w", 8: "g"}

# Nonvanishing brackets [E_I, E_J], I < J, as printed in the commutator list.
PRINTED_TABLE = {
    (1, 5): {1: 2},
    (1, 7): {2: -2},
    (1, 9): {4: -2},
    (1, 10): {5: 4},
    (2, 4): {1: 1},
    (2, 5): {2: 1},
    (2, 6): {2: 1},
    (2, 7): {3: 2},
    (2, 8): {4: 1},
    (2, 9): {5: -1, 6: -1},
    (2, 10): {7: -2},
    (3, 4): {2: -1},
    (3, 6): {3: 2},
    (3, 8): {6: -1},
    (3, 9): {7: -1},
    (4, 5): {4: 1},
    (4, 6): {4: -1},
    (4, 7): {5: 1, 6: -1},
    (4, 9): {8: -2},
    (4, 10): {9: -2},
    (5, 7): {7: 1},
    (5, 9): {9: 1},
    (5, 10): {10: 2},
    (6, 7): {7: -1},
    (6, 8): {8: 2},
    (6, 9): {9: 1},
    (7, 8): {9: 1},
    (7, 9): {10: 1},
}

# named subalgebras by spanning basis indices
NAMED = {
    "p1": (3, 5, 6, 7, 8, 9, 10),
    "p2": (4, 5, 6, 7, 8, 9, 10),
    "p12": (5, 6, 7, 8, 9, 10),
    "n12": (7, 8, 9, 10),
    "n1": (7, 9, 10),
    "n2": (8, 9, 10),
    "m": (1, 2, 3, 4),
    "q": (1, 2, 4),
    "p": (1, 2, 3),
    "g0": (5, 6),
}


def generic_element(a=None):
    """The parametrized matrix ``E(a_1, ..., a_10)`` (symbols by default)."""
    if a is None:
        a = sp.symbols("a1:11")
    a1, a2, a3, a4, a5, a6, a7, a8, a9, a10 = a
    return sp.Matrix(
        [
            [a5, a7, a9, 2 * a10],
            [-a4, a6, a8, a9],
            [a2, a3, -a6, -a7],
            [-2 * a1, a2, a4, -a5],
        ]
    )


def is_symplectic_algebra_element(E):
    return (E.T * OMEGA + OMEGA * E).is_zero_matrix


@lru_cache(maxsize=None)
def basis():
    """``(E_1, ..., E_10)`` as immutable integer matrices."""
    a = sp.symbols("a1:11")
    E = generic_element(a)
    return tuple(sp.ImmutableMatrix(E.diff(s)) for s in a)


@lru_cache(maxsize=None)
def _expansion_operator():
    B = sp.Matrix.hstack(*[sp.Matrix(e).reshape(16, 1) for e in basis()])
    if B.rank() != DIM:
        raise ExpansionError("basis matrices are linearly dependent")
    return B, (B.T * B).inv() * B.T


def expand(M):
    """Coefficients ``c`` with ``M = sum_I c_I E_I`` (exact), as a tuple indexed 0..9."""
    B, P = _expansion_operator()
    v = sp.Matrix(M).reshape(16, 1)
    c = P * v
    if not (B * c - v).is_zero_matrix:
        raise ExpansionError("matrix is not in the span of the sp(2,R) basis")
    return tuple(sp.nsimplify(x) for x in c)


@lru_cache(maxsize=None)
def commutator(i, j):
    """``[E_i, E_j]`` expanded over the basis: tuple of 10 exact coefficients."""
    if i not in INDICES or j not in INDICES:
        raise ValueError(f"basis indices run from 1 to {DIM}")
    Ei, Ej = basis()[i - 1], basis()[j - 1]
    return expand(Ei * Ej - Ej * Ei)


def commutator_dict(i, j):
    """Nonzero entries of ``[E_i, E_j]`` as ``{K: coefficient}``."""
    return {k + 1: int(c) if c.is_integer else c for k, c in enumerate(commutator(i, j)) if c != 0}


@lru_cache(maxsize=None)
def structure_constants():
    """Nested tuple ``c[i][j][k]`` (0-based) of the coefficient of E_{k+1} in [E_{i+1}, E_{j+1}]."""
    return tuple(tuple(commutator(i, j) for j in INDICES) for i in INDICES)


def structure_constants_array():
    import numpy as np

    return np.array(structure_constants(), dtype=float)


def table_mismatches():
    """Pairs ``I < J`` where the computed bracket differs from the printed list."""
    bad = []
    for i in INDICES:
        for j in INDICES:
            if i < j and commutator_dict(i, j) != PRINTED_TABLE.get((i, j), {}):
                bad.append((i, j))
    return bad


def jacobi_violations():
    """Basis triples with a nonzero Jacobi sum (exact)."""
    c = structure_constants()
    bad = []
    for i in range(DIM):
        for j in range(i + 1, DIM):
            for k in range(j + 1, DIM):
                total = [0] * DIM
                for (a, b, d) in ((i, j, k), (j, k, i), (k, i, j)):
                    for m in range(DIM):
                        if c[a][b][m] != 0:
                            for n in range(DIM):
                                total[n] += c[a][b][m] * c[m][d][n]
                if any(t != 0 for t in total):
                    bad.append((i + 1, j + 1, k + 1))
    return bad


@dataclass
class GradationReport:
    passed: bool
    pairs_checked: int
    violations: list
    dimensions: dict

    def __bool__(self):
        return self.passed


def verify_gradation():
    """Check ``[g_i, g_j] in g_{i+j}`` (and ``= 0`` when ``|i+j| > 3``) for all 49 grade pairs."""
    grades = range(-3, 4)
    members = {g: [I for I in INDICES if GRADE[I] == g] for g in grades}
    violations = []
    for gi in grades:
        for gj in grades:
            target = gi + gj
            for I in members[gi]:
                for J in members[gj]:
                    for K in commutator_dict(I, J):
                        if abs(target) > 3 or GRADE[K] != target:
                            violations.append((gi, gj, I, J, K))
    dims = {g: len(members[g]) for g in grades}
    return GradationReport(not violations, len(grades) ** 2, violations, dims)


# -- Killing form ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def killing_matrix():
    """``K_IJ = c^K_IL c^L_JK`` as an exact integer sympy matrix."""
    c = structure_constants()
    K = sp.zeros(DIM, DIM)
    for i in range(DIM):
        for j in range(DIM):
            K[i, j] = sum(c[i][l][k] * c[j][k][l] for k in range(DIM) for l in range(DIM))
    return sp.ImmutableMatrix(K)


def killing_quadratic_coefficients():
    """Coefficients of ``E^I E^J`` (``I <= J``) in the quadratic form ``K(E, E)``.

    Off-diagonal entries appear twice in ``sum_IJ K_IJ E^I E^J`` and are
    doubled here; diagonal entries are taken as they are.
    """
    K = killing_matrix()
    out = {}
    for i in range(DIM):
        for j in range(i, DIM):
            v = K[i, j] if i == j else 2 * K[i, j]
            if v != 0:
                out[(i + 1, j + 1)] = int(v)
    return out


def killing_signature():
    """``(n_plus, n_minus, n_zero)`` of the Killing matrix, from exact eigenvalues."""
    ev = killing_matrix().eigenvals()
    pos = sum(m for v, m in ev.items() if v > 0)
    neg = sum(m for v, m in ev.items() if v < 0)
    zero = sum(m for v, m in ev.items() if v == 0)
    return (int(pos), int(neg), int(zero))


# -- subalgebras -----------------------------------------------------------------------


def _bracket_vec(u, v):
    c = structure_constants()
    out = [0] * DIM
    for i, ui in enumerate(u):
        if ui == 0:
            continue
        for j, vj in enumerate(v):
            if vj == 0:
                continue
            w = ui * vj
            for k in range(DIM):
                if c[i][j][k] != 0:
                    out[k] += w * c[i][j][k]
    return out


def _rowspace(vectors):
    """Reduced row-echelon basis (list of lists) of the span of ``vectors``."""
    if not vectors:
        return []
    M = sp.Matrix(vectors)
    R, pivots = M.rref()
    return [list(R.row(r)) for r in range(len(pivots))]


@dataclass(frozen=True)
class Subalgebra:
    """A linear subspace of sp(2,R) given by a reduced basis of coefficient rows."""

    rows: tuple

    @classmethod
    def span(cls, vectors):
        return cls(tuple(tuple(r) for r in _rowspace([list(v) for v in vectors])))

    @classmethod
    def from_indices(cls, indices):
        vecs = [[1 if k == I else 0 for k in INDICES] for I in indices]
        return cls.span(vecs)

    @classmethod
    def named(cls, name):
        return cls.from_indices(NAMED[name])

    @classmethod
    def whole(cls):
        return cls.from_indices(INDICES)

    @classmethod
    def zero(cls):
        return cls(())

    @property
    def dim(self):
        return len(self.rows)

    def contains(self, v):
        if not any(x != 0 for x in v):
            return True
        return len(_rowspace([*map(list, self.rows), list(v)])) == self.dim

    def __eq__(self, other):
        return isinstance(other, Subalgebra) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def indices(self):
        """Basis indices if the subspace is spanned by basis elements, else ``None``."""
        out = []
        for r in self.rows:
            nz = [k for k, x in enumerate(r) if x != 0]
            if len(nz) != 1:
                return None
            out.append(nz[0] + 1)
        return tuple(sorted(out))

    def bracket_with(self, other):
        """Span of ``[u, v]`` for ``u`` in self, ``v`` in other."""
        return Subalgebra.span([_bracket_vec(u, v) for u in self.rows for v in other.rows])

    def is_closed(self):
        return all(self.contains(_bracket_vec(u, v)) for u in self.rows for v in self.rows)

    def intersect(self, other):
        """Intersection of two subspaces (exact)."""
        if self.dim == 0 or other.dim == 0:
            return Subalgebra.zero()
        A = sp.Matrix(self.rows).T
        B = sp.Matrix(other.rows).T
        null = sp.Matrix.hstack(A, -B).nullspace()
        return Subalgebra.span([list(A * n[: self.dim, 0]) for n in null])


def killing_orthogonal(sub):
    """``{E : K(H, E) = 0 for all H in sub}``."""
    if sub.dim == 0:
        return Subalgebra.whole()
    M = sp.Matrix(sub.rows) * killing_matrix()
    return Subalgebra.span([list(n) for n in M.nullspace()])


def _require_closed(sub):
    if not sub.is_closed():
        raise NotSubalgebraError("subspace is not closed under the bracket")


def lower_central_series(sub):
    """``[C1 = sub, C2 = [sub, C1], ...]`` until it vanishes or stabilises."""
    _require_closed(sub)
    series = [sub]
    while series[-1].dim > 0:
        nxt = sub.bracket_with(series[-1])
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
    return series


def nilpotency_degree(sub):
    """Number of nonzero terms in the lower central series, or ``None`` if not nilpotent.

    An abelian algebra is 1-step; the zero algebra has degree 0.
    """
    series = lower_central_series(sub)
    if series[-1].dim > 0:
        return None
    return len(series) - 1


def is_nilpotent(sub):
    return nilpotency_degree(sub) is not None


def is_parabolic(sub):
    """Killing-orthogonal complement is a nilpotent subalgebra (``{0}`` counts as nilpotent)."""
    _require_closed(sub)
    orth = killing_orthogonal(sub)
    return orth.is_closed() and is_nilpotent(orth)


def subalgebra_dimensions():
    return {name: Subalgebra.named(name).dim for name in NAMED}
