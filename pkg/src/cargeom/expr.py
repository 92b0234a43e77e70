"""Scalar-field expressions over a four-coordinate chart.

Grammar (whitespace is ignored)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ['-'] atom ['^' integer]
    atom   := number | ident | func '(' expr ')' | '(' expr ')'
    func   := sin | cos | tan | sec | sqrt

so ``-x^2`` is ``-(x^2)``. Identifiers must be chart names.

>>> f = parse_expr("3*p*q^2/(1+p^2)", ("x", "y", "p", "q"))
>>> f((0.0, 0.0, 1.0, 2.0))
6.0
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence, Union

from .errors import (
    DomainError,
    ExprSyntaxError,
    MalformedPowerError,
    PoleError,
    UnknownVariableError,
)
from .jets import DIV_EPS, TRIG_POLE_EPS, Jet

FUNCTIONS = ("sin", "cos", "tan", "sec", "sqrt")


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str
    index: int


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Const, Var, Neg, BinOp, Pow, Call]


# -- tokenizer / parser --------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, chart):
        self.tokens = _tokenize(text)
        self.i = 0
        self.chart = tuple(chart)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.take()
        if text != value or kind != "op":
            found = "end of input" if kind == "end" else repr(text)
            raise ExprSyntaxError(f"expected {value!r}, found {found}", pos)

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {text!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        negate = False
        if self.peek()[:2] == ("op", "-"):
            self.take()
            negate = True
        node = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, text, pos = self.take()
            if kind == "end":
                raise MalformedPowerError("missing exponent after '^'", pos)
            if kind != "num" or not text.isdigit():
                raise MalformedPowerError(f"exponent must be a non-negative integer, found {text!r}", pos)
            node = Pow(node, int(text))
        return Neg(node) if negate else node

    def atom(self):
        kind, text, pos = self.take()
        if kind == "num":
            return Const(float(text))
        if kind == "ident":
            if text in FUNCTIONS and (text not in self.chart or self.peek()[:2] == ("op", "(")):
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            if text not in self.chart:
                raise UnknownVariableError(text, pos, self.chart)
            return Var(text, self.chart.index(text))
        if (kind, text) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ExprSyntaxError(f"expected a number, name or '(', found {found}", pos)


# -- printing --------------------------------------------------------------------


def to_text(node):
    """Fully parenthesised text that parses back to an equivalent tree."""
    if isinstance(node, Const):
        text = repr(float(node.value))
        return f"({text})" if node.value < 0 or text.startswith("-") else text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_text(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    if isinstance(node, Pow):
        return f"{_atomic(node.base)}^{node.exponent}"
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def _atomic(node):
    # every printed form is already an atom except a power
    text = to_text(node)
    return f"({text})" if isinstance(node, Pow) else text


# -- evaluation ------------------------------------------------------------------


def _fdiv(a, b):
    if abs(b) < DIV_EPS:
        raise PoleError(f"division by {b!r}")
    return a / b


def _fcos_guarded(u, name):
    c = math.cos(u)
    if abs(c) < TRIG_POLE_EPS:
        raise PoleError(f"{name} pole at argument {u!r}")
    return c


def _fsqrt(u):
    if u < 0:
        raise DomainError(f"sqrt of negative value {u!r}")
    return math.sqrt(u)


def _fpow(u, n):
    if n == 0:
        return 1.0
    return u**n


_FLOAT_FUNCS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": lambda u: math.sin(u) / _fcos_guarded(u, "tan"),
    "sec": lambda u: 1.0 / _fcos_guarded(u, "sec"),
    "sqrt": _fsqrt,
}

_FLOAT_BINOPS = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _fdiv,
}


def _compile(node) -> Callable[[Sequence[float]], float]:
    """Turn a tree into nested closures evaluating it on a float point."""
    if isinstance(node, Const):
        v = float(node.value)
        return lambda pt: v
    if isinstance(node, Var):
        i = node.index
        return lambda pt: pt[i]
    if isinstance(node, Neg):
        f = _compile(node.arg)
        return lambda pt: -f(pt)
    if isinstance(node, BinOp):
        op = _FLOAT_BINOPS[node.op]
        f, g = _compile(node.left), _compile(node.right)
        return lambda pt: op(f(pt), g(pt))
    if isinstance(node, Pow):
        f, n = _compile(node.base), node.exponent
        return lambda pt: _fpow(f(pt), n)
    if isinstance(node, Call):
        fn, f = _FLOAT_FUNCS[node.func], _compile(node.arg)
        return lambda pt: fn(f(pt))
    raise TypeError(f"not an expression node: {node!r}")


def _jet_eval(node, variables):
    if isinstance(node, Const):
        base = variables[0]
        return Jet.constant(node.value, base.point, base.order)
    if isinstance(node, Var):
        return variables[node.index]
    if isinstance(node, Neg):
        return -_jet_eval(node.arg, variables)
    if isinstance(node, BinOp):
        a = _jet_eval(node.left, variables)
        b = _jet_eval(node.right, variables)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    if isinstance(node, Pow):
        return _jet_eval(node.base, variables) ** node.exponent
    if isinstance(node, Call):
        return getattr(_jet_eval(node.arg, variables), node.func)()
    raise TypeError(f"not an expression node: {node!r}")


def _free_indices(node, acc):
    if isinstance(node, Var):
        acc.add(node.index)
    elif isinstance(node, (Neg, Call)):
        _free_indices(node.arg, acc)
    elif isinstance(node, Pow):
        _free_indices(node.base, acc)
    elif isinstance(node, BinOp):
        _free_indices(node.left, acc)
        _free_indices(node.right, acc)
    return acc


@dataclass(frozen=True)
class ScalarFieldExpr:
    """An expression tree bound to a chart of four coordinate names."""

    root: Node
    chart: tuple

    def __post_init__(self):
        if len(self.chart) != 4:
            raise ValueError(f"a chart has exactly 4 coordinates, got {self.chart}")

    @cached_property
    def _fn(self):
        return _compile(self.root)

    def __call__(self, point):
        return float(self._fn(tuple(float(v) for v in point)))

    def jet(self, point, order):
        return eval_jet(self, point, order)

    def depends_on(self, name):
        return self.chart.index(name) in _free_indices(self.root, set())

    def __str__(self):
        return to_text(self.root)

    # combinators used to build perturbed fields; no simplification is done

    def _wrap(self, other):
        if isinstance(other, ScalarFieldExpr):
            if other.chart != self.chart:
                raise ValueError("expressions live on different charts")
            return other.root
        return Const(float(other))

    def __add__(self, other):
        return ScalarFieldExpr(BinOp("+", self.root, self._wrap(other)), self.chart)

    def __radd__(self, other):
        return ScalarFieldExpr(BinOp("+", self._wrap(other), self.root), self.chart)

    def __sub__(self, other):
        return ScalarFieldExpr(BinOp("-", self.root, self._wrap(other)), self.chart)

    def __mul__(self, other):
        return ScalarFieldExpr(BinOp("*", self.root, self._wrap(other)), self.chart)

    def __rmul__(self, other):
        return ScalarFieldExpr(BinOp("*", self._wrap(other), self.root), self.chart)

    def __neg__(self):
        return ScalarFieldExpr(Neg(self.root), self.chart)


def parse_expr(text, chart):
    """Parse ``text`` into a :class:`ScalarFieldExpr` over ``chart``.

    Raises :class:`ExprSyntaxError` (with ``.position``), or one of its
    subclasses :class:`UnknownVariableError` and :class:`MalformedPowerError`.
    """
    chart = tuple(chart)
    return ScalarFieldExpr(_Parser(text, chart).parse(), chart)


def as_expr(value, chart):
    """Coerce a string, number or expression into a :class:`ScalarFieldExpr`."""
    if isinstance(value, ScalarFieldExpr):
        if value.chart != tuple(chart):
            raise ValueError("expression chart does not match")
        return value
    if isinstance(value, str):
        return parse_expr(value, chart)
    return ScalarFieldExpr(Const(float(value)), tuple(chart))


def eval_jet(f, point, order):
    """Order-``order`` jet of ``f`` about ``point``.

    Raises :class:`PoleError` when a divisor, or the cosine under a tan/sec,
    vanishes at ``point``.
    """
    point = tuple(float(v) for v in point)
    if len(point) != 4:
        raise ValueError("point must have 4 coordinates")
    variables = [Jet.variable(i, point, order) for i in range(4)]
    return _jet_eval(f.root, variables)
