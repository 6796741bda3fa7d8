"""Closed-form expressions for curves alpha(t) and fields f(x1..x4).

Grammar (see docs/grammar.md)::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := ("+" | "-") factor | power
    power  := atom ("^" factor)?
    atom   := NUMBER | NAME | FUNC "(" expr ")" | "(" expr ")"

``^`` is right associative and binds tighter than unary minus, so ``-t^2`` is
``-(t^2)``.  The exponent must be free of variables.

Expressions are evaluated generically: the same AST walk runs on floats, on
:class:`~nullhelix.jet.Jet` (exact Taylor coefficients in t) and on
:class:`SecondOrder` (value, gradient and Hessian in x1..x4).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, ExprSyntaxError, UnknownIdentifier
from .jet import Jet

FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp", "sqrt")
CONSTANTS = {"pi": math.pi}
CURVE_VARIABLES = frozenset({"t"})
FIELD_VARIABLES = ("x1", "x2", "x3", "x4")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Pow, Call]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad, text)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables):
        self.text = text
        self.variables = variables
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            found = "end of input" if kind == "end" else repr(val)
            raise ExprSyntaxError(f"expected {value!r}, found {found}", pos, self.text)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", pos, self.text)
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
        kind, val, _ = self.peek()
        if kind == "op" and val in ("+", "-"):
            self.take()
            operand = self.factor()
            return Neg(operand) if val == "-" else operand
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            _, _, pos = self.take()
            exponent = self.factor()
            if free_variables(exponent):
                raise ExprSyntaxError("exponent must be a constant", pos, self.text)
            return Pow(base, exponent)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            if self.peek()[:2] == ("op", "("):
                raise UnknownIdentifier(f"unknown function {val!r}", pos, self.text)
            if val in self.variables:
                return Var(val)
            if val in CONSTANTS:
                return Num(CONSTANTS[val])
            raise UnknownIdentifier(
                f"unknown identifier {val!r} (allowed: {', '.join(sorted(self.variables))})", pos, self.text
            )
        if (kind, val) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"unexpected {found}", pos, self.text)


def parse_expr(text, variables):
    if not isinstance(text, str) or not text.strip():
        raise ExprSyntaxError("empty expression", 0, text)
    return _Parser(text, frozenset(variables)).parse()


def parse_curve_component(text):
    return parse_expr(text, CURVE_VARIABLES)


def parse_field(text):
    return parse_expr(text, FIELD_VARIABLES)


def free_variables(node):
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, (Neg,)):
        return free_variables(node.operand)
    if isinstance(node, Call):
        return free_variables(node.arg)
    if isinstance(node, Pow):
        return free_variables(node.base) | free_variables(node.exponent)
    return free_variables(node.left) | free_variables(node.right)


def to_text(node):
    """Fully parenthesised text that parses back to an identical AST."""
    if isinstance(node, Num):
        return repr(node.value) if node.value >= 0 else f"(-{repr(-node.value)})"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_text(node.operand)})"
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    if isinstance(node, Pow):
        return f"({to_text(node.base)} ^ ({to_text(node.exponent)}))"
    return f"({to_text(node.left)} {node.op} {to_text(node.right)})"


# evaluation ---------------------------------------------------------------


def _float_call(func, x):
    if func == "sqrt":
        if x < 0:
            raise DomainError(f"sqrt of negative value {x!r}")
        return math.sqrt(x)
    try:
        return getattr(math, func)(x)
    except OverflowError as exc:
        raise DomainError(f"{func}({x!r}) overflows") from exc


def _float_pow(x, p):
    if x == 0 and p < 0:
        raise DomainError("zero raised to a negative power")
    if x < 0 and not float(p).is_integer():
        raise DomainError(f"non-integer power {p:g} of negative value")
    return float(x) ** p


def evaluate(node, env):
    """Evaluate ``node`` with variables bound by ``env`` (floats, Jets or SecondOrder)."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Neg):
        return -evaluate(node.operand, env)
    if isinstance(node, Call):
        x = evaluate(node.arg, env)
        if isinstance(x, (int, float, np.floating)):
            return _float_call(node.func, float(x))
        return getattr(x, node.func)()
    if isinstance(node, Pow):
        base = evaluate(node.base, env)
        p = float(evaluate(node.exponent, {}))
        if isinstance(base, (int, float, np.floating)):
            return _float_pow(base, p)
        return base**p
    left = evaluate(node.left, env)
    right = evaluate(node.right, env)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if isinstance(right, (int, float, np.floating)) and right == 0:
        raise DomainError("division by zero")
    return left / right


def eval_jet(node, t0, order=5):
    """Taylor coefficients in t about t0, through ``order``."""
    if order < 1:
        raise ValueError("order must be >= 1")
    extra = free_variables(node) - CURVE_VARIABLES
    if extra:
        raise UnknownIdentifier(f"expression has non-curve variables {sorted(extra)}")
    out = evaluate(node, {"t": Jet.variable(t0, order)})
    if not isinstance(out, Jet):
        out = Jet.constant(out, t0, order)
    if not np.all(np.isfinite(out.coeffs)):
        raise DomainError(f"non-finite Taylor coefficients at t={t0!r}")
    return out


def _py_source(node):
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{_py_source(node.operand)})"
    if isinstance(node, Call):
        return f"_call({node.func!r}, {_py_source(node.arg)})"
    if isinstance(node, Pow):
        return f"_pow({_py_source(node.base)}, {float(evaluate(node.exponent, {}))!r})"
    if node.op == "/":
        return f"_div({_py_source(node.left)}, {_py_source(node.right)})"
    return f"({_py_source(node.left)} {node.op} {_py_source(node.right)})"


def _float_div(a, b):
    if b == 0:
        raise DomainError("division by zero")
    return a / b


def compile_float(node, variables=("t",)):
    """Plain-float evaluator for hot loops; same semantics as ``evaluate`` on floats."""
    src = f"lambda {', '.join(variables)}: {_py_source(node)}"
    return eval(src, {"_call": _float_call, "_pow": _float_pow, "_div": _float_div})  # noqa: S307


class SecondOrder:
    """Value, gradient and Hessian of a scalar in several variables."""

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value, grad, hess):
        self.value = float(value)
        self.grad = np.asarray(grad, dtype=float)
        self.hess = np.asarray(hess, dtype=float)

    @classmethod
    def variable(cls, index, x, n=4):
        g = np.zeros(n)
        g[index] = 1.0
        return cls(x, g, np.zeros((n, n)))

    def _lift(self, other):
        if isinstance(other, SecondOrder):
            return other
        n = len(self.grad)
        return SecondOrder(other, np.zeros(n), np.zeros((n, n)))

    def __add__(self, other):
        o = self._lift(other)
        return SecondOrder(self.value + o.value, self.grad + o.grad, self.hess + o.hess)

    __radd__ = __add__

    def __neg__(self):
        return SecondOrder(-self.value, -self.grad, -self.hess)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        hess = self.hess * o.value + o.hess * self.value + np.outer(self.grad, o.grad) + np.outer(o.grad, self.grad)
        return SecondOrder(self.value * o.value, self.grad * o.value + o.grad * self.value, hess)

    __rmul__ = __mul__

    def _chain(self, h0, h1, h2):
        return SecondOrder(h0, h1 * self.grad, h2 * np.outer(self.grad, self.grad) + h1 * self.hess)

    def reciprocal(self):
        x = self.value
        if x == 0:
            raise DomainError("division by zero")
        return self._chain(1 / x, -1 / x**2, 2 / x**3)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, p):
        p = float(p)
        if p.is_integer():
            n = int(p)
            result = self._lift(1.0)
            for _ in range(abs(n)):
                result = result * self
            return result.reciprocal() if n < 0 else result
        x = self.value
        if x <= 0:
            raise DomainError(f"non-integer power {p:g} of a non-positive value")
        return self._chain(x**p, p * x ** (p - 1), p * (p - 1) * x ** (p - 2))

    def sqrt(self):
        if self.value <= 0:
            raise DomainError("sqrt of a non-positive value (not differentiable)")
        return self**0.5

    def exp(self):
        e = math.exp(self.value)
        return self._chain(e, e, e)

    def sin(self):
        s, c = math.sin(self.value), math.cos(self.value)
        return self._chain(s, c, -s)

    def cos(self):
        s, c = math.sin(self.value), math.cos(self.value)
        return self._chain(c, -s, -c)

    def sinh(self):
        s, c = math.sinh(self.value), math.cosh(self.value)
        return self._chain(s, c, s)

    def cosh(self):
        s, c = math.sinh(self.value), math.cosh(self.value)
        return self._chain(c, s, c)


@dataclass(frozen=True)
class FieldProbe:
    value: float
    partials: np.ndarray
    second_partials: np.ndarray


def eval_field(node, p):
    """Exact value, partials and second partials of a field at the point p."""
    extra = free_variables(node) - set(FIELD_VARIABLES)
    if extra:
        raise UnknownIdentifier(f"expression has non-field variables {sorted(extra)}")
    env = {name: SecondOrder.variable(i, float(p[i])) for i, name in enumerate(FIELD_VARIABLES)}
    out = evaluate(node, env)
    if not isinstance(out, SecondOrder):
        out = SecondOrder(out, np.zeros(4), np.zeros((4, 4)))
    hess = 0.5 * (out.hess + out.hess.T)
    if not (np.isfinite(out.value) and np.all(np.isfinite(out.grad)) and np.all(np.isfinite(hess))):
        raise DomainError(f"non-finite field derivatives at {list(p)}")
    return FieldProbe(out.value, out.grad, hess)


def compose_jet(field_node, curve_jet):
    """Jet of f(alpha(t)) given the 4-vector jet of alpha."""
    env = {name: curve_jet[i] for i, name in enumerate(FIELD_VARIABLES)}
    out = evaluate(field_node, env)
    if not isinstance(out, Jet):
        out = Jet.constant(out, curve_jet.t0, curve_jet.order)
    return out
