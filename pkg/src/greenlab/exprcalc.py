"""Closed-form radial expressions with second-order forward-mode jets.

Warping and potential profiles are written in a tiny expression language
over the single variable ``r``.  Parsing produces an immutable AST and
evaluation propagates (value, first, second derivative) together, so the
geometric data downstream is exact to machine precision wherever the
expression is defined.  Evaluation accepts a scalar or a numpy array for
``r`` and is fully vectorized in the latter case.

Grammar: literals, ``r``, binary ``+ - * / ^`` (``^`` right-associative),
unary minus, single-argument calls of the functions in :data:`FUNCTIONS`,
and the constants ``pi`` and ``e``.  Precedence: ``^`` > unary ``-`` >
``* /`` > ``+ -``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "ExprError",
    "ParseError",
    "DomainError",
    "Expr",
    "Jet2",
    "parse_expression",
    "to_source",
    "eval_jet2",
    "FUNCTIONS",
    "CONSTANTS",
]


class ExprError(ValueError):
    """Base class for expression-language failures."""


class ParseError(ExprError):
    """Raised on malformed input; carries the byte offset of the failure."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class DomainError(ExprError):
    """Evaluation left the real domain of an operation (sqrt/log/div/pow)."""


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Const, Neg, BinOp, Call]

CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN_NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_TOKEN_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> ParseError:
        return ParseError(message, self.pos if pos is None else pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected '{ch}'")
        self.pos += 1

    def parse(self) -> Expr:
        node = self.sum()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error("unexpected trailing input")
        return node

    def sum(self) -> Expr:
        node = self.product()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            node = BinOp(op, node, self.product())
        return node

    def product(self) -> Expr:
        node = self.unary()
        while self.peek() in ("*", "/"):
            op = self.text[self.pos]
            self.pos += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.peek() == "-":
            self.pos += 1
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            # Right-associative; the exponent may carry a unary minus.
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            node = self.sum()
            self.expect(")")
            return node
        start = self.pos
        m = _TOKEN_NUMBER.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return Num(float(m.group()))
        m = _TOKEN_IDENT.match(self.text, self.pos)
        if m:
            name = m.group()
            self.pos = m.end()
            if self.peek() == "(":
                if name not in FUNCTIONS:
                    raise self.error(f"unknown function '{name}'", start)
                self.pos += 1
                arg = self.sum()
                self.expect(")")
                return Call(name, arg)
            if name == "r":
                return Var()
            if name in CONSTANTS:
                return Const(name)
            raise self.error(f"unknown identifier '{name}'", start)
        if ch == "":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected character {ch!r}")


def parse_expression(text: str) -> Expr:
    """Parse ``text`` into an AST, raising :class:`ParseError` with offset."""
    return _Parser(text).parse()


# --- printing --------------------------------------------------------------

_LEVEL_SUM, _LEVEL_PROD, _LEVEL_UNARY, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _fmt(e: Expr, parent_level: int) -> str:
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return "r"
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Neg):
        s = "-" + _fmt(e.arg, _LEVEL_UNARY)
        return f"({s})" if parent_level > _LEVEL_UNARY else s
    if isinstance(e, Call):
        return f"{e.func}({_fmt(e.arg, 0)})"
    if isinstance(e, BinOp):
        if e.op in "+-":
            level = _LEVEL_SUM
            s = f"{_fmt(e.left, level)} {e.op} {_fmt(e.right, level + 1)}"
        elif e.op in "*/":
            level = _LEVEL_PROD
            s = f"{_fmt(e.left, level)}{e.op}{_fmt(e.right, level + 1)}"
        else:
            level = _LEVEL_POW
            s = f"{_fmt(e.left, _LEVEL_ATOM)}^{_fmt(e.right, _LEVEL_UNARY)}"
        return f"({s})" if parent_level > level else s
    raise TypeError(f"not an expression node: {e!r}")


def to_source(e: Expr) -> str:
    """Render an AST back to parseable source with minimal parentheses."""
    return _fmt(e, 0)


# --- jets ------------------------------------------------------------------

ArrayLike = Union[float, np.ndarray]


@dataclass
class Jet2:
    """Value plus first and second derivative with respect to ``r``."""

    value: ArrayLike
    d1: ArrayLike
    d2: ArrayLike

    def __add__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value + other.value, self.d1 + other.d1, self.d2 + other.d2)

    def __sub__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value - other.value, self.d1 - other.d1, self.d2 - other.d2)

    def __neg__(self) -> "Jet2":
        return Jet2(-self.value, -self.d1, -self.d2)

    def __mul__(self, other: "Jet2") -> "Jet2":
        return Jet2(
            self.value * other.value,
            self.d1 * other.value + self.value * other.d1,
            self.d2 * other.value + 2.0 * self.d1 * other.d1 + self.value * other.d2,
        )

    def __truediv__(self, other: "Jet2") -> "Jet2":
        if np.any(other.value == 0.0):
            raise DomainError("division by zero")
        q = self.value / other.value
        qd1 = (self.d1 - q * other.d1) / other.value
        qd2 = (self.d2 - 2.0 * qd1 * other.d1 - q * other.d2) / other.value
        return Jet2(q, qd1, qd2)


def _is_constant(j: Jet2) -> bool:
    return not np.any(j.d1) and not np.any(j.d2)


def _chain(u: Jet2, f0: ArrayLike, f1: ArrayLike, f2: ArrayLike) -> Jet2:
    return Jet2(f0, f1 * u.d1, f2 * u.d1 * u.d1 + f1 * u.d2)


def _pow(base: Jet2, expo: Jet2, node: Expr) -> Jet2:
    if _is_constant(expo):
        c = float(np.asarray(expo.value).reshape(-1)[0]) if isinstance(
            expo.value, np.ndarray
        ) else float(expo.value)
        if c == 0.0:
            one = np.ones_like(np.asarray(base.value, dtype=float))
            zero = np.zeros_like(one)
            if not isinstance(base.value, np.ndarray):
                return Jet2(1.0, 0.0, 0.0)
            return Jet2(one, zero, zero)
        if c == 1.0:
            return Jet2(base.value, base.d1, base.d2)
        if float(c).is_integer():
            v = base.value
            # Integer powers are defined for any base; 0**(c-2) only
            # multiplies a vanishing coefficient when c >= 2.
            if c < 0 and np.any(v == 0.0):
                raise DomainError(
                    f"negative power of zero in '{to_source(node)}'"
                )
            with np.errstate(divide="ignore", invalid="ignore"):
                f0 = v ** c
                f1 = c * v ** (c - 1.0)
                f2 = c * (c - 1.0) * v ** (c - 2.0)
                if c == 2.0:
                    f2 = np.broadcast_to(2.0, np.shape(v)) if np.ndim(v) else 2.0
            return _chain(base, f0, f1, f2)
        if np.any(base.value <= 0.0):
            raise DomainError(
                f"non-integer power of non-positive base in '{to_source(node)}'"
            )
        v = base.value
        f0 = v ** c
        return _chain(base, f0, c * f0 / v, c * (c - 1.0) * f0 / (v * v))
    # Variable exponent: b^w = exp(w*log b), requires positive base.
    if np.any(base.value <= 0.0):
        raise DomainError(
            f"variable power of non-positive base in '{to_source(node)}'"
        )
    return _fn_exp(expo * _fn_log(base, node), node)


def _fn_sqrt(u: Jet2, node: Expr) -> Jet2:
    if np.any(u.value < 0.0):
        raise DomainError(f"sqrt of negative operand in '{to_source(node)}'")
    with np.errstate(divide="ignore"):
        s = np.sqrt(u.value)
        return _chain(u, s, 0.5 / s, -0.25 / (s * u.value))


def _fn_exp(u: Jet2, node: Expr) -> Jet2:
    g = np.exp(u.value)
    return _chain(u, g, g, g)


def _fn_log(u: Jet2, node: Expr) -> Jet2:
    if np.any(u.value <= 0.0):
        raise DomainError(f"log of non-positive operand in '{to_source(node)}'")
    v = u.value
    return _chain(u, np.log(v), 1.0 / v, -1.0 / (v * v))


def _fn_sin(u: Jet2, node: Expr) -> Jet2:
    s, c = np.sin(u.value), np.cos(u.value)
    return _chain(u, s, c, -s)


def _fn_cos(u: Jet2, node: Expr) -> Jet2:
    s, c = np.sin(u.value), np.cos(u.value)
    return _chain(u, c, -s, -c)


def _fn_tan(u: Jet2, node: Expr) -> Jet2:
    t = np.tan(u.value)
    sec2 = 1.0 + t * t
    return _chain(u, t, sec2, 2.0 * t * sec2)


def _fn_sinh(u: Jet2, node: Expr) -> Jet2:
    s, c = np.sinh(u.value), np.cosh(u.value)
    return _chain(u, s, c, s)


def _fn_cosh(u: Jet2, node: Expr) -> Jet2:
    s, c = np.sinh(u.value), np.cosh(u.value)
    return _chain(u, c, s, c)


def _fn_tanh(u: Jet2, node: Expr) -> Jet2:
    t = np.tanh(u.value)
    sech2 = 1.0 - t * t
    return _chain(u, t, sech2, -2.0 * t * sech2)


def _fn_atan(u: Jet2, node: Expr) -> Jet2:
    v = u.value
    den = 1.0 + v * v
    return _chain(u, np.arctan(v), 1.0 / den, -2.0 * v / (den * den))


FUNCTIONS = {
    "sqrt": _fn_sqrt,
    "exp": _fn_exp,
    "log": _fn_log,
    "sin": _fn_sin,
    "cos": _fn_cos,
    "tan": _fn_tan,
    "sinh": _fn_sinh,
    "cosh": _fn_cosh,
    "tanh": _fn_tanh,
    "atan": _fn_atan,
}


def _eval(node: Expr, seed: Jet2) -> Jet2:
    if isinstance(node, Num):
        z = np.zeros_like(np.asarray(seed.value, dtype=float))
        if isinstance(seed.value, np.ndarray):
            return Jet2(np.full_like(z, node.value), z, z.copy())
        return Jet2(node.value, 0.0, 0.0)
    if isinstance(node, Var):
        return Jet2(seed.value, seed.d1, seed.d2)
    if isinstance(node, Const):
        z = np.zeros_like(np.asarray(seed.value, dtype=float))
        if isinstance(seed.value, np.ndarray):
            return Jet2(np.full_like(z, CONSTANTS[node.name]), z, z.copy())
        return Jet2(CONSTANTS[node.name], 0.0, 0.0)
    if isinstance(node, Neg):
        return -_eval(node.arg, seed)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](_eval(node.arg, seed), node)
    if isinstance(node, BinOp):
        left = _eval(node.left, seed)
        if node.op == "+":
            return left + _eval(node.right, seed)
        if node.op == "-":
            return left - _eval(node.right, seed)
        if node.op == "*":
            return left * _eval(node.right, seed)
        if node.op == "/":
            try:
                return left / _eval(node.right, seed)
            except DomainError:
                raise DomainError(
                    f"division by zero in '{to_source(node)}'"
                ) from None
        return _pow(left, _eval(node.right, seed), node)
    raise TypeError(f"not an expression node: {node!r}")


def eval_jet2(expr: Expr | str, r: ArrayLike) -> Jet2:
    """Evaluate ``expr`` at radius ``r`` with its first two derivatives.

    ``r`` may be a float or a numpy array; the jet components match.
    """
    if isinstance(expr, str):
        expr = parse_expression(expr)
    if isinstance(r, np.ndarray):
        r = np.asarray(r, dtype=float)
        seed = Jet2(r, np.ones_like(r), np.zeros_like(r))
    else:
        seed = Jet2(float(r), 1.0, 0.0)
    with np.errstate(over="ignore", under="ignore"):
        return _eval(expr, seed)
