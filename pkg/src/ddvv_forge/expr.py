"""Holomorphic expressions in one complex variable ``z``.

Grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' int)?          int := '-'? DIGITS | '(' '-'? DIGITS ')'
    atom   := NUMBER | 'i' | 'pi' | 'z' | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := exp | log | sin | cos | sinh | cosh

Evaluation returns a :class:`ComplexJet` holding the raw derivatives
``F(z0), F'(z0), ..., F^(K)(z0)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ExprSyntaxError, SingularEvaluation

EPS_DIV = 1e-12

UNARY_FUNCS = ("exp", "log", "sin", "cos", "sinh", "cosh")


@dataclass(frozen=True)
class Const:
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True)
class Var:
    name: str = "z"


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or one of UNARY_FUNCS
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # "+", "-", "*", "/"
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Const, Var, Unary, Binary, Pow]

Z = Var()


def const(value) -> Const:
    return Const(complex(value))


# ---------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []  # (kind, value, offset0)
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN_RE.match(text, pos)
            if m is None or m.end() == pos:
                raise ExprSyntaxError("unexpected character", text, pos + 1,
                                      "a number, name, operator or parenthesis")
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def offset(self) -> int:
        tok = self.peek()
        # one past the last character when the input is exhausted
        return tok[2] + 1 if tok is not None else len(self.text) + 1

    def fail(self, expected: str):
        tok = self.peek()
        what = "end of input" if tok is None else f"{tok[1]!r}"
        raise ExprSyntaxError(f"unexpected {what}", self.text, self.offset(), expected)

    def accept(self, value: str) -> bool:
        tok = self.peek()
        if tok is not None and tok[0] in ("op", "name") and tok[1] == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        if not self.accept(value):
            self.fail(f"{value!r}")

    def parse(self) -> Expr:
        if not self.tokens:
            self.fail("an expression")
        e = self.expr()
        if self.peek() is not None:
            self.fail("an operator or end of input")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            if self.accept("+"):
                e = Binary("+", e, self.term())
            elif self.accept("-"):
                e = Binary("-", e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.unary()
        while True:
            if self.accept("*"):
                e = Binary("*", e, self.unary())
            elif self.accept("/"):
                e = Binary("/", e, self.unary())
            else:
                return e

    def unary(self) -> Expr:
        if self.accept("-"):
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^"):
            return Pow(base, self.integer())
        return base

    def integer(self) -> int:
        paren = self.accept("(")
        sign = -1 if self.accept("-") else 1
        tok = self.peek()
        if tok is None or tok[0] != "num" or not tok[1].isdigit():
            self.fail("an integer exponent")
        self.i += 1
        if paren:
            self.expect(")")
        return sign * int(tok[1])

    def atom(self) -> Expr:
        tok = self.peek()
        if tok is None:
            self.fail("a number, 'z', 'i', 'pi', a function or '('")
        kind, value, _ = tok
        if kind == "num":
            self.i += 1
            return Const(complex(float(value)))
        if kind == "name":
            if value == "z":
                self.i += 1
                return Z
            if value == "i":
                self.i += 1
                return Const(1j)
            if value == "pi":
                self.i += 1
                return Const(complex(math.pi))
            if value in UNARY_FUNCS:
                self.i += 1
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(value, arg)
            self.fail("'z', 'i', 'pi' or a function name")
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        self.fail("a number, 'z', 'i', 'pi', a function or '('")


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree."""
    return _Parser(text).parse()


# --------------------------------------------------------------- printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_UNARY_PREC = 3
_ATOM_PREC = 5


def _fmt_real(x: float) -> str:
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _fmt_const(c: complex) -> tuple[str, int]:
    if c.imag == 0.0 and math.copysign(1.0, c.real) > 0:
        return _fmt_real(c.real), _ATOM_PREC
    if c == 1j:
        return "i", _ATOM_PREC
    # Not producible by the parser; printed as an equal-valued expression.
    re_, im = c.real, c.imag
    parts = []
    if re_ != 0.0:
        parts.append(_fmt_real(re_))
    if im != 0.0:
        parts.append(("-" if im < 0 else ("+" if parts else "")) + _fmt_real(abs(im)) + "*i")
    text = "".join(parts) or "0"
    return f"({text})", _ATOM_PREC


def _unparse(e: Expr) -> tuple[str, int]:
    if isinstance(e, Const):
        return _fmt_const(e.value)
    if isinstance(e, Var):
        return e.name, _ATOM_PREC
    if isinstance(e, Unary):
        inner, p = _unparse(e.arg)
        if e.op == "neg":
            if p < _UNARY_PREC:
                inner = f"({inner})"
            return "-" + inner, _UNARY_PREC
        return f"{e.op}({inner})", _ATOM_PREC
    if isinstance(e, Pow):
        inner, p = _unparse(e.base)
        if p < _ATOM_PREC:
            inner = f"({inner})"
        exp = str(e.exponent) if e.exponent >= 0 else f"({e.exponent})"
        return f"{inner}^{exp}", 4
    if isinstance(e, Binary):
        prec = _PREC[e.op]
        left, lp = _unparse(e.left)
        right, rp = _unparse(e.right)
        if lp < prec or lp == _UNARY_PREC:
            left = f"({left})"
        if rp <= prec or rp == _UNARY_PREC:
            right = f"({right})"
        return f"{left}{e.op}{right}", prec
    raise TypeError(f"not an expression node: {e!r}")


def unparse(e: Expr) -> str:
    """Render ``e`` as text that :func:`parse` maps back to the same tree."""
    return _unparse(e)[0]


# ------------------------------------------------------------ jets

@dataclass(frozen=True)
class ComplexJet:
    """Derivatives ``d[k] = F^(k)(z0)`` for k = 0..K."""

    derivs: np.ndarray

    @property
    def order(self) -> int:
        return len(self.derivs) - 1

    def __getitem__(self, k):
        return self.derivs[k]

    def __len__(self):
        return len(self.derivs)


def _factorials(K):
    return np.array([math.factorial(k) for k in range(K + 1)], dtype=float)


# Internally everything runs on Taylor coefficients c[k] = F^(k)/k!.

def _t_mul(a, b):
    return np.convolve(a, b)[: len(a)]


def _t_div(a, b, eps):
    if abs(b[0]) < eps:
        raise SingularEvaluation(f"division by |{b[0]:.3g}| < {eps:g}")
    q = np.zeros_like(a)
    for k in range(len(a)):
        q[k] = (a[k] - np.dot(b[1:k + 1], q[k - 1::-1][:k])) / b[0]
    return q


def _t_exp(a):
    b = np.zeros_like(a)
    b[0] = np.exp(a[0])
    for k in range(1, len(a)):
        j = np.arange(1, k + 1)
        b[k] = np.sum(j * a[j] * b[k - j]) / k
    return b


def _t_log(a, eps):
    if abs(a[0]) < eps:
        raise SingularEvaluation(f"log of |{a[0]:.3g}| < {eps:g}")
    b = np.zeros_like(a)
    b[0] = np.log(a[0])
    for k in range(1, len(a)):
        j = np.arange(1, k)
        b[k] = (k * a[k] - np.sum(j * b[j] * a[k - j])) / (k * a[0])
    return b


def _t_sincos(a, hyperbolic=False):
    s = np.zeros_like(a)
    c = np.zeros_like(a)
    if hyperbolic:
        s[0], c[0] = np.sinh(a[0]), np.cosh(a[0])
    else:
        s[0], c[0] = np.sin(a[0]), np.cos(a[0])
    sign = 1.0 if hyperbolic else -1.0
    for k in range(1, len(a)):
        j = np.arange(1, k + 1)
        s[k] = np.sum(j * a[j] * c[k - j]) / k
        c[k] = sign * np.sum(j * a[j] * s[k - j]) / k
    return s, c


def _t_pow(a, p, eps):
    if p < 0:
        one = np.zeros_like(a)
        one[0] = 1.0
        return _t_div(one, _t_pow(a, -p, eps), eps)
    result = np.zeros_like(a)
    result[0] = 1.0
    base = a
    while p:
        if p & 1:
            result = _t_mul(result, base)
        p >>= 1
        if p:
            base = _t_mul(base, base)
    return result


def _taylor(e: Expr, z0: complex, K: int, eps: float, memo: dict) -> np.ndarray:
    # Shared subtrees (e.g. the quadric in an inverted curve) are evaluated once.
    key = id(e)
    if key in memo:
        return memo[key][1]
    out = _taylor_node(e, z0, K, eps, memo)
    memo[key] = (e, out)
    return out


def _taylor_node(e: Expr, z0: complex, K: int, eps: float, memo: dict) -> np.ndarray:
    if isinstance(e, Const):
        out = np.zeros(K + 1, dtype=complex)
        out[0] = e.value
        return out
    if isinstance(e, Var):
        out = np.zeros(K + 1, dtype=complex)
        out[0] = z0
        if K >= 1:
            out[1] = 1.0
        return out
    if isinstance(e, Unary):
        a = _taylor(e.arg, z0, K, eps, memo)
        if e.op == "neg":
            return -a
        if e.op == "exp":
            return _t_exp(a)
        if e.op == "log":
            return _t_log(a, eps)
        if e.op in ("sin", "cos"):
            s, c = _t_sincos(a)
            return s if e.op == "sin" else c
        if e.op in ("sinh", "cosh"):
            s, c = _t_sincos(a, hyperbolic=True)
            return s if e.op == "sinh" else c
        raise ValueError(f"unknown function {e.op!r}")
    if isinstance(e, Pow):
        return _t_pow(_taylor(e.base, z0, K, eps, memo), e.exponent, eps)
    if isinstance(e, Binary):
        a = _taylor(e.left, z0, K, eps, memo)
        b = _taylor(e.right, z0, K, eps, memo)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return _t_mul(a, b)
        if e.op == "/":
            return _t_div(a, b, eps)
    raise TypeError(f"not an expression node: {e!r}")


def eval_jet(e: Expr, z0: complex, K: int = 2, eps_div: float = EPS_DIV) -> ComplexJet:
    """Evaluate ``e`` and its first ``K`` complex derivatives at ``z0``.

    Overflow or an undefined intermediate raises SingularEvaluation.
    """
    return eval_jets([e], z0, K, eps_div)[0]


def eval_jets(exprs, z0: complex, K: int = 2, eps_div: float = EPS_DIV) -> list:
    """eval_jet over several expressions sharing one subexpression cache."""
    memo: dict = {}
    fact = _factorials(K)
    out = []
    for e in exprs:
        with np.errstate(all="ignore"):
            derivs = _taylor(e, complex(z0), K, eps_div, memo) * fact
        if not np.all(np.isfinite(derivs)):
            raise SingularEvaluation(f"non-finite jet of {unparse(e)} at z = {complex(z0)}")
        out.append(ComplexJet(derivs))
    return out


def evaluate(e: Expr, z0: complex, eps_div: float = EPS_DIV) -> complex:
    return complex(eval_jet(e, z0, 0, eps_div)[0])


# ------------------------------------------------------------ builders

def add(*terms: Expr) -> Expr:
    out = terms[0]
    for t in terms[1:]:
        out = Binary("+", out, t)
    return out


def mul(a: Expr, b: Expr) -> Expr:
    return Binary("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    return Binary("/", a, b)
