"""
Expression DSL
==============

A tiny analytic-expression language in the variables ``u`` and ``v``::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' ['-'] INT)?
    atom    := NUMBER | 'u' | 'v' | 'pi' | FUNC '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus, so ``-u^2`` is ``-(u^2)``.  Expressions
can be printed back, evaluated in closed form (``math``, ``numpy`` or
``mpmath``) and elevated to :class:`~edgekit.jet.Jet2` values by Taylor
propagation about a base point.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .jet import Jet2, Jet2Vec3, JetError, apply_series, reciprocal

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "atan")
CONSTANTS = ("pi",)


class ExprError(ValueError):
    """Parse or evaluation failure."""


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


# -- AST ------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Const, Neg, BinOp, Pow, Call]


# -- tokenizer / parser ---------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),;]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.next()
        if val != value or kind != "op":
            raise ExprSyntaxError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.next()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.next()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.next()
            return Neg(self.unary())
        if kind == "op" and val == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek() == ("op", "^", self.peek()[2]):
            self.next()
            return Pow(base, self._int_exponent())
        return base

    def _int_exponent(self) -> int:
        paren = False
        if self.peek()[:2] == ("op", "("):
            self.next()
            paren = True
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.next()
            sign = -1
        kind, val, pos = self.next()
        if kind != "num" or not val.isdigit():
            raise ExprSyntaxError("exponent must be an integer literal", pos)
        if paren:
            self.expect(")")
        return sign * int(val)

    def atom(self) -> Expr:
        kind, val, pos = self.next()
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            if val in ("u", "v"):
                return Var(val)
            if val in CONSTANTS:
                return Const(val)
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                if self.peek()[:2] == ("op", ","):
                    raise ExprSyntaxError(f"{val} takes exactly one argument", self.peek()[2])
                self.expect(")")
                return Call(val, arg)
            raise ExprError(f"unknown symbol {val}")
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"unexpected {val or 'end of input'!r}", pos)


def parse(text: str) -> Expr:
    """Parse a single expression."""
    p = _Parser(text)
    node = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected {val!r}", pos)
    return node


def parse_map(text: str) -> tuple[Expr, Expr, Expr]:
    """Parse a germ given as ``map(e1, e2, e3)`` or ``e1; e2; e3``."""
    p = _Parser(text)
    if p.peek()[:2] == ("name", "map"):
        p.next()
        p.expect("(")
        parts = [p.expr()]
        while p.peek()[:2] == ("op", ","):
            p.next()
            parts.append(p.expr())
        p.expect(")")
    else:
        parts = [p.expr()]
        while p.peek()[:2] == ("op", ";"):
            p.next()
            parts.append(p.expr())
    kind, val, pos = p.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected {val!r}", pos)
    if len(parts) != 3:
        raise ExprError(f"a surface germ needs three component expressions, got {len(parts)}")
    return tuple(parts)


# -- printing -------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(node: Expr) -> str:
    """Print with the minimal parentheses that re-parse to the same tree."""
    return _fmt(node, 0)


def _fmt(node: Expr, ctx: int) -> str:
    if isinstance(node, Num):
        s = repr(float(node.value))
        return s
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({_fmt(node.arg, 0)})"
    if isinstance(node, Pow):
        base = _fmt(node.base, 5)
        s = f"{base}^{node.exponent}" if node.exponent >= 0 else f"{base}^({node.exponent})"
        return f"({s})" if ctx > 4 else s
    if isinstance(node, Neg):
        s = "-" + _fmt(node.operand, 3)
        return f"({s})" if ctx > 3 else s
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        s = f"{_fmt(node.left, p)} {node.op} {_fmt(node.right, p + 1)}"
        return f"({s})" if ctx > p else s
    raise ExprError(f"not an expression node: {node!r}")


# -- closed-form evaluation -------------------------------------------------

def evaluate(node: Expr, u, v, lib=math):
    """Evaluate with the elementary functions of ``lib`` (math, numpy or mpmath)."""
    if isinstance(node, Num):
        mpf = getattr(lib, "mpf", None)
        return mpf(node.value) if mpf else node.value
    if isinstance(node, Var):
        return u if node.name == "u" else v
    if isinstance(node, Const):
        return lib.pi
    if isinstance(node, Neg):
        return -evaluate(node.operand, u, v, lib)
    if isinstance(node, BinOp):
        a = evaluate(node.left, u, v, lib)
        b = evaluate(node.right, u, v, lib)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    if isinstance(node, Pow):
        return evaluate(node.base, u, v, lib) ** node.exponent
    if isinstance(node, Call):
        x = evaluate(node.arg, u, v, lib)
        name = "arctan" if (node.func == "atan" and lib is np) else node.func
        return getattr(lib, name)(x)
    raise ExprError(f"not an expression node: {node!r}")


# -- Taylor elevation -----------------------------------------------------

def _maclaurin(func: str, c: float, order: int) -> list[float]:
    """Taylor coefficients of ``func`` about ``c``."""
    fact = [math.factorial(k) for k in range(order + 1)]
    if func == "exp":
        return [math.exp(c) / fact[k] for k in range(order + 1)]
    if func in ("sin", "cos"):
        s, co = math.sin(c), math.cos(c)
        cycle = (s, co, -s, -co) if func == "sin" else (co, -s, -co, s)
        return [cycle[k % 4] / fact[k] for k in range(order + 1)]
    if func == "log":
        if c <= 0:
            raise ExprError("expression singular at basepoint")
        return [math.log(c)] + [(-1) ** (k + 1) / (k * c**k) for k in range(1, order + 1)]
    if func == "sqrt":
        if c <= 0:
            raise ExprError("expression singular at basepoint")
        out, b = [], 1.0
        for k in range(order + 1):
            out.append(math.sqrt(c) * b / c**k)
            b *= (0.5 - k) / (k + 1)
        return out
    x = Jet2.var("u", order)
    if func == "tan":
        s = apply_series(_maclaurin("sin", c, order), x)
        co = apply_series(_maclaurin("cos", c, order), x)
        if abs(co.value) < 1e-12:
            raise ExprError("expression singular at basepoint")
        return [s_ for s_ in (s * reciprocal(co)).c[:, 0]]
    if func == "atan":
        cx = x + c
        d = reciprocal(cx * cx + 1.0).integrate_u()
        return [math.atan(c)] + list(d.c[1:, 0])
    raise ExprError(f"unknown symbol {func}")


def elevate(node: Expr, order: int = 6, basepoint: tuple[float, float] = (0.0, 0.0)) -> Jet2:
    """Jet of the expression about ``basepoint`` in offset variables."""
    u0, v0 = basepoint
    u = Jet2.var("u", order) + u0
    v = Jet2.var("v", order) + v0
    return _elevate(node, u, v, order)


def _elevate(node: Expr, u: Jet2, v: Jet2, order: int) -> Jet2:
    if isinstance(node, Num):
        return Jet2.constant(node.value, order)
    if isinstance(node, Var):
        return u if node.name == "u" else v
    if isinstance(node, Const):
        return Jet2.constant(math.pi, order)
    if isinstance(node, Neg):
        return -_elevate(node.operand, u, v, order)
    try:
        if isinstance(node, BinOp):
            a = _elevate(node.left, u, v, order)
            b = _elevate(node.right, u, v, order)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            return a * reciprocal(b)
        if isinstance(node, Pow):
            return _elevate(node.base, u, v, order) ** node.exponent
    except JetError as exc:
        raise ExprError("expression singular at basepoint") from exc
    if isinstance(node, Call):
        arg = _elevate(node.arg, u, v, order)
        c0 = arg.value
        coeffs = _maclaurin(node.func, c0, order)
        return apply_series(coeffs, arg - c0)
    raise ExprError(f"not an expression node: {node!r}")


def elevate_map(nodes, order: int = 6, basepoint=(0.0, 0.0)) -> Jet2Vec3:
    return Jet2Vec3(*(elevate(n, order, basepoint) for n in nodes))


# -- coefficient tables -----------------------------------------------------

def load_table(data: bytes | str) -> Jet2Vec3:
    """Read the ``{"order": N, "components": [[[i, j, value], ...] x3]}`` format."""
    doc = json.loads(data)
    if not isinstance(doc, dict) or "order" not in doc:
        raise ExprError("coefficient table needs an 'order' key")
    order = doc["order"]
    if not isinstance(order, int) or order < 0:
        raise ExprError("order must be a non-negative integer")
    comps = doc.get("components") or [[], [], []]
    if len(comps) != 3:
        raise ExprError("components must list exactly three coefficient arrays")
    jets = []
    seen = set()
    for k, entries in enumerate(comps):
        terms = {}
        for entry in entries:
            if len(entry) != 3:
                raise ExprError(f"malformed entry {entry!r}")
            i, j, val = entry
            if not (isinstance(i, int) and isinstance(j, int)) or i < 0 or j < 0:
                raise ExprError(f"bad monomial exponents in {entry!r}")
            if i + j > order:
                raise ExprError(f"entry ({k},{i},{j}) exceeds order {order}")
            if (k, i, j) in seen:
                raise ExprError(f"duplicate entry ({k},{i},{j})")
            val = float(val)
            if not math.isfinite(val):
                raise ExprError(f"non-finite value at ({k},{i},{j})")
            seen.add((k, i, j))
            terms[(i, j)] = val
        jets.append(Jet2.from_terms(terms, order))
    return Jet2Vec3(*jets)


def dump_table(f: Jet2Vec3) -> str:
    comps = [[[i, j, c] for i, j, c in comp.terms() if c != 0.0] for comp in f]
    return json.dumps({"order": f.order, "components": comps})
