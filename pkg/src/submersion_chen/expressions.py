"""Closed-form scalar expressions over chart coordinates.

Grammar::

    expr  := term (('+'|'-') term)*
    term  := unary (('*'|'/') unary)*
    unary := '-'? power
    power := atom ('^' unary)?
    atom  := number | const | var | func '(' expr ')' | '(' expr ')'

Expressions can be evaluated as plain floats, as second-order jets
(value, gradient, Hessian) for exact metric derivatives, or differentiated
symbolically into new expressions.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ArityError, DomainViolation, ExpressionSyntaxError, UnknownIdentifier

FUNCTIONS = ("exp", "log", "sqrt", "sin", "cos", "tan", "sinh", "cosh")
CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class Node:
    op: str  # num, var, neg, add, sub, mul, div, pow, call
    args: tuple = ()
    value: float = 0.0
    name: str = ""
    index: int = -1


def _num(v: float, label: str = "") -> Node:
    return Node("num", value=float(v), name=label)


def _is_num(n: Node, v: float | None = None) -> bool:
    return n.op == "num" and (v is None or n.value == v)


# -- tokenizer / parser -----------------------------------------------------

def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExpressionSyntaxError(
                f"unexpected character {text[start]!r}", _byte_offset(text, start), text
            )
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), _byte_offset(text, start)))
        pos = m.end()
    tokens.append(("end", "", _byte_offset(text, len(text))))
    return tokens


class _Parser:
    def __init__(self, text, variables, constants):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables = variables
        self.constants = constants

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ExpressionSyntaxError(msg, tok[2], self.text)

    def expect(self, op):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            self.fail(f"expected {op!r}, found {what}")
        return self.take()

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = Node("add" if op == "+" else "sub", (node, self.term()))
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = Node("mul" if op == "*" else "div", (node, self.unary()))
        return node

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return Node("neg", (self.power(),))
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return Node("pow", (base, self.unary()))
        return base

    def atom(self):
        kind, text, off = self.peek()
        if kind == "num":
            self.take()
            return _num(float(text), text)
        if kind == "name":
            self.take()
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                nargs = 1
                while self.peek()[0] == "op" and self.peek()[1] == ",":
                    self.take()
                    self.expr()
                    nargs += 1
                if nargs != 1:
                    raise ArityError(f"{text} takes 1 argument, got {nargs} (offset {off})")
                self.expect(")")
                return Node("call", (arg,), name=text)
            if text in self.constants:
                return _num(self.constants[text], text)
            if text in self.variables:
                return Node("var", name=text, index=self.variables[text])
            raise UnknownIdentifier(f"unknown identifier {text!r} at offset {off}")
        if kind == "op" and text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected token {text!r}")


# -- evaluation ---------------------------------------------------------------

def _scalar_fn(name):
    return {
        "exp": math.exp, "log": math.log, "sqrt": math.sqrt, "sin": math.sin,
        "cos": math.cos, "tan": math.tan, "sinh": math.sinh, "cosh": math.cosh,
    }[name]


def _fn_derivs(name, u):
    """f(u), f'(u), f''(u) for the supported functions."""
    if name == "exp":
        v = math.exp(u)
        return v, v, v
    if name == "log":
        if u <= 0:
            raise DomainViolation(f"log of non-positive value {u}")
        return math.log(u), 1.0 / u, -1.0 / (u * u)
    if name == "sqrt":
        if u <= 0:
            raise DomainViolation(f"sqrt not differentiable at {u}")
        s = math.sqrt(u)
        return s, 0.5 / s, -0.25 / (s * u)
    if name == "sin":
        return math.sin(u), math.cos(u), -math.sin(u)
    if name == "cos":
        return math.cos(u), -math.sin(u), -math.cos(u)
    if name == "tan":
        t = math.tan(u)
        return t, 1 + t * t, 2 * t * (1 + t * t)
    if name == "sinh":
        return math.sinh(u), math.cosh(u), math.sinh(u)
    if name == "cosh":
        return math.cosh(u), math.sinh(u), math.cosh(u)
    raise KeyError(name)


def _eval(node: Node, x) -> float:
    op = node.op
    if op == "num":
        return node.value
    if op == "var":
        return float(x[node.index])
    if op == "neg":
        return -_eval(node.args[0], x)
    if op == "call":
        u = _eval(node.args[0], x)
        if node.name == "log" and u <= 0:
            raise DomainViolation(f"log of non-positive value {u}")
        if node.name == "sqrt" and u < 0:
            raise DomainViolation(f"sqrt of negative value {u}")
        try:
            return _scalar_fn(node.name)(u)
        except (OverflowError, ValueError) as exc:
            raise DomainViolation(f"{node.name}({u}): {exc}") from exc
    a = _eval(node.args[0], x)
    b = _eval(node.args[1], x)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise DomainViolation("division by zero")
        return a / b
    if op == "pow":
        return _pow_value(a, b)
    raise ValueError(op)


def _pow_value(a, b):
    if a == 0 and b < 0:
        raise DomainViolation("zero raised to a negative power")
    if a < 0 and not float(b).is_integer():
        raise DomainViolation("negative base with non-integer exponent")
    try:
        return math.pow(a, b)
    except (OverflowError, ValueError) as exc:
        raise DomainViolation(str(exc)) from exc


class Jet:
    """Second-order Taylor data: value, gradient and Hessian."""

    __slots__ = ("v", "g", "H")

    def __init__(self, v, g, H):
        self.v, self.g, self.H = v, g, H

    def apply(self, f0, f1, f2):
        return Jet(f0, f1 * self.g, f1 * self.H + f2 * np.outer(self.g, self.g))


def _jet_mul(a, b):
    if not isinstance(a, Jet):
        return Jet(a * b.v, a * b.g, a * b.H) if isinstance(b, Jet) else a * b
    if not isinstance(b, Jet):
        return Jet(a.v * b, a.g * b, a.H * b)
    og = np.outer(a.g, b.g)
    return Jet(a.v * b.v, a.g * b.v + a.v * b.g, a.H * b.v + a.v * b.H + og + og.T)


def _jet_recip(b):
    if b.v == 0:
        raise DomainViolation("division by zero")
    return b.apply(1.0 / b.v, -1.0 / b.v ** 2, 2.0 / b.v ** 3)


def _jet(node: Node, x, n):
    op = node.op
    if op == "num":
        return node.value
    if op == "var":
        g = np.zeros(n)
        g[node.index] = 1.0
        return Jet(float(x[node.index]), g, np.zeros((n, n)))
    if op == "neg":
        a = _jet(node.args[0], x, n)
        return Jet(-a.v, -a.g, -a.H) if isinstance(a, Jet) else -a
    if op == "call":
        a = _jet(node.args[0], x, n)
        if not isinstance(a, Jet):
            return _eval(Node("call", (_num(a),), name=node.name), x)
        try:
            return a.apply(*_fn_derivs(node.name, a.v))
        except OverflowError as exc:
            raise DomainViolation(str(exc)) from exc
    a = _jet(node.args[0], x, n)
    b = _jet(node.args[1], x, n)
    if op in ("add", "sub"):
        s = 1.0 if op == "add" else -1.0
        if not isinstance(a, Jet) and not isinstance(b, Jet):
            return a + s * b
        if not isinstance(a, Jet):
            return Jet(a + s * b.v, s * b.g, s * b.H)
        if not isinstance(b, Jet):
            return Jet(a.v + s * b, a.g, a.H)
        return Jet(a.v + s * b.v, a.g + s * b.g, a.H + s * b.H)
    if op == "mul":
        return _jet_mul(a, b)
    if op == "div":
        if not isinstance(b, Jet):
            if b == 0:
                raise DomainViolation("division by zero")
            return _jet_mul(a, 1.0 / b)
        return _jet_mul(a, _jet_recip(b))
    if op == "pow":
        if not isinstance(b, Jet):
            if not isinstance(a, Jet):
                return _pow_value(a, b)
            if b == 0:
                return 1.0
            f0 = _pow_value(a.v, b)
            f1 = b * _pow_value(a.v, b - 1) if b != 1 else 1.0
            f2 = b * (b - 1) * _pow_value(a.v, b - 2) if b not in (0, 1) else 0.0
            return a.apply(f0, f1, f2)
        # general case: a^b = exp(b log a)
        if not isinstance(a, Jet):
            if a <= 0:
                raise DomainViolation("non-positive base with variable exponent")
            return _jet_mul(b, math.log(a)).apply(*([_pow_value(a, b.v)] * 3))
        if a.v <= 0:
            raise DomainViolation("non-positive base with variable exponent")
        e = _jet_mul(b, a.apply(*_fn_derivs("log", a.v)))
        f = math.exp(e.v)
        return e.apply(f, f, f)
    raise ValueError(op)


# -- symbolic differentiation ---------------------------------------------------

def _add(a, b):
    if _is_num(a, 0):
        return b
    if _is_num(b, 0):
        return a
    if _is_num(a) and _is_num(b):
        return _num(a.value + b.value)
    return Node("add", (a, b))


def _sub(a, b):
    if _is_num(b, 0):
        return a
    if _is_num(a, 0):
        return _neg(b)
    if _is_num(a) and _is_num(b):
        return _num(a.value - b.value)
    return Node("sub", (a, b))


def _neg(a):
    if _is_num(a):
        return _num(-a.value)
    if a.op == "neg":
        return a.args[0]
    return Node("neg", (a,))


def _mul(a, b):
    if _is_num(a, 0) or _is_num(b, 0):
        return _num(0)
    if _is_num(a, 1):
        return b
    if _is_num(b, 1):
        return a
    if _is_num(a) and _is_num(b):
        return _num(a.value * b.value)
    return Node("mul", (a, b))


def _div(a, b):
    if _is_num(a, 0):
        return _num(0)
    if _is_num(b, 1):
        return a
    return Node("div", (a, b))


def _pow(a, b):
    if _is_num(b, 0):
        return _num(1)
    if _is_num(b, 1):
        return a
    return Node("pow", (a, b))


def _call(name, a):
    return Node("call", (a,), name=name)


def _depends(node: Node, index: int) -> bool:
    if node.op == "var":
        return node.index == index
    return any(_depends(a, index) for a in node.args)


def _diff(node: Node, k: int) -> Node:
    op = node.op
    if op == "num":
        return _num(0)
    if op == "var":
        return _num(1.0 if node.index == k else 0.0)
    if op == "neg":
        return _neg(_diff(node.args[0], k))
    if op == "call":
        u = node.args[0]
        du = _diff(u, k)
        if _is_num(du, 0):
            return _num(0)
        name = node.name
        if name == "exp":
            outer = node
        elif name == "log":
            outer = _div(_num(1), u)
        elif name == "sqrt":
            outer = _div(_num(0.5), node)
        elif name == "sin":
            outer = _call("cos", u)
        elif name == "cos":
            outer = _neg(_call("sin", u))
        elif name == "tan":
            outer = _add(_num(1), _pow(node, _num(2)))
        elif name == "sinh":
            outer = _call("cosh", u)
        elif name == "cosh":
            outer = _call("sinh", u)
        else:
            raise ValueError(name)
        return _mul(outer, du)
    a, b = node.args
    da, db = _diff(a, k), _diff(b, k)
    if op == "add":
        return _add(da, db)
    if op == "sub":
        return _sub(da, db)
    if op == "mul":
        return _add(_mul(da, b), _mul(a, db))
    if op == "div":
        return _div(_sub(_mul(da, b), _mul(a, db)), _pow(b, _num(2)))
    if op == "pow":
        if not _depends(b, k):
            if _is_num(da, 0):
                return _num(0)
            return _mul(_mul(b, _pow(a, _sub(b, _num(1)))), da)
        return _mul(node, _add(_mul(db, _call("log", a)), _div(_mul(b, da), a)))
    raise ValueError(op)


# -- printing -------------------------------------------------------------------

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}
_SYM = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}


def _fmt_num(node: Node) -> str:
    if node.name and (node.name[0].isalpha() or node.name[0] == "_"):
        return node.name
    if node.value.is_integer() and abs(node.value) < 1e15:
        return str(int(node.value))
    return repr(node.value)


def _to_str(node: Node) -> str:
    op = node.op
    if op == "num":
        s = _fmt_num(node)
        return f"({s})" if s.startswith("-") else s
    if op == "var":
        return node.name
    if op == "call":
        return f"{node.name}({_to_str(node.args[0])})"
    if op == "neg":
        inner = _to_str(node.args[0])
        if node.args[0].op in ("add", "sub", "mul", "div", "neg"):
            inner = f"({inner})"
        return f"-{inner}"
    a, b = node.args
    p = _PREC[op]
    sa, sb = _to_str(a), _to_str(b)
    if _PREC.get(a.op, 9) < p or (op == "pow" and a.op in ("pow", "neg")):
        sa = f"({sa})"
    pb = _PREC.get(b.op, 9)
    if op == "pow":
        if pb < 3:
            sb = f"({sb})"
    elif pb < p or (pb == p and op in ("sub", "div")) or b.op == "neg":
        sb = f"({sb})"
    return f"{sa}{_SYM[op]}{sb}"


# -- public wrapper -----------------------------------------------------------------

class Expression:
    """Parsed expression bound to an ordered tuple of variable names."""

    def __init__(self, root: Node, variables: Sequence[str], source: str | None = None):
        self.root = root
        self.variables = tuple(variables)
        self.source = source if source is not None else _to_str(root)

    @property
    def dim(self) -> int:
        return len(self.variables)

    def __call__(self, x) -> float:
        v = _eval(self.root, x)
        if not math.isfinite(v):
            raise DomainViolation(f"non-finite value for {self.source!r}")
        return v

    def jet(self, x):
        """Return (value, gradient, Hessian) at x, exact to round-off."""
        n = self.dim
        j = _jet(self.root, x, n)
        if not isinstance(j, Jet):
            return float(j), np.zeros(n), np.zeros((n, n))
        if not (np.isfinite(j.v) and np.all(np.isfinite(j.g)) and np.all(np.isfinite(j.H))):
            raise DomainViolation(f"non-finite jet for {self.source!r}")
        return j.v, j.g, j.H

    def diff(self, var: str | int) -> "Expression":
        k = self.variables.index(var) if isinstance(var, str) else int(var)
        return Expression(_diff(self.root, k), self.variables)

    @property
    def is_constant(self) -> bool:
        return not any(_depends(self.root, k) for k in range(self.dim))

    def canonical(self) -> str:
        return _to_str(self.root)

    def __repr__(self) -> str:
        return f"Expression({self.source!r})"


def coordinate_names(n: int, prefix: str = "x") -> tuple:
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


def parse_expression(
    text: str | float | int,
    n: int | None = None,
    prefix: str = "x",
    parameters: Mapping[str, float] | None = None,
) -> Expression:
    """Parse `text` over variables prefix1..prefixn.

    With n=None every identifier prefix<k> is accepted and the variable
    tuple grows to the largest index seen.
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        text = repr(float(text))
    if not isinstance(text, str):
        raise ExpressionSyntaxError(f"expression must be a string, got {type(text).__name__}", 0)
    constants = dict(CONSTANTS)
    if parameters:
        constants.update({k: float(v) for k, v in parameters.items()})
    if n is None:
        found = [int(m) for m in re.findall(rf"\b{re.escape(prefix)}(\d+)\b", text)]
        n = max(found, default=0)
    variables = coordinate_names(n, prefix)
    index = {name: i for i, name in enumerate(variables)}
    root = _Parser(text, index, constants).parse()
    return Expression(root, variables, source=text)
