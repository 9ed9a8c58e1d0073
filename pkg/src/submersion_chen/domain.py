"""Chart-domain constraints such as ``x1 != 0`` or ``x6 > 0``."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import ConfigError, DomainViolation, StencilOutsideDomain
from .expressions import Expression, parse_expression

_OPS = ("!=", ">=", "<=", ">", "<")


@dataclass(frozen=True)
class Constraint:
    lhs: Expression
    op: str
    rhs: Expression
    text: str

    def holds(self, x) -> bool:
        try:
            a, b = self.lhs(x), self.rhs(x)
        except DomainViolation:
            return False
        return {
            "!=": a != b, ">": a > b, "<": a < b, ">=": a >= b, "<=": a <= b,
        }[self.op]


def parse_constraint(text: str, n: int, prefix: str = "x",
                     parameters: Mapping[str, float] | None = None) -> Constraint:
    m = re.match(r"^(.*?)(!=|>=|<=|>|<)(.*)$", text)
    if not m:
        raise ConfigError(f"constraint {text!r} needs one of {', '.join(_OPS)}")
    lhs = parse_expression(m.group(1), n, prefix, parameters)
    rhs = parse_expression(m.group(3), n, prefix, parameters)
    return Constraint(lhs, m.group(2), rhs, text.strip())


@dataclass(frozen=True)
class Domain:
    constraints: tuple = ()

    @classmethod
    def from_strings(cls, items: Iterable[str], n: int, prefix: str = "x",
                     parameters: Mapping[str, float] | None = None) -> "Domain":
        return cls(tuple(parse_constraint(t, n, prefix, parameters) for t in items))

    def check(self, x, stencil: bool = False) -> None:
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise DomainViolation(f"non-finite coordinates {x}")
        for c in self.constraints:
            if not c.holds(x):
                cls = StencilOutsideDomain if stencil else DomainViolation
                raise cls(f"constraint {c.text!r} fails at {x.tolist()}")

    def contains(self, x) -> bool:
        try:
            self.check(x)
        except DomainViolation:
            return False
        return True

    def to_strings(self) -> list:
        return [c.text for c in self.constraints]
