"""Array-valued fields on a chart with first and second derivatives.

A field is either a grid of parsed expressions (exact derivatives through
second-order jets) or a Python callable (central differences).
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .domain import Domain
from .errors import ConfigError, DomainViolation, ShapeError
from .expressions import Expression, parse_expression
from .tolerances import first_step, second_step

ANALYTIC = "analytic"
CENTRAL = "central"


class ArrayField:
    def __init__(
        self,
        shape: tuple,
        dim: int,
        *,
        exprs: Sequence[Expression | None] | None = None,
        func: Callable | None = None,
        derivatives: Callable | None = None,
        mode: str | None = None,
        domain: Domain | None = None,
    ):
        if (exprs is None) == (func is None):
            raise ConfigError("give exactly one of exprs or func")
        self.shape = tuple(shape)
        self.dim = int(dim)
        self.exprs = None if exprs is None else tuple(exprs)
        self.func = func
        self.user_derivatives = derivatives
        if mode is None:
            mode = ANALYTIC if (exprs is not None or derivatives is not None) else CENTRAL
        if mode not in (ANALYTIC, CENTRAL):
            raise ConfigError(f"unknown derivative mode {mode!r}")
        if mode == ANALYTIC and exprs is None and derivatives is None:
            raise ConfigError("analytic mode needs expressions or a derivatives callable")
        self.mode = mode
        self.domain = domain or Domain()
        if self.exprs is not None:
            if len(self.exprs) != int(np.prod(self.shape)):
                raise ShapeError("expression count does not match shape")
            for e in self.exprs:
                if e is not None and e.dim > dim:
                    raise ShapeError(f"expression {e.source!r} uses more than {dim} variables")

    @property
    def is_analytic(self) -> bool:
        return self.mode == ANALYTIC

    def _check(self, x, stencil=False):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ShapeError(f"point has shape {x.shape}, expected ({self.dim},)")
        self.domain.check(x, stencil=stencil)
        return x

    def _raw(self, x) -> np.ndarray:
        if self.func is not None:
            out = np.asarray(self.func(x), dtype=float)
            if out.shape != self.shape:
                raise ShapeError(f"callable returned shape {out.shape}, expected {self.shape}")
        else:
            out = np.array([0.0 if e is None else e(x) for e in self.exprs]).reshape(self.shape)
        if not np.all(np.isfinite(out)):
            raise DomainViolation(f"non-finite field value at {np.asarray(x).tolist()}")
        return out

    def value(self, x) -> np.ndarray:
        return self._raw(self._check(x))

    def derivatives(self, x, order: int = 2):
        """Return (F, dF, ddF) with dF[k,...] = d_k F and ddF[a,b,...] = d_a d_b F."""
        x = self._check(x)
        if self.mode == ANALYTIC:
            if self.exprs is not None:
                return self._jets(x)
            F = self._raw(x)
            dF, ddF = self.user_derivatives(x)
            return F, np.asarray(dF, float), np.asarray(ddF, float)
        return self._central(x, order)

    def _jets(self, x):
        n = self.dim
        size = len(self.exprs)
        F = np.zeros(size)
        dF = np.zeros((n, size))
        ddF = np.zeros((n, n, size))
        cache = {}
        for idx, e in enumerate(self.exprs):
            if e is None:
                continue
            key = id(e)
            if key not in cache:
                v, g, H = e.jet(x[: e.dim]) if e.dim else (e(x), np.zeros(0), np.zeros((0, 0)))
                gg = np.zeros(n)
                HH = np.zeros((n, n))
                gg[: e.dim] = g
                HH[: e.dim, : e.dim] = H
                cache[key] = (v, gg, HH)
            v, g, H = cache[key]
            F[idx], dF[:, idx], ddF[:, :, idx] = v, g, H
        return (F.reshape(self.shape), dF.reshape((n,) + self.shape),
                ddF.reshape((n, n) + self.shape))

    def _at(self, x):
        self.domain.check(x, stencil=True)
        return self._raw(x)

    def _central(self, x, order):
        n = self.dim
        F = self._raw(x)
        h1 = first_step(x)
        dF = np.zeros((n,) + self.shape)
        for k in range(n):
            e = np.zeros(n)
            e[k] = h1[k]
            dF[k] = (self._at(x + e) - self._at(x - e)) / (2 * h1[k])
        if order < 2:
            return F, dF, None
        h2 = second_step(x)
        ddF = np.zeros((n, n) + self.shape)
        for a in range(n):
            ea = np.zeros(n)
            ea[a] = h2[a]
            ddF[a, a] = (self._at(x + ea) - 2 * F + self._at(x - ea)) / h2[a] ** 2
            for b in range(a + 1, n):
                eb = np.zeros(n)
                eb[b] = h2[b]
                val = (self._at(x + ea + eb) - self._at(x + ea - eb)
                       - self._at(x - ea + eb) + self._at(x - ea - eb)) / (4 * h2[a] * h2[b])
                ddF[a, b] = ddF[b, a] = val
        return F, dF, ddF


def expression_grid(items, shape, dim, prefix="x", parameters=None):
    """Parse a flat or nested list of strings/numbers/None into Expressions."""
    flat = list(np.asarray(items, dtype=object).reshape(-1))
    if len(flat) != int(np.prod(shape)):
        raise ShapeError(f"expected {int(np.prod(shape))} entries, got {len(flat)}")
    out = []
    cache = {}
    for item in flat:
        if item is None:
            out.append(None)
            continue
        if isinstance(item, Expression):
            out.append(item)
            continue
        key = str(item).strip() if isinstance(item, str) else repr(float(item))
        if key in ("0", "0.0"):
            out.append(None)
            continue
        if key not in cache:
            cache[key] = parse_expression(item, dim, prefix, parameters)
        out.append(cache[key])
    return out
