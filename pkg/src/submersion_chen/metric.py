"""Metric fields, Christoffel symbols and the Riemann tensor on a chart.

Curvature convention: R(X,Y)Z = [D_X, D_Y]Z - D_[X,Y] Z and
R(X,Y,Z,W) = g(R(X,Y)Z, W), so a round unit sphere has R(X,Y,Y,X) = 1
on orthonormal X, Y.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .domain import Domain
from .errors import DegeneratePlane, NonPositiveDefinite, ShapeError
from .fields import ANALYTIC, ArrayField, expression_grid


def as_point(p, dim: int) -> np.ndarray:
    x = np.asarray(p, dtype=float).reshape(-1)
    if x.shape != (dim,):
        raise ShapeError(f"point has {x.size} coordinates, expected {dim}")
    if not np.all(np.isfinite(x)):
        raise ShapeError("point coordinates must be finite")
    return x


class MetricField(ArrayField):
    """Symmetric bilinear form g_ij(x) on an n-dimensional chart."""

    def __init__(self, entries, dim: int | None = None, *, mode: str | None = None,
                 domain: Domain | None = None, derivatives: Callable | None = None,
                 prefix: str = "x", parameters=None, pd_tol: float = 1e-10):
        self.pd_tol = pd_tol
        if callable(entries):
            if dim is None:
                raise ShapeError("dim is required for callable metrics")
            super().__init__((dim, dim), dim, func=entries, derivatives=derivatives,
                             mode=mode, domain=domain)
            return
        rows = [list(r) for r in entries]
        n = len(rows) if dim is None else dim
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ShapeError(f"metric must be {n}x{n}")
        # upper triangle is authoritative
        sym = [[rows[min(i, j)][max(i, j)] for j in range(n)] for i in range(n)]
        exprs = expression_grid(sym, (n, n), n, prefix, parameters)
        super().__init__((n, n), n, exprs=exprs, mode=mode, domain=domain)

    @classmethod
    def euclidean(cls, n: int) -> "MetricField":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, items: Sequence, **kw) -> "MetricField":
        n = len(items)
        return cls([[items[i] if i == j else 0 for j in range(n)] for i in range(n)], **kw)


def _check_pd(G: np.ndarray, pd_tol: float):
    lam = np.linalg.eigvalsh(G)
    if lam[0] <= pd_tol:
        raise NonPositiveDefinite(f"smallest eigenvalue {lam[0]:.3e} <= {pd_tol:.1e}")
    return cho_factor(G)


def eval_metric(field: MetricField, p) -> np.ndarray:
    G = field.value(as_point(p, field.dim))
    G = 0.5 * (G + G.T)
    _check_pd(G, field.pd_tol)
    return G


@dataclass(frozen=True)
class LocalMetric:
    """Metric data at one point: g, dg, ddg, Christoffel symbols and their derivatives."""

    x: np.ndarray
    G: np.ndarray
    dG: np.ndarray      # dG[k,i,j] = d_k g_ij
    gamma: np.ndarray   # gamma[k,i,j] = Gamma^k_ij
    dgamma: np.ndarray | None  # dgamma[a,k,i,j] = d_a Gamma^k_ij
    factor: tuple

    def inverse_apply(self, v: np.ndarray) -> np.ndarray:
        shape = v.shape
        return cho_solve(self.factor, v.reshape(shape[0], -1)).reshape(shape)


def local_metric(field: MetricField, p, second: bool = True) -> LocalMetric:
    x = as_point(p, field.dim)
    n = field.dim
    G, dG, ddG = field.derivatives(x, order=2 if second else 1)
    G = 0.5 * (G + G.T)
    dG = 0.5 * (dG + dG.transpose(0, 2, 1))
    factor = _check_pd(G, field.pd_tol)
    # S[l,i,j] = d_i g_lj + d_j g_li - d_l g_ij
    S = dG.transpose(1, 0, 2) + dG.transpose(1, 2, 0) - dG
    gamma = 0.5 * cho_solve(factor, S.reshape(n, -1)).reshape(n, n, n)
    gamma = 0.5 * (gamma + gamma.transpose(0, 2, 1))
    dgamma = None
    if second:
        ddG = 0.5 * (ddG + ddG.transpose(0, 1, 3, 2))
        dS = ddG.transpose(0, 2, 1, 3) + ddG.transpose(0, 2, 3, 1) - ddG
        term1 = np.einsum("apq,qij->apij", dG, gamma)
        rhs = 0.5 * dS - term1  # rhs[a,l,i,j]; solve g^{kl}
        dgamma = cho_solve(factor, rhs.transpose(1, 0, 2, 3).reshape(n, -1))
        dgamma = dgamma.reshape(n, n, n, n).transpose(1, 0, 2, 3)
    return LocalMetric(x, G, dG, gamma, dgamma, factor)


def christoffel(field: MetricField, p) -> np.ndarray:
    """Gamma[k,i,j] = Gamma^k_ij at p."""
    return local_metric(field, p, second=False).gamma


@dataclass(frozen=True)
class CurvatureTensor:
    """(0,4) curvature R(Z1,Z2,Z3,Z4) in coordinate components."""

    components: np.ndarray
    metric: np.ndarray

    def value(self, Z1, Z2, Z3, Z4) -> float:
        return float(np.einsum("abcd,a,b,c,d->", self.components, Z1, Z2, Z3, Z4))

    def sectional(self, u, v) -> float:
        G = self.metric
        area = (u @ G @ u) * (v @ G @ v) - (u @ G @ v) ** 2
        if area <= 1e-24 * max(1.0, (u @ G @ u) * (v @ G @ v)):
            raise DegeneratePlane("plane vectors are parallel")
        return self.value(u, v, v, u) / area

    def in_frame(self, E: np.ndarray) -> np.ndarray:
        """Components on the rows of E."""
        return np.einsum("abcd,ia,jb,kc,ld->ijkl", self.components, E, E, E, E, optimize=True)


def riemann_from_local(lm: LocalMetric) -> CurvatureTensor:
    g, dg = lm.gamma, lm.dgamma
    # Rup[d,c,a,b]: R(d_a,d_b)d_c = Rup[d,c,a,b] d_d
    Rup = (np.einsum("adbc->dcab", dg) - np.einsum("bdac->dcab", dg)
           + np.einsum("dae,ebc->dcab", g, g) - np.einsum("dbe,eac->dcab", g, g))
    R = np.einsum("wd,dcab->abcw", lm.G, Rup)
    return CurvatureTensor(R, lm.G)


def riemann(field: MetricField, p) -> CurvatureTensor:
    return riemann_from_local(local_metric(field, p))


def curvature_symmetry_residuals(R: np.ndarray) -> dict:
    return {
        "antisym12": float(np.max(np.abs(R + R.transpose(1, 0, 2, 3)))),
        "antisym34": float(np.max(np.abs(R + R.transpose(0, 1, 3, 2)))),
        "pair": float(np.max(np.abs(R - R.transpose(2, 3, 0, 1)))),
        "bianchi": float(np.max(np.abs(R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)))),
    }


def metricity_residual(lm: LocalMetric) -> float:
    """max |d_a g_ij - Gamma^l_ai g_lj - Gamma^l_aj g_il|."""
    t = np.einsum("lai,lj->aij", lm.gamma, lm.G)
    return float(np.max(np.abs(lm.dG - t - t.transpose(0, 2, 1))))


__all__ = [
    "ANALYTIC", "CurvatureTensor", "LocalMetric", "MetricField", "as_point", "christoffel",
    "curvature_symmetry_residuals", "eval_metric", "local_metric", "metricity_residual",
    "riemann", "riemann_from_local",
]
