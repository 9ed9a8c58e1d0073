"""Random twisted warped products used as oracle test beds.

Total space B x F with coordinates (b, y) and metric

    g1 = g_B(b) + f(b)^2 g_F(y)(dy + Theta(b) db, dy + Theta(b) db),

projected onto B with g2 = g_B. The projection is a Riemannian submersion;
the warping f makes T nonzero and the b-dependence of Theta makes A nonzero.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import SmoothMap, SubmersionSetup
from .metric import MetricField


def _lin(coefs, names, const=0.0):
    terms = [f"{const:.6f}"] + [f"({c:.6f})*{v}" for c, v in zip(coefs, names)]
    return "(" + "+".join(terms) + ")"


def _quad(rng, names, scale):
    lin = _lin(rng.uniform(-scale, scale, len(names)), names)
    sq = "+".join(f"({c:.6f})*{v}^2" for c, v in zip(rng.uniform(-scale, scale, len(names)), names))
    return f"({lin}+{sq})"


@dataclass(frozen=True)
class WarpedProduct:
    setup: SubmersionSetup
    point: np.ndarray
    base_dim: int
    fiber_dim: int


def random_warped_product(rng: np.random.Generator, base_dim: int = 2, fiber_dim: int = 3,
                          scale: float = 0.3) -> WarpedProduct:
    b, r = base_dim, fiber_dim
    n = b + r
    xb = [f"x{i + 1}" for i in range(b)]
    xy = [f"x{b + k + 1}" for k in range(r)]
    yb = [f"y{i + 1}" for i in range(b)]
    phi = _quad(rng, xb, scale)
    coef_phi = phi  # same conformal factor on the base, rewritten in y below
    psi = _quad(rng, xb, scale)
    chis = [_lin(rng.uniform(-scale, scale, r), xy) for _ in range(r)]
    theta = [[_lin(rng.uniform(-scale, scale, b), xb, rng.uniform(-scale, scale))
              for _ in range(b)] for _ in range(r)]
    f2 = f"exp(2*{psi})"
    gF = [f"exp(2*{c})" for c in chis]
    G = [[None] * n for _ in range(n)]
    for i in range(b):
        for j in range(i, b):
            parts = [f"{f2}*{gF[k]}*{theta[k][i]}*{theta[k][j]}" for k in range(r)]
            if i == j:
                parts.insert(0, f"exp(2*{phi})")
            G[i][j] = "+".join(parts)
        for k in range(r):
            G[i][b + k] = f"{f2}*{gF[k]}*{theta[k][i]}"
    for k in range(r):
        G[b + k][b + k] = f"{f2}*{gF[k]}"
    for i in range(n):
        for j in range(i):
            G[i][j] = G[j][i]
    base_phi = coef_phi
    for xs, ys in zip(xb, yb):
        base_phi = base_phi.replace(xs, ys)
    g2 = MetricField.diagonal([f"exp(2*{base_phi})"] * b, prefix="y")
    setup = SubmersionSetup(MetricField(G), g2, SmoothMap(xb, n), name="warped")
    point = rng.uniform(-0.5, 0.5, n)
    return WarpedProduct(setup, point, b, r)
