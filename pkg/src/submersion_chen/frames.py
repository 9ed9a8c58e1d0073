"""Smooth maps, vertical/horizontal splitting and orthonormal frames."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .domain import Domain
from .errors import (DegeneratePlane, DomainViolation, GeometryError, GramSchmidtBreakdown,
                     NonPositiveDefinite, RankDeficient, ShapeError)
from .fields import ArrayField, expression_grid
from .metric import MetricField, as_point, eval_metric
from .tolerances import Tolerances


class SmoothMap(ArrayField):
    """F = (y_1, ..., y_m) as functions of x_1..x_n."""

    def __init__(self, components, n: int, m: int | None = None, *, mode: str | None = None,
                 domain: Domain | None = None, derivatives: Callable | None = None,
                 parameters=None):
        if callable(components):
            if m is None:
                raise ShapeError("m is required for callable maps")
            super().__init__((m,), n, func=components, derivatives=derivatives,
                             mode=mode, domain=domain)
        else:
            comps = list(components)
            m = len(comps) if m is None else m
            if len(comps) != m:
                raise ShapeError(f"map has {len(comps)} components, expected {m}")
            super().__init__((m,), n, exprs=expression_grid(comps, (m,), n, "x", parameters),
                             mode=mode, domain=domain)
        if m > n:
            raise ShapeError(f"base dimension {m} exceeds total dimension {n}")
        self.n, self.m = n, m

    def jets(self, x):
        """(F, J, dJ) with J[a,k] = dy_a/dx_k and dJ[c,a,k] = d_c J[a,k]."""
        F, dF, ddF = self.derivatives(x, order=2)
        return F, dF.T.copy(), ddF.transpose(0, 2, 1).copy()


@dataclass(eq=False)
class SubmersionSetup:
    g1: MetricField
    g2: MetricField
    map: SmoothMap
    structure: object = None
    domain: Domain = field(default_factory=Domain)
    name: str = ""
    tolerances: Tolerances | None = None

    def __post_init__(self):
        if self.g1.dim != self.map.n or self.g2.dim != self.map.m:
            raise ShapeError(
                f"dimension mismatch: g1 {self.g1.dim}, g2 {self.g2.dim}, map {self.map.n}->{self.map.m}")
        if self.tolerances is None:
            self.tolerances = Tolerances.for_mode(self.is_analytic)

    n = property(lambda self: self.map.n)
    m = property(lambda self: self.map.m)
    r = property(lambda self: self.map.n - self.map.m)
    s = property(lambda self: self.map.m)

    @property
    def is_analytic(self) -> bool:
        return self.g1.is_analytic and self.map.is_analytic

    def check_point(self, p, stencil: bool = False) -> np.ndarray:
        x = as_point(p, self.n)
        self.domain.check(x, stencil=stencil)
        return x


@dataclass(frozen=True)
class FramePair:
    point: np.ndarray
    vertical: np.ndarray    # (r, n), rows are V_1..V_r
    horizontal: np.ndarray  # (s, n), rows are h_1..h_s

    r = property(lambda self: self.vertical.shape[0])
    s = property(lambda self: self.horizontal.shape[0])

    def basis(self) -> np.ndarray:
        return np.vstack([self.vertical, self.horizontal])


@dataclass(frozen=True)
class Plane2:
    """Two g1-orthonormal vectors spanning a 2-plane."""

    space: str  # vertical | horizontal | ambient
    basis: np.ndarray  # (2, n)


# -- pointwise linear algebra ---------------------------------------------------------

def _rank_check(J: np.ndarray, tol: Tolerances) -> None:
    sv = np.linalg.svd(J, compute_uv=False)
    if sv.size == 0:
        return
    if sv[-1] <= tol.rank_tol * max(sv[0], 1e-300):
        raise RankDeficient(f"pushforward rank < {J.shape[0]} (singular values {sv})")


def pushforward(setup: SubmersionSetup, p) -> np.ndarray:
    x = setup.check_point(p)
    J = setup.map.derivatives(x, order=1)[1].T
    _rank_check(J, setup.tolerances)
    return J


@dataclass(frozen=True)
class SplitData:
    """Projectors onto vertical/horizontal parts (acting on column vectors)."""

    G: np.ndarray
    J: np.ndarray
    Pv: np.ndarray
    Ph: np.ndarray
    dPh: np.ndarray | None  # dPh[c] = d_c Ph


def split_from_jets(G, dG, J, dJ, tol: Tolerances) -> SplitData:
    _rank_check(J, tol)
    n = G.shape[0]
    Ginv = np.linalg.inv(G)
    K = Ginv @ J.T
    M = J @ K
    Minv = np.linalg.inv(M)
    Ph = K @ Minv @ J
    Pv = np.eye(n) - Ph
    dPh = None
    if dG is not None and dJ is not None:
        dGinv = -np.einsum("ip,cpq,qj->cij", Ginv, dG, Ginv)
        dK = dGinv @ J.T + Ginv @ dJ.transpose(0, 2, 1)
        dM = dJ @ K + J @ dK
        dMinv = -Minv @ dM @ Minv
        dPh = dK @ Minv @ J + K @ dMinv @ J + K @ Minv @ dJ
    return SplitData(G, J, Pv, Ph, dPh)


def split(setup: SubmersionSetup, p) -> SplitData:
    x = setup.check_point(p)
    G = eval_metric(setup.g1, x)
    J = setup.map.derivatives(x, order=1)[1].T
    return split_from_jets(G, None, J, None, setup.tolerances)


# -- Gram-Schmidt ------------------------------------------------------------------------

def _gs_greedy(G, chosen: list, candidates: np.ndarray, count: int, frame_tol: float):
    """Extend `chosen` by `count` vectors taken greedily from candidates.

    At each step the residuals of all candidates against the current span
    are computed; the lowest-index candidate whose residual norm is at
    least half the largest one is accepted.
    """
    out = list(chosen)
    for _ in range(count):
        best = None
        res = []
        for c in candidates:
            v = c.copy()
            for q in out:
                v = v - (q @ G @ v) * q
            for q in out:  # second pass for stability
                v = v - (q @ G @ v) * q
            res.append(v)
        norms = np.array([np.sqrt(max(v @ G @ v, 0.0)) for v in res])
        top = norms.max(initial=0.0)
        if top <= frame_tol:
            raise GramSchmidtBreakdown(f"pivot {top:.3e} below frame_tol")
        for k, nv in enumerate(norms):
            if nv >= 0.5 * top:
                best = res[k] / nv
                break
        out.append(best)
    return out


def orthonormalize(G, vectors, frame_tol: float = 1e-9) -> np.ndarray:
    """Plain Gram-Schmidt in the given order."""
    out = []
    for v in np.atleast_2d(np.asarray(vectors, dtype=float)):
        w = v.copy()
        for _ in range(2):
            for q in out:
                w = w - (q @ G @ w) * q
        nv = np.sqrt(max(w @ G @ w, 0.0))
        scale = np.sqrt(max(v @ G @ v, 1e-300))
        if nv <= frame_tol * max(1.0, scale):
            raise DegeneratePlane("vectors are linearly dependent")
        out.append(w / nv)
    return np.array(out)


def _frames_from_split(x, sd: SplitData, tol: Tolerances, seed_basis=None) -> FramePair:
    n = sd.G.shape[0]
    m = sd.J.shape[0]
    seeds = np.eye(n) if seed_basis is None else np.asarray(seed_basis, dtype=float)
    if seeds.shape != (n, n):
        raise ShapeError(f"seed basis must be {n} vectors of length {n}")
    vert = _gs_greedy(sd.G, [], (sd.Pv @ seeds.T).T, n - m, tol.frame_tol)
    hor = _gs_greedy(sd.G, [], (sd.Ph @ seeds.T).T, m, tol.frame_tol)
    V = np.array(vert).reshape(n - m, n)
    H = np.array(hor).reshape(m, n)
    return FramePair(x.copy(), V, H)


def build_frames(setup: SubmersionSetup, p, seed_basis=None) -> FramePair:
    x = setup.check_point(p)
    return _frames_from_split(x, split(setup, x), setup.tolerances, seed_basis)


def frame_residuals(setup: SubmersionSetup, frames: FramePair) -> dict:
    G = eval_metric(setup.g1, frames.point)
    J = pushforward(setup, frames.point)
    V, H = frames.vertical, frames.horizontal
    return {
        "vertical_orthonormality": float(np.max(np.abs(V @ G @ V.T - np.eye(V.shape[0])), initial=0)),
        "horizontal_orthonormality": float(np.max(np.abs(H @ G @ H.T - np.eye(H.shape[0])), initial=0)),
        "cross": float(np.max(np.abs(V @ G @ H.T), initial=0)),
        "verticality": float(np.max(np.linalg.norm(J @ V.T, axis=0), initial=0)),
    }


# -- frame adaptation -------------------------------------------------------------

def _plane_vectors(spec, frame_rows: np.ndarray, P: np.ndarray, G, tol: Tolerances, label: str):
    """Resolve a plane spec into two orthonormal vectors of the distribution."""
    if spec is None:
        spec = (0, 1)
    if isinstance(spec, Plane2):
        vecs = np.asarray(spec.basis, dtype=float)
    else:
        arr = np.asarray(spec)
        if arr.ndim == 1 and arr.size == 2 and np.issubdtype(arr.dtype, np.integer):
            i, j = int(arr[0]), int(arr[1])
            if i == j or not (0 <= i < len(frame_rows) and 0 <= j < len(frame_rows)):
                raise DegeneratePlane(f"invalid {label} frame indices {spec}")
            return frame_rows[[i, j]]
        vecs = np.asarray(arr, dtype=float)
    if vecs.shape != (2, G.shape[0]):
        raise ShapeError(f"{label} plane needs two vectors of length {G.shape[0]}")
    for v in vecs:
        off = v - P @ v
        if np.sqrt(max(off @ G @ off, 0.0)) > tol.frame_tol * max(1.0, np.sqrt(v @ G @ v)):
            raise DegeneratePlane(f"vector {v.tolist()} is not in the {label} distribution")
    return orthonormalize(G, vecs, tol.frame_tol)


def adapt_frames(setup: SubmersionSetup, frames: FramePair, vertical_plane=None,
                 horizontal_plane=None, h1=None) -> FramePair:
    """Rebuild frames so the given planes are spanned by the first two vectors.

    `h1`, if given, is a horizontal vector used as the first horizontal
    frame vector (it takes precedence over `horizontal_plane`).
    """
    x = frames.point
    sd = split(setup, x)
    G, tol = sd.G, setup.tolerances
    V = frames.vertical
    if V.shape[0] >= 2:
        pv = _plane_vectors(vertical_plane, V, sd.Pv, G, tol, "vertical")
        V = np.array(_gs_greedy(G, list(pv), V, V.shape[0] - 2, tol.frame_tol))
    H = frames.horizontal
    if h1 is not None:
        first = orthonormalize(G, [np.asarray(h1, float)], tol.frame_tol)
        H = np.array(_gs_greedy(G, list(first), H, H.shape[0] - 1, tol.frame_tol))
    elif H.shape[0] >= 2 and horizontal_plane is not None:
        ph = _plane_vectors(horizontal_plane, H, sd.Ph, G, tol, "horizontal")
        H = np.array(_gs_greedy(G, list(ph), H, H.shape[0] - 2, tol.frame_tol))
    return FramePair(x, V.reshape(frames.vertical.shape), H.reshape(frames.horizontal.shape))


def plane_from_spec(setup: SubmersionSetup, frames: FramePair, spec, space: str) -> Plane2:
    sd = split(setup, frames.point)
    rows = frames.vertical if space == "vertical" else frames.horizontal
    P = sd.Pv if space == "vertical" else sd.Ph
    return Plane2(space, _plane_vectors(spec, rows, P, sd.G, setup.tolerances, space))


# -- submersion validation ----------------------------------------------------------

@dataclass(frozen=True)
class SubmersionReport:
    residuals: tuple
    flagged: tuple
    tolerance: float

    @property
    def max_residual(self) -> float:
        if not self.residuals:
            return 0.0
        return float(np.max(self.residuals))  # nan propagates

    @property
    def passed(self) -> bool:
        return not self.flagged


def submersion_residual(setup: SubmersionSetup, p, frames: FramePair | None = None) -> float:
    x = setup.check_point(p)
    frames = frames or build_frames(setup, x)
    J = pushforward(setup, x)
    G1 = eval_metric(setup.g1, x)
    try:
        y = setup.map.value(x)
        G2 = setup.g2.value(y)
    except (DomainViolation, GeometryError):
        return float("nan")
    H = frames.horizontal
    FH = H @ J.T
    return float(np.max(np.abs(H @ G1 @ H.T - FH @ G2 @ FH.T), initial=0.0))


def validate_submersion(setup: SubmersionSetup, points: Sequence) -> SubmersionReport:
    tol = setup.tolerances.sub_tol
    res = []
    flagged = []
    for k, p in enumerate(points):
        try:
            v = submersion_residual(setup, p)
        except (NonPositiveDefinite, DomainViolation):
            v = float("nan")
        res.append(v)
        if not (v <= tol):
            flagged.append(k)
    return SubmersionReport(tuple(res), tuple(flagged), tol)
