"""O'Neill tensors T and A, fiber mean curvature and delta(N).

T and A are assembled as coordinate (1,2) tensors from the projectors
onto the vertical and horizontal distributions, whose derivatives follow
from the metric and pushforward derivatives. Frames only enter when the
tensors are contracted, so no smooth frame extension is needed for T and
A themselves. Their covariant derivatives use central differences of the
tensor fields.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import FrameDiscontinuity
from .frames import FramePair, SplitData, SubmersionSetup, build_frames, split_from_jets
from .metric import CurvatureTensor, LocalMetric, local_metric, riemann_from_local
from .tolerances import first_step


@dataclass(frozen=True)
class PointGeometry:
    x: np.ndarray
    lm: LocalMetric
    split: SplitData
    Tc: np.ndarray  # Tc[k,a,b]: k-th component of T_{e_a} e_b
    Ac: np.ndarray  # Ac[k,a,b]: k-th component of A_{e_a} e_b
    curvature: CurvatureTensor | None = None

    @property
    def G(self) -> np.ndarray:
        return self.lm.G


def _oneill_coordinate(lm: LocalMetric, sd: SplitData):
    Pv, Ph, dPh, gam = sd.Pv, sd.Ph, sd.dPh, lm.gamma
    dPv = -dPh

    def nabla(X, dY, Y):
        # k-th component of D_{X e_a}(Y e_b), X, Y projector matrices
        return np.einsum("ca,ckb->kab", X, dY) + np.einsum("kcl,ca,lb->kab", gam, X, Y, optimize=True)

    Tc = np.einsum("km,mab->kab", Ph, nabla(Pv, dPv, Pv)) + np.einsum("km,mab->kab", Pv, nabla(Pv, dPh, Ph))
    Ac = np.einsum("km,mab->kab", Pv, nabla(Ph, dPh, Ph)) + np.einsum("km,mab->kab", Ph, nabla(Ph, dPv, Pv))
    return Tc, Ac


def _geometry_at(setup: SubmersionSetup, x: np.ndarray, second: bool, stencil: bool = False):
    setup.domain.check(x, stencil=stencil)
    lm = local_metric(setup.g1, x, second=second)
    _, J, dJ = setup.map.jets(x)
    sd = split_from_jets(lm.G, lm.dG, J, dJ, setup.tolerances)
    Tc, Ac = _oneill_coordinate(lm, sd)
    return lm, sd, Tc, Ac


@lru_cache(maxsize=256)
def _point_geometry_cached(setup: SubmersionSetup, key: tuple) -> PointGeometry:
    x = np.array(key)
    lm, sd, Tc, Ac = _geometry_at(setup, x, second=True)
    return PointGeometry(x, lm, sd, Tc, Ac, riemann_from_local(lm))


def point_geometry(setup: SubmersionSetup, p) -> PointGeometry:
    x = setup.check_point(p)
    return _point_geometry_cached(setup, tuple(float(v) for v in x))


def _covariant(nab_partial, T, gam):
    return (nab_partial
            + np.einsum("kcl,lab->kcab", gam, T)
            - np.einsum("lca,klb->kcab", gam, T)
            - np.einsum("lcb,kal->kcab", gam, T))


@lru_cache(maxsize=64)
def _covariant_cached(setup: SubmersionSetup, key: tuple):
    x = np.array(key)
    geo = _point_geometry_cached(setup, key)
    n = x.size
    h = first_step(x)
    dT = np.zeros((n,) * 4)  # dT[k,c,a,b] = d_c Tc[k,a,b]
    dA = np.zeros((n,) * 4)
    jump = setup.tolerances.jump_tol
    for c in range(n):
        e = np.zeros(n)
        e[c] = h[c]
        plus = _geometry_at(setup, x + e, second=False, stencil=True)
        minus = _geometry_at(setup, x - e, second=False, stencil=True)
        for side in (plus, minus):
            if np.max(np.abs(side[1].Pv - geo.split.Pv)) > jump:
                raise FrameDiscontinuity(f"vertical projector jumps along x{c + 1} near {x.tolist()}")
        dT[:, c] = (plus[2] - minus[2]) / (2 * h[c])
        dA[:, c] = (plus[3] - minus[3]) / (2 * h[c])
    gam = geo.lm.gamma
    return _covariant(dT, geo.Tc, gam), _covariant(dA, geo.Ac, gam)


def covariant_derivatives(setup: SubmersionSetup, p):
    """(nabla T, nabla A) with nablaT[k,c,a,b] = ((D_{e_c} T)_{e_a} e_b)^k."""
    x = setup.check_point(p)
    return _covariant_cached(setup, tuple(float(v) for v in x))


def clear_caches() -> None:
    _point_geometry_cached.cache_clear()
    _covariant_cached.cache_clear()


# -- frame components ---------------------------------------------------------------

def _pair(C, X, Y):
    """Coordinate vectors C(X_i, Y_j) for rows of X, Y: out[i,j,k]."""
    return np.einsum("kab,ia,jb->ijk", C, X, Y)


def compute_T(setup: SubmersionSetup, p, frames: FramePair | None = None):
    """Return (tH, tV): tH[i,j,l] = g(T_{V_i}V_j, h_l), tV[j,l,i] = g(T_{V_j}h_l, V_i)."""
    geo = point_geometry(setup, p)
    frames = frames or build_frames(setup, geo.x)
    V, H, G = frames.vertical, frames.horizontal, geo.G
    tH = np.einsum("ijk,km,lm->ijl", _pair(geo.Tc, V, V), G, H)
    tV = np.einsum("jlk,km,im->jli", _pair(geo.Tc, V, H), G, V)
    return tH, tV


def compute_A(setup: SubmersionSetup, p, frames: FramePair | None = None):
    """Return (aV, aH): aV[a,b,i] = g(A_{h_a}h_b, V_i), aH[a,j,l] = g(A_{h_a}V_j, h_l)."""
    geo = point_geometry(setup, p)
    frames = frames or build_frames(setup, geo.x)
    V, H, G = frames.vertical, frames.horizontal, geo.G
    aV = np.einsum("abk,km,im->abi", _pair(geo.Ac, H, H), G, V)
    aH = np.einsum("ajk,km,lm->ajl", _pair(geo.Ac, H, V), G, H)
    return aV, aH


def mean_curvature(setup: SubmersionSetup, p, frames: FramePair | None = None):
    """(N, H, |H|^2) with N, H as coordinate vectors."""
    geo = point_geometry(setup, p)
    frames = frames or build_frames(setup, geo.x)
    V = frames.vertical
    N = np.einsum("kab,ia,ib->k", geo.Tc, V, V)
    H = N / V.shape[0]
    return N, H, float(H @ geo.G @ H)


def delta_N(setup: SubmersionSetup, p, frames: FramePair | None = None) -> float:
    """sum_j sum_i g((D_{h_i} T)(V_j, V_j), h_i)."""
    geo = point_geometry(setup, p)
    frames = frames or build_frames(setup, geo.x)
    nT, _ = covariant_derivatives(setup, geo.x)
    V, H, G = frames.vertical, frames.horizontal, geo.G
    return float(np.einsum("kcab,ic,ja,jb,km,im->", nT, H, V, V, G, H, optimize=True))


@dataclass(frozen=True)
class ONeillData:
    tH: np.ndarray
    tV: np.ndarray
    aV: np.ndarray
    aH: np.ndarray
    N: np.ndarray        # coordinates
    H: np.ndarray        # coordinates
    N_frame: np.ndarray  # components on h_1..h_s
    normH2: float
    normTH2: float
    normTV2: float
    normAV2: float
    normAH2: float
    deltaN: float | None


def oneill_data(setup: SubmersionSetup, p, frames: FramePair | None = None,
                with_delta: bool = True) -> ONeillData:
    x = setup.check_point(p)
    frames = frames or build_frames(setup, x)
    tH, tV = compute_T(setup, x, frames)
    aV, aH = compute_A(setup, x, frames)
    N, H, normH2 = mean_curvature(setup, x, frames)
    return ONeillData(
        tH=tH, tV=tV, aV=aV, aH=aH, N=N, H=H,
        N_frame=np.einsum("iil->l", tH), normH2=normH2,
        normTH2=float(np.sum(tH ** 2)), normTV2=float(np.sum(tV ** 2)),
        normAV2=float(np.sum(aV ** 2)), normAH2=float(np.sum(aH ** 2)),
        deltaN=delta_N(setup, x, frames) if with_delta else None,
    )


def oneill_residuals(setup: SubmersionSetup, p, frames: FramePair | None = None) -> dict:
    """Symmetry, alternation and skew-adjointness residuals over frame triples."""
    geo = point_geometry(setup, p)
    frames = frames or build_frames(setup, geo.x)
    E = frames.basis()
    G = geo.G
    r = frames.r
    Tf = np.einsum("ijk,km,lm->ijl", _pair(geo.Tc, E, E), G, E)  # g(T_{E_i}E_j, E_l)
    Af = np.einsum("ijk,km,lm->ijl", _pair(geo.Ac, E, E), G, E)
    tV = Tf[:r, :r, :]
    aH = Af[r:, r:, :]
    return {
        "T_symmetry": float(np.max(np.abs(tV - tV.transpose(1, 0, 2)), initial=0)),
        "A_alternation": float(np.max(np.abs(aH + aH.transpose(1, 0, 2)), initial=0)),
        "T_skew": float(np.max(np.abs(Tf + Tf.transpose(0, 2, 1)), initial=0)),
        "A_skew": float(np.max(np.abs(Af + Af.transpose(0, 2, 1)), initial=0)),
    }
