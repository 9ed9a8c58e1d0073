"""Induced curvatures, scalar/sectional aggregates and delta(2) invariants.

Sign conventions follow metric.py: R(X,Y,Y,X) is the sectional curvature
numerator. In that convention the fundamental equations read

    R^M1(F1,F2,F3,F4) = R^ker(F1,F2,F3,F4) - g(T_F1 F4, T_F2 F3) + g(T_F2 F4, T_F1 F3)
    R^M1(Z1,Z2,Z3,Z4) = R^perp(Z1,Z2,Z3,Z4) + 2 g(A_Z1 Z2, A_Z3 Z4)
                        - g(A_Z2 Z3, A_Z1 Z4) + g(A_Z1 Z3, A_Z2 Z4)
    R^M1(Z1,F1,F2,Z2) = g((D_Z1 T)(F1,F2), Z2) + g((D_F1 A)(Z1,Z2), F2)
                        - g(T_F1 Z1, T_F2 Z2) + g(A_Z2 F2, A_Z1 F1)

for vertical F and horizontal Z. All three are checked against independent
oracles in the test-suite.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import qr
from scipy.optimize import minimize

from .errors import DegeneratePlane, DimensionTooSmall, GeometryError
from .frames import FramePair, Plane2, SubmersionSetup, build_frames, orthonormalize
from .metric import MetricField, riemann
from .oneill import compute_A, compute_T, covariant_derivatives, point_geometry

SPACES = ("vertical", "horizontal", "ambient")


@dataclass(frozen=True)
class FrameCurvature:
    """Curvature tensors on an orthonormal frame (vertical block first)."""

    frames: FramePair
    ambient: np.ndarray   # R^M1 on the full frame
    vertical: np.ndarray  # R^M1 restricted to V
    horizontal: np.ndarray  # R^M1 restricted to H
    ker: np.ndarray       # R^ker on V
    perp: np.ndarray      # R^perp on H
    tH: np.ndarray
    aV: np.ndarray


def frame_curvature(setup: SubmersionSetup, p, frames: FramePair | None = None) -> FrameCurvature:
    geo = point_geometry(setup, p)
    frames = frames or build_frames(setup, geo.x)
    r = frames.r
    RM = geo.curvature.in_frame(frames.basis())
    tH, _ = compute_T(setup, geo.x, frames)
    aV, _ = compute_A(setup, geo.x, frames)
    RV = RM[:r, :r, :r, :r]
    RH = RM[r:, r:, r:, r:]
    ker = RV + np.einsum("ila,jka->ijkl", tH, tH) - np.einsum("jla,ika->ijkl", tH, tH)
    perp = (RH - 2 * np.einsum("abi,cdi->abcd", aV, aV)
            + np.einsum("bci,adi->abcd", aV, aV) - np.einsum("aci,bdi->abcd", aV, aV))
    return FrameCurvature(frames, RM, RV, RH, ker, perp, tH, aV)


def induced_vertical_curvature(setup, p, frames, i, j, k, l) -> float:
    return float(frame_curvature(setup, p, frames).ker[i, j, k, l])


def induced_horizontal_curvature(setup, p, frames, a, b, c, d) -> float:
    return float(frame_curvature(setup, p, frames).perp[a, b, c, d])


def mixed_curvature_tensor(setup: SubmersionSetup, p, frames: FramePair | None = None) -> np.ndarray:
    """out[a,i,j,b]: right-hand side of the mixed equation for (h_a, V_i, V_j, h_b)."""
    geo = point_geometry(setup, p)
    frames = frames or build_frames(setup, geo.x)
    nT, nA = covariant_derivatives(setup, geo.x)
    V, H, G = frames.vertical, frames.horizontal, geo.G
    GH, GV = H @ G, V @ G
    t1 = np.einsum("kcxy,ac,ix,jy,bk->aijb", nT, H, V, V, GH, optimize=True)
    t2 = np.einsum("kcxy,ic,ax,by,jk->aijb", nA, V, H, H, GV, optimize=True)
    TVh = np.einsum("kxy,ix,ay->iak", geo.Tc, V, H)  # T_{V_i} h_a
    AhV = np.einsum("kxy,ax,iy->aik", geo.Ac, H, V)  # A_{h_a} V_i
    t3 = -np.einsum("iak,km,jbm->aijb", TVh, G, TVh)
    t4 = np.einsum("bjk,km,aim->aijb", AhV, G, AhV)
    return t1 + t2 + t3 + t4


def mixed_curvature(setup, p, frames, a, i, b, j) -> float:
    """Mixed-equation value for Z1=h_a, F1=V_i, Z2=h_b, F2=V_j."""
    return float(mixed_curvature_tensor(setup, p, frames)[a, i, j, b])


# -- aggregates ---------------------------------------------------------------------

def _tau(R: np.ndarray) -> float:
    return 0.5 * float(np.einsum("ijji->", R))


def _K(R: np.ndarray) -> float:
    return float(R[0, 1, 1, 0])


@dataclass
class InvariantBundle:
    tauV_M1: float
    tauH_M1: float
    tauV_ker: float
    tauH_perp: float
    mixed_sum: float
    tau_M1: float
    KV_M1: float | None = None
    KV_ker: float | None = None
    KH_M1: float | None = None
    KH_perp: float | None = None
    infK: dict = field(default_factory=dict)
    supK: dict = field(default_factory=dict)
    delta2: dict = field(default_factory=dict)
    deltaHat2: dict = field(default_factory=dict)

    @property
    def additivity_residual(self) -> float:
        return abs(self.tau_M1 - (self.tauV_M1 + self.tauH_M1 + self.mixed_sum))


def scalar_curvatures(setup: SubmersionSetup, p, frames: FramePair | None = None,
                      fc: FrameCurvature | None = None) -> InvariantBundle:
    fc = fc or frame_curvature(setup, p, frames)
    r = fc.frames.r
    return InvariantBundle(
        tauV_M1=_tau(fc.vertical), tauH_M1=_tau(fc.horizontal), tauV_ker=_tau(fc.ker),
        tauH_perp=_tau(fc.perp),
        mixed_sum=float(np.einsum("ajja->", fc.ambient[r:, :r, :r, r:])),
        tau_M1=_tau(fc.ambient),
    )


def invariant_bundle(setup: SubmersionSetup, p, frames: FramePair | None = None,
                     extremes: bool = True) -> InvariantBundle:
    """All aggregates; plane values use span{V1,V2} and span{h1,h2} of `frames`."""
    fc = frame_curvature(setup, p, frames)
    b = scalar_curvatures(setup, p, fc=fc)
    if fc.frames.r >= 2:
        b.KV_M1, b.KV_ker = _K(fc.vertical), _K(fc.ker)
    if fc.frames.s >= 2:
        b.KH_M1, b.KH_perp = _K(fc.horizontal), _K(fc.perp)
    if extremes:
        for space, R, tau in (("vertical", fc.ker, b.tauV_ker), ("horizontal", fc.perp, b.tauH_perp)):
            if R.shape[0] < 2:
                continue
            lo = extremize(R, "inf")[0]
            hi = extremize(R, "sup")[0]
            b.infK[space], b.supK[space] = lo, hi
            b.delta2[space] = tau - lo
            b.deltaHat2[space] = tau - hi
    return b


# -- sectional curvature and planes ------------------------------------------------

def _space_tensor(fc: FrameCurvature, space: str, model: str):
    r = fc.frames.r
    if space == "vertical":
        return (fc.ker if model == "induced" else fc.vertical), fc.frames.vertical
    if space == "horizontal":
        return (fc.perp if model == "induced" else fc.horizontal), fc.frames.horizontal
    if space == "ambient":
        return fc.ambient, fc.frames.basis()
    raise ValueError(f"unknown space {space!r}")


def sectional_curvature(setup: SubmersionSetup, p, plane: Plane2, model: str = "ambient") -> float:
    """K of a plane; model 'induced' uses R^ker / R^perp for vertical / horizontal planes."""
    geo = point_geometry(setup, p)
    G = geo.G
    u, v = np.asarray(plane.basis, float)
    area = (u @ G @ u) * (v @ G @ v) - (u @ G @ v) ** 2
    if area <= setup.tolerances.frame_tol * max(1.0, (u @ G @ u) * (v @ G @ v)):
        raise DegeneratePlane("plane basis vectors are parallel")
    if model == "ambient" or plane.space == "ambient":
        return geo.curvature.value(u, v, v, u) / area
    fc = frame_curvature(setup, geo.x)
    R, rows = _space_tensor(fc, plane.space, model)
    cu, cv = rows @ G @ u, rows @ G @ v  # components in the orthonormal frame
    for w, c in ((u, cu), (v, cv)):
        if abs((c @ c) - (w @ G @ w)) > 1e-8 * max(1.0, w @ G @ w):
            raise DegeneratePlane(f"plane is not contained in the {plane.space} distribution")
    return float(np.einsum("abcd,a,b,c,d->", R, cu, cv, cv, cu)) / area


def _plane_K(R, a, b):
    num = np.einsum("ijkl,i,j,k,l->", R, a, b, b, a)
    den = (a @ a) * (b @ b) - (a @ b) ** 2
    return num / den


def _objective(R, Qs, sign):
    q0, q1, Qc = Qs[:, 0], Qs[:, 1], Qs[:, 2:]

    def f(flat):
        B = flat.reshape(Qc.shape[1], 2)
        a = q0 + Qc @ B[:, 0]
        b = q1 + Qc @ B[:, 1]
        Rb = np.einsum("ijkl,j,k->il", R, b, b)
        Ra = np.einsum("ijkl,i,l->jk", R, a, a)
        N = a @ Rb @ a
        aa, bb, ab = a @ a, b @ b, a @ b
        D = aa * bb - ab ** 2
        dN_a = Rb @ a + Rb.T @ a
        dN_b = Ra @ b + Ra.T @ b
        dD_a = 2 * a * bb - 2 * ab * b
        dD_b = 2 * b * aa - 2 * ab * a
        ga = (dN_a * D - N * dD_a) / D ** 2
        gb = (dN_b * D - N * dD_b) / D ** 2
        grad = np.stack([Qc.T @ ga, Qc.T @ gb], axis=1).reshape(-1)
        return sign * N / D, sign * grad

    return f


def _canonical(a, b):
    """Orthonormal basis and a sign-fixed Plucker vector for tie-breaking."""
    k = a.size
    basis = orthonormalize(np.eye(k), [a, b], 1e-14)
    pl = np.array([basis[0, i] * basis[1, j] - basis[0, j] * basis[1, i]
                   for i, j in itertools.combinations(range(k), 2)])
    nz = np.flatnonzero(np.abs(pl) > 1e-9)
    if nz.size and pl[nz[0]] < 0:
        pl = -pl
        basis[1] = -basis[1]
    return basis, pl


def extremize(R: np.ndarray, mode: str, starts: int = 32, seed: int = 0, tol: float = 1e-6):
    """inf or sup of K over 2-planes for a curvature tensor on an orthonormal basis.

    Multistart quasi-Newton in affine Grassmannian charts. Starts are every
    coordinate plane plus seeded random rotations (at least `starts` in
    total). Returns (value, basis) with basis a (2,k) orthonormal array in
    the tensor's basis; ties are broken by the lexicographically smallest
    sign-fixed Plucker vector.
    """
    k = R.shape[0]
    if k < 2:
        raise DimensionTooSmall(f"need a space of dimension >= 2, got {k}")
    if mode not in ("inf", "sup"):
        raise ValueError(mode)
    R = 0.5 * (R + R.transpose(2, 3, 0, 1))
    if k == 2:
        basis = np.eye(2)
        return float(R[0, 1, 1, 0]), basis
    sign = 1.0 if mode == "inf" else -1.0
    seeds = []
    for i, j in itertools.combinations(range(k), 2):
        rest = [t for t in range(k) if t not in (i, j)]
        seeds.append(np.eye(k)[:, [i, j] + rest])
    rng = np.random.default_rng(seed)
    while len(seeds) < starts:
        Q, Rq = np.linalg.qr(rng.normal(size=(k, k)))
        seeds.append(Q * np.sign(np.diag(Rq)))
    results = []
    for Qs in seeds:
        f = _objective(R, Qs, sign)
        x0 = np.zeros(2 * (k - 2))
        try:
            res = minimize(f, x0, jac=True, method="BFGS", options={"gtol": 1e-12, "maxiter": 500})
            xb = res.x
        except (FloatingPointError, np.linalg.LinAlgError):
            xb = x0
        B = xb.reshape(k - 2, 2)
        a = Qs[:, 0] + Qs[:, 2:] @ B[:, 0]
        b = Qs[:, 1] + Qs[:, 2:] @ B[:, 1]
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            continue
        basis, pl = _canonical(a, b)
        val = float(_plane_K(R, basis[0], basis[1]))
        results.append((val, pl, basis))
    best = min(v * sign for v, _, _ in results)
    close = [t for t in results if t[0] * sign <= best + 1e-12 * max(1.0, abs(best))]
    close.sort(key=lambda t: tuple(np.round(t[1], 9)))
    val, _, basis = close[0]
    return val, basis


def extremal_sectional(setup: SubmersionSetup, p, space: str, mode: str,
                       model: str = "induced", frames: FramePair | None = None):
    """(value, Plane2) extremizing K over planes of `space`.

    model='induced' uses R^ker (vertical) or R^perp (horizontal);
    model='ambient' uses R^M1 restricted to the space.
    """
    fc = frame_curvature(setup, p, frames)
    R, rows = _space_tensor(fc, space, model)
    val, coeffs = extremize(R, mode, tol=setup.tolerances.opt_tol)
    return val, Plane2(space, coeffs @ rows)


def grid_extremum(R: np.ndarray, mode: str, step: float = np.pi / 60):
    """Brute-force extremum: grid over unit u, exact eigenproblem for w in u-perp."""
    k = R.shape[0]
    if k < 2:
        raise DimensionTooSmall("need dimension >= 2")
    R = 0.5 * (R + R.transpose(2, 3, 0, 1))
    if k == 2:
        return float(R[0, 1, 1, 0])
    # hyperspherical angles: k-2 polar angles in [0, pi], last in [0, pi) (u ~ -u)
    polar = np.arange(0.0, np.pi + 1e-12, step)
    last = np.arange(0.0, np.pi - 1e-12, step)
    grids = np.meshgrid(*([polar] * (k - 2) + [last]), indexing="ij")
    ang = np.stack([g.reshape(-1) for g in grids], axis=1)
    U = np.ones((ang.shape[0], k))
    for t in range(k - 1):
        U[:, t] *= np.cos(ang[:, t])
        U[:, t + 1:] *= np.sin(ang[:, t])[:, None]
    best = np.inf if mode == "inf" else -np.inf
    for chunk in np.array_split(U, max(1, U.shape[0] // 20000)):
        M = np.einsum("na,abcd,nd->nbc", chunk, R, chunk)  # M[n,b,c] = R(u,e_b,e_c,u)
        # Householder complement of u
        e1 = np.zeros(k)
        e1[0] = 1.0
        s = np.where(chunk[:, 0] >= 0, 1.0, -1.0)
        w = chunk + s[:, None] * e1
        Hh = np.eye(k)[None] - 2 * np.einsum("na,nb->nab", w, w) / np.einsum("na,na->n", w, w)[:, None, None]
        B = Hh[:, :, 1:]
        Mc = np.einsum("nai,nab,nbj->nij", B, M, B)
        lam = np.linalg.eigvalsh(0.5 * (Mc + Mc.transpose(0, 2, 1)))
        best = min(best, lam[:, 0].min()) if mode == "inf" else max(best, lam[:, -1].max())
    return float(best)


# -- independent oracles --------------------------------------------------------------

def fiber_chart(setup: SubmersionSetup, p, newton_tol: float = 1e-15):
    """Local fiber parametrization through p by free coordinates (implicit functions).

    Returns (free, dep, chart) where chart(u) is the point of the fiber with
    x[free] = p[free] + u.
    """
    x0 = setup.check_point(p)
    J = setup.map.derivatives(x0, order=1)[1].T
    _, _, piv = qr(J, pivoting=True)
    dep = np.sort(piv[: setup.m])
    free = np.array(sorted(set(range(setup.n)) - set(dep.tolist())), dtype=int)
    F0 = setup.map.value(x0)

    def chart(u):
        x = x0.copy()
        x[free] += u
        for _ in range(60):
            Fx, dF, _ = setup.map.derivatives(x, order=1)
            step = np.linalg.solve(dF.T[:, dep], -(Fx - F0))
            x[dep] += step
            if np.max(np.abs(step)) <= newton_tol * max(1.0, np.max(np.abs(x))):
                break
        else:
            raise GeometryError("fiber chart Newton iteration did not converge")
        return x

    return free, dep, chart


def fiber_curvature_oracle(setup: SubmersionSetup, p, frames: FramePair | None = None) -> np.ndarray:
    """Intrinsic curvature of the fiber through p on the vertical frame."""
    x0 = setup.check_point(p)
    frames = frames or build_frames(setup, x0)
    free, dep, chart = fiber_chart(setup, x0)
    r = free.size

    def induced(u):
        x = chart(u)
        dF = setup.map.derivatives(x, order=1)[1].T
        X = np.zeros((setup.n, r))
        X[free] = np.eye(r)
        X[dep] = -np.linalg.solve(dF[:, dep], dF[:, free])
        return X.T @ setup.g1.value(x) @ X

    h = MetricField(induced, dim=r, mode="central")
    return riemann(h, np.zeros(r)).in_frame(frames.vertical[:, free])


def base_curvature_oracle(setup: SubmersionSetup, p, frames: FramePair | None = None) -> np.ndarray:
    """Base curvature R^M2 on the pushed-forward horizontal frame."""
    x0 = setup.check_point(p)
    frames = frames or build_frames(setup, x0)
    y = setup.map.value(x0)
    J = setup.map.derivatives(x0, order=1)[1].T
    return riemann(setup.g2, y).in_frame(frames.horizontal @ J.T)


def mixed_curvature_direct(setup: SubmersionSetup, p, frames: FramePair | None = None) -> np.ndarray:
    """out[a,i,j,b] = R^M1(h_a, V_i, V_j, h_b) from the ambient tensor."""
    fc = frame_curvature(setup, p, frames)
    r = fc.frames.r
    return fc.ambient[r:, :r, :r, r:]
