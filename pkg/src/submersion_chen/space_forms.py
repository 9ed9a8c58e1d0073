"""Real, complex and generalized Sasakian space-form models.

The model curvature is

    R(Z1,Z2)Z3 = c1 {g(Z2,Z3)Z1 - g(Z1,Z3)Z2}
               + c2 {g(Z1,fZ3)fZ2 - g(Z2,fZ3)fZ1 + 2 g(Z1,fZ2)fZ3}
               + c3 {eta(Z1)eta(Z3)Z2 - eta(Z2)eta(Z3)Z1
                     + g(Z1,Z3)eta(Z2)xi - g(Z2,Z3)eta(Z1)xi}

with f = J (complex, c1 = c2 = c/4, c3 = 0) or f = phi (almost contact).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigError, MissingStructure, MixedStructureVector
from .fields import ArrayField, expression_grid
from .frames import FramePair, SubmersionSetup, build_frames, split
from .metric import eval_metric

FAMILIES = ("real", "complex", "generalized-sasakian", "sasakian", "kenmotsu",
            "cosymplectic", "c-alpha")
CONTACT_FAMILIES = FAMILIES[2:]


class StructureTensors:
    """J (complex) or (phi, xi, eta) (almost contact) as fields on the chart.

    `tensor[i][j]` is the i-th component of the image of d_j, so the tensor
    acts on column vectors.
    """

    def __init__(self, kind: str, tensor, xi=None, eta=None, n: int | None = None, parameters=None):
        if kind not in ("complex", "almost-contact"):
            raise ConfigError(f"unknown structure kind {kind!r}")
        self.kind = kind
        if callable(tensor):
            if n is None:
                raise ConfigError("n is required for callable structure tensors")
            self._tensor = ArrayField((n, n), n, func=tensor, mode="central")
        else:
            n = len(tensor) if n is None else n
            self._tensor = ArrayField((n, n), n, exprs=expression_grid(tensor, (n, n), n, "x", parameters))
        self.n = n
        self._xi = self._eta = None
        if kind == "almost-contact":
            if xi is None or eta is None:
                raise ConfigError("almost-contact structure needs xi and eta")
            self._xi = self._vector(xi, parameters)
            self._eta = self._vector(eta, parameters)

    def _vector(self, items, parameters):
        if callable(items):
            return ArrayField((self.n,), self.n, func=items, mode="central")
        return ArrayField((self.n,), self.n, exprs=expression_grid(items, (self.n,), self.n, "x", parameters))

    def at(self, x):
        """(Phi, xi, eta) at x; xi and eta are None for complex structures."""
        Phi = self._tensor.value(x)
        if self.kind == "complex":
            return Phi, None, None
        return Phi, self._xi.value(x), self._eta.value(x)


@dataclass(frozen=True)
class SpaceFormModel:
    family: str
    c: float | None = None
    c123: tuple | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown space-form family {self.family!r}")
        if self.family == "generalized-sasakian":
            if self.c123 is None or len(self.c123) != 3:
                raise ConfigError("generalized-sasakian needs (c1, c2, c3)")
        elif self.c is None:
            raise ConfigError(f"family {self.family!r} needs c")
        if self.family == "c-alpha" and self.alpha is None:
            raise ConfigError("c-alpha family needs alpha")

    @property
    def constants(self) -> tuple:
        c = self.c
        f = self.family
        if f == "real":
            return (c, 0.0, 0.0)
        if f == "complex":
            return (c / 4, c / 4, 0.0)
        if f == "generalized-sasakian":
            return tuple(float(v) for v in self.c123)
        if f == "sasakian":
            return ((c + 3) / 4, (c - 1) / 4, (c - 1) / 4)
        if f == "kenmotsu":
            return ((c - 3) / 4, (c + 1) / 4, (c + 1) / 4)
        if f == "cosymplectic":
            return (c / 4, c / 4, c / 4)
        a2 = self.alpha ** 2
        return ((c + 3 * a2) / 4, (c - a2) / 4, (c - a2) / 4)

    @property
    def needs_structure(self) -> str | None:
        if self.family == "real":
            return None
        return "complex" if self.family == "complex" else "almost-contact"

    @property
    def is_contact(self) -> bool:
        return self.family in CONTACT_FAMILIES

    def to_dict(self) -> dict:
        d = {"family": self.family}
        if self.c is not None:
            d["c"] = self.c
        if self.c123 is not None:
            d["c123"] = list(self.c123)
        if self.alpha is not None:
            d["alpha"] = self.alpha
        return d


def model_tensor(model: SpaceFormModel, G, Phi=None, xi=None, eta=None) -> np.ndarray:
    """Coordinate components M[a,b,c,d] = g(R(d_a,d_b)d_c, d_d)."""
    c1, c2, c3 = model.constants
    need = model.needs_structure
    if need and Phi is None:
        raise MissingStructure(f"family {model.family!r} needs a {need} structure")
    if model.is_contact and (xi is None or eta is None):
        raise MissingStructure("almost-contact families need xi and eta")
    M = c1 * (np.einsum("bc,ad->abcd", G, G) - np.einsum("ac,bd->abcd", G, G))
    if c2 and Phi is not None:
        W = G @ Phi  # W[a,b] = g(d_a, f d_b)
        M = M + c2 * (np.einsum("ac,db->abcd", W, W) - np.einsum("bc,da->abcd", W, W)
                      + 2 * np.einsum("ab,dc->abcd", W, W))
    if c3 and eta is not None:
        xf = G @ xi  # xf[d] = g(xi, d_d)
        M = M + c3 * (np.einsum("a,c,bd->abcd", eta, eta, G) - np.einsum("b,c,ad->abcd", eta, eta, G)
                      + np.einsum("ac,b,d->abcd", G, eta, xf) - np.einsum("bc,a,d->abcd", G, eta, xf))
    return M


def model_curvature(model: SpaceFormModel, G, structure_at, Z1, Z2, Z3, Z4) -> float:
    """g(R^model(Z1,Z2)Z3, Z4); structure_at = (Phi, xi, eta) or None."""
    Phi, xi, eta = structure_at if structure_at is not None else (None, None, None)
    M = model_tensor(model, np.asarray(G, float), Phi, xi, eta)
    return float(np.einsum("abcd,a,b,c,d->", M, Z1, Z2, Z3, Z4))


# -- structure validation ---------------------------------------------------------

@dataclass(frozen=True)
class StructureReport:
    residuals: dict
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(v < self.tolerance for v in self.residuals.values())


def structure_residuals(structure: StructureTensors, G, x) -> dict:
    Phi, xi, eta = structure.at(x)
    n = G.shape[0]
    I = np.eye(n)
    mx = lambda A: float(np.max(np.abs(A)))
    if structure.kind == "complex":
        return {
            "J^2 = -Id": mx(Phi @ Phi + I),
            "g(JX,JY) = g(X,Y)": mx(Phi.T @ G @ Phi - G),
        }
    return {
        "eta(xi) = 1": abs(float(eta @ xi) - 1.0),
        "phi^2 = -Id + eta (x) xi": mx(Phi @ Phi + I - np.outer(xi, eta)),
        "phi xi = 0": mx(Phi @ xi),
        "eta o phi = 0": mx(eta @ Phi),
        "g(phi X, phi Y) = g(X,Y) - eta(X)eta(Y)": mx(Phi.T @ G @ Phi - G + np.outer(eta, eta)),
    }


def validate_structure(setup: SubmersionSetup, points: Sequence) -> StructureReport:
    if setup.structure is None:
        raise MissingStructure("setup declares no structure tensors")
    worst: dict = {}
    for p in points:
        x = setup.check_point(p)
        res = structure_residuals(setup.structure, eval_metric(setup.g1, x), x)
        for k, v in res.items():
            worst[k] = max(worst.get(k, 0.0), v)
    return StructureReport(worst, setup.tolerances.struct_tol)


# -- P/Q decomposition ---------------------------------------------------------------

@dataclass(frozen=True)
class PQNorms:
    qform: np.ndarray  # g(Q V_i, V_j)
    pform: np.ndarray  # g(P h_a, h_b)
    pv: np.ndarray     # g(P V_i, h_a)
    normQ2: float
    normP2: float
    normPV2: float


def _structure_or_raise(setup: SubmersionSetup):
    if setup.structure is None:
        raise MissingStructure("setup declares no structure tensors")
    return setup.structure


def pq_norms(setup: SubmersionSetup, p, frames: FramePair | None = None) -> PQNorms:
    x = setup.check_point(p)
    frames = frames or build_frames(setup, x)
    Phi, _, _ = _structure_or_raise(setup).at(x)
    G = eval_metric(setup.g1, x)
    V, H = frames.vertical, frames.horizontal
    qform = (V @ Phi.T) @ G @ V.T   # [i,j] = g(f V_i, V_j)
    pform = (H @ Phi.T) @ G @ H.T
    pv = (V @ Phi.T) @ G @ H.T
    return PQNorms(qform, pform, pv, float(np.sum(qform ** 2)), float(np.sum(pform ** 2)),
                   float(np.sum(pv ** 2)))


def xi_placement(setup: SubmersionSetup, p) -> str:
    """'vertical' or 'horizontal'; MixedStructureVector otherwise."""
    x = setup.check_point(p)
    s = _structure_or_raise(setup)
    if s.kind != "almost-contact":
        raise MissingStructure("xi placement needs an almost-contact structure")
    _, xi, _ = s.at(x)
    sd = split(setup, x)
    G = sd.G
    tol = setup.tolerances.align_tol
    hx, vx = sd.Ph @ xi, sd.Pv @ xi
    if np.sqrt(max(hx @ G @ hx, 0.0)) < tol:
        return "vertical"
    if np.sqrt(max(vx @ G @ vx, 0.0)) < tol:
        return "horizontal"
    raise MixedStructureVector(f"xi has vertical and horizontal parts at {x.tolist()}")


def theta(setup: SubmersionSetup, p, plane_vectors) -> float:
    """eta(V1)^2 + eta(V2)^2 (or gamma for a horizontal pair)."""
    x = setup.check_point(p)
    s = _structure_or_raise(setup)
    if s.kind != "almost-contact":
        raise MissingStructure("Theta needs an almost-contact structure")
    _, _, eta = s.at(x)
    u, v = np.asarray(plane_vectors, float)
    return float((eta @ u) ** 2 + (eta @ v) ** 2)


gamma = theta


# -- model fit ------------------------------------------------------------------------

@dataclass(frozen=True)
class FitReport:
    residuals: tuple
    tolerance: float

    @property
    def residual(self) -> float:
        return float(max(self.residuals)) if self.residuals else 0.0

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance


def fit_residual(setup: SubmersionSetup, p, model: SpaceFormModel) -> float:
    from .oneill import point_geometry

    geo = point_geometry(setup, p)
    Phi = xi = eta = None
    if model.needs_structure:
        s = _structure_or_raise(setup)
        if model.needs_structure != s.kind:
            raise MissingStructure(f"family {model.family!r} needs a {model.needs_structure} structure")
        Phi, xi, eta = s.at(geo.x)
    diff = geo.curvature.components - model_tensor(model, geo.G, Phi, xi, eta)
    E = build_frames(setup, geo.x).basis()
    return float(np.max(np.abs(np.einsum("abcd,ia,jb,kc,ld->ijkl", diff, E, E, E, E, optimize=True))))


def model_fit(setup: SubmersionSetup, points: Sequence, model: SpaceFormModel) -> FitReport:
    return FitReport(tuple(fit_residual(setup, p, model) for p in points), setup.tolerances.fit_tol)
