"""Chen-type inequalities for Riemannian submersions.

Gaps are oriented so that gap >= 0 means the inequality holds:
gap = lhs - rhs for the vertical (>=) family and gap = rhs - lhs for the
vertical-horizontal (<=) family.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .errors import (ConfigError, ConstraintViolated, DimensionTooSmall, FiberTooSmall,
                     ModelMisfit)
from .frames import FramePair, SubmersionSetup, adapt_frames, build_frames
from .invariants import FrameCurvature, extremize, frame_curvature, scalar_curvatures
from .oneill import compute_A, compute_T, delta_N, mean_curvature, point_geometry
from .space_forms import (SpaceFormModel, fit_residual, pq_norms, structure_residuals,
                          xi_placement)

# -- Chen's algebraic lemma -------------------------------------------------------------


@dataclass(frozen=True)
class LemmaInstance:
    k: int
    a: tuple
    b: float

    @classmethod
    def from_a(cls, a: Sequence[float]) -> "LemmaInstance":
        """Solve b from (sum a)^2 = (k-1)(sum a^2 + b)."""
        a = tuple(float(v) for v in a)
        k = len(a)
        if k <= 2:
            raise ConfigError("the lemma needs k > 2")
        b = sum(a) ** 2 / (k - 1) - sum(v * v for v in a)
        return cls(k, a, b)


@dataclass(frozen=True)
class LemmaResult:
    gap: float
    equality: bool
    condition_residual: float
    constraint_residual: float


def chen_lemma_gap(inst: LemmaInstance, tol: float = 1e-9) -> LemmaResult:
    a = np.asarray(inst.a, dtype=float)
    k = inst.k
    if k <= 2 or a.size != k:
        raise ConfigError(f"need k > 2 values, got k={k} with {a.size} values")
    S = a.sum()
    scale = max(1.0, S * S, (k - 1) * (a @ a + abs(inst.b)))
    cres = abs(S * S - (k - 1) * (a @ a + inst.b))
    if cres > tol * scale:
        raise ConstraintViolated(f"constraint residual {cres:.3e} exceeds tolerance")
    chain = np.concatenate([[a[0] + a[1]], a[2:]])
    cond = float(chain.max() - chain.min())
    gap = 2 * a[0] * a[1] - inst.b
    return LemmaResult(float(gap), bool(cond <= tol * max(1.0, np.abs(chain).max())), cond, float(cres))


# -- reports --------------------------------------------------------------------------


@dataclass(frozen=True)
class EqualityCondition:
    label: str
    residual: float
    passed: bool
    frame: str = "adapted"


@dataclass
class InequalityReport:
    theorem: str
    point: list
    planes: dict
    lhs: float
    rhs: float
    gap: float
    direction: str
    holds: bool
    equality: bool
    equality_conditions: list = field(default_factory=list)
    terms: dict = field(default_factory=dict)
    cross_checks: dict = field(default_factory=dict)
    frame: dict = field(default_factory=dict)

    @property
    def worst_equality_residual(self) -> float:
        vals = [c.residual for c in self.equality_conditions if c.frame == "adapted"]
        return float(max(vals)) if vals else float("nan")

    @property
    def diagnostics_pass(self) -> bool:
        adapted = [c for c in self.equality_conditions if c.frame == "adapted"]
        return bool(adapted) and all(c.passed for c in adapted)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["equality_conditions"] = [asdict(c) for c in self.equality_conditions]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "InequalityReport":
        d = dict(d)
        d["equality_conditions"] = [EqualityCondition(**c) for c in d.get("equality_conditions", [])]
        return cls(**d)


def _finish(theorem, x, planes, lhs, rhs, direction, tol, **extra) -> InequalityReport:
    gap = lhs - rhs if direction == ">=" else rhs - lhs
    return InequalityReport(
        theorem=theorem, point=[float(v) for v in x], planes=planes, lhs=float(lhs),
        rhs=float(rhs), gap=float(gap), direction=direction, holds=bool(gap >= -tol.gap_tol),
        equality=bool(abs(gap) <= tol.eq_tol), **extra)


def chen_coefficient(r: int) -> float:
    return r * r * (r - 2) / (2 * (r - 1))


# -- equality diagnostics ---------------------------------------------------------------

_LABELS = (
    "T_1j = T_2j = 0 (j > 2)",
    "T_ij^1 = 0 (i != j > 2)",
    "T_ij^l = 0 (i, j > 2, l >= 2)",
    "T_11^l + T_22^l = 0 (l >= 2)",
    "T_11^1 + T_22^1 = T_33^1 = ... = T_rr^1",
)


def _conditions(tH: np.ndarray, d: int) -> list:
    r, _, s = tH.shape
    others = [l for l in range(s) if l != d]
    m = lambda a: float(np.max(np.abs(a))) if np.size(a) else 0.0
    off = np.array([tH[i, j, d] for i in range(2, r) for j in range(2, r) if i != j])
    rest = tH[2:, 2:][:, :, others] if others else np.zeros(0)
    trace = tH[0, 0, others] + tH[1, 1, others] if others else np.zeros(0)
    chain = np.concatenate([[tH[0, 0, d] + tH[1, 1, d]], np.diagonal(tH[2:, 2:, d])])
    return [m(tH[:2, 2:, :]), m(off), m(rest), m(trace), float(chain.max() - chain.min())]


def _rotate_pair(V: np.ndarray, tH: np.ndarray, d: int) -> np.ndarray:
    """Rotate V1, V2 within their span so that T_12^d = 0."""
    _, Q = np.linalg.eigh(tH[:2, :2, d])
    V = V.copy()
    V[:2] = Q.T @ V[:2]
    return V


def _tH_in(setup, x, V, H):
    geo = point_geometry(setup, x)
    T = np.einsum("kab,ia,jb->ijk", geo.Tc, V, V)
    return np.einsum("ijk,km,lm->ijl", T, geo.G, H)


@dataclass(frozen=True)
class EqualityDiagnostics:
    conditions: list
    passed: bool
    distinguished: int
    frames: FramePair


def equality_diagnostics(setup: SubmersionSetup, p, plane=None,
                         frames: FramePair | None = None) -> EqualityDiagnostics:
    """Evaluate the equality conditions for the vertical inequality.

    Conditions are reported twice: in the adapted frame (h1 along the mean
    curvature, V1/V2 rotated so that T_12^1 = 0), which decides the overall
    pass flag, and in the unrotated default frame, tagged 'reference'.
    """
    tol = setup.tolerances
    x = setup.check_point(p)
    if setup.r <= 2:
        raise FiberTooSmall(f"fiber dimension {setup.r} <= 2")
    base = adapt_frames(setup, frames or build_frames(setup, x), vertical_plane=plane)
    ref_t = _tH_in(setup, x, base.vertical, base.horizontal)
    reference = [EqualityCondition(lbl, res, res < tol.eq_tol, "reference")
                 for lbl, res in zip(_LABELS, _conditions(ref_t, 0))]
    N, _, normH2 = mean_curvature(setup, x, base)
    if np.sqrt(normH2) > tol.align_tol:
        aligned = adapt_frames(setup, base, vertical_plane=(0, 1), h1=N)
        candidates = [(0, aligned)]
    else:
        candidates = [(d, base) for d in range(setup.s)]
    best = None
    for d, fr in candidates:
        V = _rotate_pair(fr.vertical, _tH_in(setup, x, fr.vertical, fr.horizontal), d)
        t = _tH_in(setup, x, V, fr.horizontal)
        res = _conditions(t, d)
        ok = all(v < tol.eq_tol for v in res)
        key = (not ok, max(res))
        if best is None or key < best[0]:
            best = (key, d, res, FramePair(x, V, fr.horizontal))
    _, d, res, fr = best
    adapted = [EqualityCondition(lbl, v, v < tol.eq_tol, "adapted") for lbl, v in zip(_LABELS, res)]
    return EqualityDiagnostics(adapted + reference, all(c.passed for c in adapted), d, fr)


# -- closed forms for space-form total spaces ---------------------------------------------


def _model_terms(setup, x, model: SpaceFormModel, frames: FramePair):
    """Closed-form curvature aggregates of a space-form total space."""
    c1, c2, c3 = model.constants
    r, s = frames.r, frames.s
    Q2 = P2 = PV2 = q12 = p12 = 0.0
    if model.needs_structure:
        pq = pq_norms(setup, x, frames)
        Q2, P2, PV2 = pq.normQ2, pq.normP2, pq.normPV2
        q12 = pq.qform[1, 0] if r >= 2 else 0.0
        p12 = pq.pform[1, 0] if s >= 2 else 0.0
    in_v = in_h = False
    th = gm = 0.0
    if model.is_contact:
        place = xi_placement(setup, x)
        in_v, in_h = place == "vertical", place == "horizontal"
        _, _, eta = setup.structure.at(x)
        th = float((eta @ frames.vertical[0]) ** 2 + (eta @ frames.vertical[1]) ** 2)
        if s >= 2:
            gm = float((eta @ frames.horizontal[0]) ** 2 + (eta @ frames.horizontal[1]) ** 2)
    out = {
        "c1": c1, "c2": c2, "c3": c3, "normQ2": Q2, "normP2": P2, "normPV2": PV2,
        "g(V1,QV2)^2": q12 ** 2, "g(h1,Ph2)^2": p12 ** 2,
        "xi": "vertical" if in_v else "horizontal" if in_h else None,
        "Theta": th, "gamma": gm,
        "tauV_M1": c1 * r * (r - 1) / 2 + 1.5 * c2 * Q2 - (r - 1) * c3 * in_v,
        "KV_M1": c1 + 3 * c2 * q12 ** 2 - c3 * th * in_v,
        "tauH_M1": c1 * s * (s - 1) / 2 + 1.5 * c2 * P2 - (s - 1) * c3 * in_h,
        "KH_M1": c1 + 3 * c2 * p12 ** 2 - c3 * gm * in_h,
        "mixed_sum": c1 * s * r + 3 * c2 * PV2 - c3 * (s * in_v + r * in_h),
    }
    return out


def _check_model(setup, x, model: SpaceFormModel):
    tol = setup.tolerances
    need = model.needs_structure
    if need:
        if setup.structure is None or setup.structure.kind != need:
            raise ModelMisfit(f"family {model.family!r} needs a {need} structure")
        from .metric import eval_metric

        res = structure_residuals(setup.structure, eval_metric(setup.g1, x), x)
        bad = {k: v for k, v in res.items() if v >= tol.struct_tol}
        if bad:
            raise ModelMisfit(f"structure axioms fail: {bad}")
    fit = fit_residual(setup, x, model)
    if fit >= tol.fit_tol:
        raise ModelMisfit(f"model fit residual {fit:.3e} >= {tol.fit_tol:.1e}")
    return fit


def _xcheck(name, closed, raw, tol, store):
    res = abs(closed - raw)
    store[name] = {"closed_form": float(closed), "raw": float(raw), "residual": float(res)}
    if res > tol.xcheck_tol:
        raise ModelMisfit(f"{name}: closed form {closed:.12g} vs raw {raw:.12g}")


# -- the checkers ------------------------------------------------------------------------


def _normH2(tH: np.ndarray) -> float:
    N = np.einsum("iil->l", tH)
    return float(N @ N) / tH.shape[0] ** 2


def _prepare(setup, p, vplane, hplane, frames):
    x = setup.check_point(p)
    if setup.r <= 2:
        raise FiberTooSmall(f"fiber dimension {setup.r} <= 2")
    fr = adapt_frames(setup, frames or build_frames(setup, x), vertical_plane=vplane,
                      horizontal_plane=hplane)
    return x, fr, frame_curvature(setup, x, fr)


def check_vertical(setup: SubmersionSetup, p, plane=None, model: SpaceFormModel | None = None,
                   theorem: str | None = None, frames: FramePair | None = None) -> InequalityReport:
    """tau^ker - K^ker(Pi) >= tau^M1_V - K^M1_V(Pi) - r^2(r-2)/(2(r-1)) |H|^2."""
    tol = setup.tolerances
    x, fr, fc = _prepare(setup, p, plane, None, frames)
    r = fr.r
    agg = scalar_curvatures(setup, x, fc=fc)
    KV_ker, KV_M1 = float(fc.ker[0, 1, 1, 0]), float(fc.vertical[0, 1, 1, 0])
    h2 = _normH2(fc.tH)
    coef = chen_coefficient(r)
    lhs = agg.tauV_ker - KV_ker
    rhs_raw = agg.tauV_M1 - KV_M1 - coef * h2
    terms = {"tauV_ker": agg.tauV_ker, "KV_ker": KV_ker, "tauV_M1": agg.tauV_M1, "KV_M1": KV_M1,
             "normH2": h2, "chen_coefficient": coef, "chen_term": coef * h2,
             "normTH2": float(np.sum(fc.tH ** 2))}
    checks: dict = {}
    rhs = rhs_raw
    if model is not None:
        terms["model_fit"] = _check_model(setup, x, model)
        cf = _model_terms(setup, x, model, fr)
        terms.update({k: v for k, v in cf.items() if k not in ("tauH_M1", "KH_M1", "mixed_sum")})
        _xcheck("tauV_M1", cf["tauV_M1"], agg.tauV_M1, tol, checks)
        _xcheck("KV_M1", cf["KV_M1"], KV_M1, tol, checks)
        rhs = cf["tauV_M1"] - cf["KV_M1"] - coef * h2
        _xcheck("rhs", rhs, rhs_raw, tol, checks)
    diag = equality_diagnostics(setup, x, (0, 1), fr)
    return _finish(theorem or ("thm31" if model is None else "vertical"), x,
                   {"vertical": fr.vertical[:2].tolist()}, lhs, rhs, ">=", tol,
                   equality_conditions=diag.conditions, terms=terms, cross_checks=checks,
                   frame={"distinguished_horizontal_index": diag.distinguished,
                          "adapted_horizontal": diag.frames.horizontal.tolist()})


def check_delta_hat(setup: SubmersionSetup, p, model: SpaceFormModel | None = None,
                    theorem: str = "thm32", frames: FramePair | None = None) -> InequalityReport:
    """tau^ker - sup K^ker >= tau^M1_V - sup K^M1_V - r^2(r-2)/(2(r-1)) |H|^2."""
    tol = setup.tolerances
    x, fr, fc = _prepare(setup, p, None, None, frames)
    agg = scalar_curvatures(setup, x, fc=fc)
    sup_ker, plane_ker = extremize(fc.ker, "sup", tol=tol.opt_tol)
    sup_M1, plane_M1 = extremize(fc.vertical, "sup", tol=tol.opt_tol)
    inf_ker, _ = extremize(fc.ker, "inf", tol=tol.opt_tol)
    h2 = _normH2(fc.tH)
    coef = chen_coefficient(fr.r)
    lhs = agg.tauV_ker - sup_ker
    rhs = agg.tauV_M1 - sup_M1 - coef * h2
    terms = {"tauV_ker": agg.tauV_ker, "supK_ker": sup_ker, "infK_ker": inf_ker,
             "delta2_V": agg.tauV_ker - inf_ker, "deltaHat2_V": lhs,
             "tauV_M1": agg.tauV_M1, "supK_M1": sup_M1, "normH2": h2, "chen_term": coef * h2}
    if fr.s >= 2:
        sup_perp, _ = extremize(fc.perp, "sup", tol=tol.opt_tol)
        terms["deltaHat2_H"] = agg.tauH_perp - sup_perp
    checks: dict = {}
    if model is not None:
        terms["model_fit"] = _check_model(setup, x, model)
        cf = _model_terms(setup, x, model, fr)
        _xcheck("tauV_M1", cf["tauV_M1"], agg.tauV_M1, tol, checks)
        if model.family == "real":
            _xcheck("supK_M1", model.c, sup_M1, tol, checks)
    return _finish(theorem, x, {"sup_ker": (plane_ker @ fr.vertical).tolist(),
                                "sup_M1": (plane_M1 @ fr.vertical).tolist()},
                   lhs, rhs, ">=", tol, terms=terms, cross_checks=checks)


def check_horizontal_vertical(setup: SubmersionSetup, p, vplane=None, hplane=None,
                              model: SpaceFormModel | None = None, theorem: str | None = None,
                              frames: FramePair | None = None) -> InequalityReport:
    """Mixed vertical/horizontal bound (gap = rhs - lhs)."""
    tol = setup.tolerances
    if setup.s < 2:
        raise DimensionTooSmall(f"horizontal dimension {setup.s} < 2")
    x, fr, fc = _prepare(setup, p, vplane, hplane if hplane is not None else (0, 1), frames)
    r, s = fr.r, fr.s
    agg = scalar_curvatures(setup, x, fc=fc)
    _, tV = compute_T(setup, x, fr)
    _, aH = compute_A(setup, x, fr)
    aV = fc.aV
    KV_M1, KH_M1 = float(fc.vertical[0, 1, 1, 0]), float(fc.horizontal[0, 1, 1, 0])
    KV_ker, KH_perp = float(fc.ker[0, 1, 1, 0]), float(fc.perp[0, 1, 1, 0])
    h2 = _normH2(fc.tH)
    coef = chen_coefficient(r)
    dN = delta_N(setup, x, fr)
    sumA1 = float(np.sum(aV[0, 2:, :] ** 2))
    sumA2 = float(np.sum(aV[1:, 1:, :] ** 2))
    normAH2 = float(np.sum(aH ** 2))
    normTV2 = float(np.sum(tV ** 2))
    lhs_raw = agg.tauV_M1 - KV_M1 + agg.tauH_M1 - KH_M1 + agg.mixed_sum
    rhs = (agg.tauH_perp - KH_perp + agg.tauV_ker - KV_ker + coef * h2 - 0.5 * normAH2
           + 3 * sumA1 + 1.5 * sumA2 - dN + 0.5 * normTV2)
    terms = {
        "tauV_M1": agg.tauV_M1, "KV_M1": KV_M1, "tauH_M1": agg.tauH_M1, "KH_M1": KH_M1,
        "mixed_sum": agg.mixed_sum, "tauH_perp": agg.tauH_perp, "KH_perp": KH_perp,
        "tauV_ker": agg.tauV_ker, "KV_ker": KV_ker, "normH2": h2, "chen_term": coef * h2,
        "half_normAH2": 0.5 * normAH2, "A_sum_first_row": 3 * sumA1, "A_sum_block": 1.5 * sumA2,
        "deltaN": dN, "half_normTV2": 0.5 * normTV2, "normAV2": float(np.sum(aV ** 2)),
        "A12_sq": float(np.sum(aV[0, 1, :] ** 2)),
    }
    checks: dict = {}
    lhs = lhs_raw
    if model is not None:
        terms["model_fit"] = _check_model(setup, x, model)
        cf = _model_terms(setup, x, model, fr)
        terms.update({k: v for k, v in cf.items() if k in (
            "c1", "c2", "c3", "normQ2", "normP2", "normPV2", "xi", "Theta", "gamma")})
        for key, raw in (("tauV_M1", agg.tauV_M1), ("KV_M1", KV_M1), ("tauH_M1", agg.tauH_M1),
                         ("KH_M1", KH_M1), ("mixed_sum", agg.mixed_sum)):
            _xcheck(key, cf[key], raw, tol, checks)
        lhs = cf["tauV_M1"] - cf["KV_M1"] + cf["tauH_M1"] - cf["KH_M1"] + cf["mixed_sum"]
        _xcheck("lhs", lhs, lhs_raw, tol, checks)
    diag = equality_diagnostics(setup, x, (0, 1), fr)
    return _finish(theorem or ("thm41" if model is None else "horizontal_vertical"), x,
                   {"vertical": fr.vertical[:2].tolist(), "horizontal": fr.horizontal[:2].tolist()},
                   lhs, rhs, "<=", tol, equality_conditions=diag.conditions, terms=terms,
                   cross_checks=checks,
                   frame={"distinguished_horizontal_index": diag.distinguished})


# -- registry -------------------------------------------------------------------------

THEOREMS = {
    "thm31": ("vertical", None),
    "thm32": ("delta_hat", None),
    "rsf_thm36": ("vertical", ("real",)),
    "csf_thm38": ("vertical", ("complex",)),
    "gssf_thm310": ("vertical", ("generalized-sasakian", "sasakian", "kenmotsu",
                                  "cosymplectic", "c-alpha")),
    "thm41": ("horizontal_vertical", None),
    "rsf_thm43": ("horizontal_vertical", ("real",)),
    "csf_thm45": ("horizontal_vertical", ("complex",)),
    "gssf_thm47": ("horizontal_vertical", ("generalized-sasakian", "sasakian", "kenmotsu",
                                           "cosymplectic", "c-alpha")),
}


def check_theorem(theorem: str, setup: SubmersionSetup, p, vplane=None, hplane=None,
                  model: SpaceFormModel | None = None) -> InequalityReport:
    if theorem not in THEOREMS:
        raise ConfigError(f"unknown theorem id {theorem!r}; known: {sorted(THEOREMS)}")
    kind, families = THEOREMS[theorem]
    use = None
    if families is not None:
        if model is None:
            raise ConfigError(f"{theorem} needs a space-form model in the config")
        if model.family not in families:
            raise ConfigError(f"{theorem} needs a model of family {families}, got {model.family!r}")
        use = model
    if kind == "vertical":
        return check_vertical(setup, p, vplane, use, theorem=theorem)
    if kind == "delta_hat":
        return check_delta_hat(setup, p, None, theorem=theorem)
    return check_horizontal_vertical(setup, p, vplane, hplane, use, theorem=theorem)
