from __future__ import annotations

from dataclasses import dataclass, fields, replace

import numpy as np

EPS = np.finfo(float).eps


def first_step(x: np.ndarray) -> np.ndarray:
    """Per-coordinate step for first differences."""
    return np.cbrt(EPS) * np.maximum(1.0, np.abs(x))


def second_step(x: np.ndarray) -> np.ndarray:
    """Per-coordinate step for second differences."""
    return EPS ** 0.25 * np.maximum(1.0, np.abs(x))


@dataclass(frozen=True)
class Tolerances:
    pd_tol: float = 1e-10
    curv_tol: float = 1e-6
    frame_tol: float = 1e-9
    rank_tol: float = 1e-9
    sub_tol: float = 1e-8
    align_tol: float = 1e-10
    oneill_tol: float = 1e-5
    inv_tol: float = 1e-6
    opt_tol: float = 1e-6
    struct_tol: float = 1e-8
    fit_tol: float = 1e-4
    eq_tol: float = 1e-6
    gap_tol: float = 1e-7
    lemma_tol: float = 1e-9
    xcheck_tol: float = 1e-5
    jump_tol: float = 0.1

    @classmethod
    def for_mode(cls, analytic: bool, **overrides) -> "Tolerances":
        base = cls()
        if analytic:
            base = replace(base, curv_tol=1e-10, oneill_tol=1e-7, fit_tol=1e-7)
        return replace(base, **overrides)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def updated(self, overrides: dict) -> "Tolerances":
        names = {f.name for f in fields(self)}
        unknown = set(overrides) - names
        if unknown:
            raise KeyError(f"unknown tolerance(s): {sorted(unknown)}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})
