"""Verification runs over a RunConfig and their JSON/CSV serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig
from .errors import ConfigError, GeometryError, ReportIOError
from .frames import validate_submersion
from .inequalities import InequalityReport, check_theorem
from .space_forms import model_fit, validate_structure

CSV_COLUMNS = ("point_index", "theorem", "lhs", "rhs", "gap", "holds", "equality",
               "worst_equality_residual")


@dataclass
class ReportEntry:
    point_index: int
    theorem: str
    report: InequalityReport | None = None
    error: dict | None = None

    def to_dict(self) -> dict:
        return {"point_index": self.point_index, "theorem": self.theorem,
                "report": self.report.to_dict() if self.report else None, "error": self.error}

    @classmethod
    def from_dict(cls, d: dict) -> "ReportEntry":
        rep = InequalityReport.from_dict(d["report"]) if d.get("report") else None
        return cls(d["point_index"], d["theorem"], rep, d.get("error"))


@dataclass
class ReportFile:
    name: str
    config_hash: str
    tolerances: dict
    derivative_mode: str
    points: list
    entries: list = field(default_factory=list)
    validation: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    version: str = __version__

    @property
    def failed(self) -> list:
        """Entries whose theorem does not hold."""
        return [e for e in self.entries if e.report is not None and not e.report.holds]

    @property
    def errors(self) -> list:
        return [e for e in self.entries if e.error is not None]

    def to_dict(self) -> dict:
        return {
            "name": self.name, "version": self.version, "config_hash": self.config_hash,
            "derivative_mode": self.derivative_mode, "tolerances": self.tolerances,
            "points": self.points, "validation": self.validation, "warnings": self.warnings,
            "entries": [e.to_dict() for e in self.entries],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReportFile":
        return cls(d["name"], d["config_hash"], d["tolerances"], d["derivative_mode"], d["points"],
                   [ReportEntry.from_dict(e) for e in d["entries"]], d.get("validation", {}),
                   d.get("warnings", []), d.get("version", __version__))


def _err(exc: Exception) -> dict:
    return {"type": type(exc).__name__, "message": str(exc)}


def run_verify(cfg: RunConfig, point_indices=None, theorems=None) -> ReportFile:
    setup = cfg.build_setup()
    tol = setup.tolerances
    idx = list(range(len(cfg.points))) if point_indices is None else list(point_indices)
    for i in idx:
        if not 0 <= i < len(cfg.points):
            raise ConfigError(f"point index {i} outside 0..{len(cfg.points) - 1}")
    thms = sorted(set(cfg.theorems if theorems is None else theorems))
    pts = [cfg.points[i] for i in idx]
    rep = ReportFile(cfg.name, cfg.config_hash, tol.as_dict(), cfg.derivative_mode,
                     [list(p) for p in pts])

    sub = validate_submersion(setup, pts)
    rep.validation["submersion"] = {"residuals": list(sub.residuals), "tolerance": sub.tolerance,
                                    "flagged": [idx[k] for k in sub.flagged]}
    if sub.flagged:
        rep.warnings.append(f"submersion residual exceeds {sub.tolerance:g} at points "
                            f"{[idx[k] for k in sub.flagged]}")
    if setup.structure is not None:
        try:
            st = validate_structure(setup, pts)
            rep.validation["structure"] = {"residuals": st.residuals, "passed": st.passed}
            if not st.passed:
                rep.warnings.append("structure axioms fail")
        except GeometryError as exc:
            rep.validation["structure"] = {"error": _err(exc)}
    if cfg.model is not None:
        try:
            fit = model_fit(setup, pts, cfg.model)
            rep.validation["model_fit"] = {"model": cfg.model.to_dict(), "residuals": list(fit.residuals),
                                           "tolerance": fit.tolerance, "passed": fit.passed}
            if not fit.passed:
                rep.warnings.append(f"model fit residual {fit.residual:.3e} exceeds {fit.tolerance:g}")
        except GeometryError as exc:
            rep.validation["model_fit"] = {"error": _err(exc)}

    vplane, hplane = cfg.vertical_plane, cfg.horizontal_plane
    for i, p in zip(idx, pts):
        for th in thms:
            try:
                r = check_theorem(th, setup, p, vplane, hplane, cfg.model)
                rep.entries.append(ReportEntry(i, th, report=r))
            except (GeometryError, ConfigError) as exc:
                rep.entries.append(ReportEntry(i, th, error=_err(exc)))
    return rep


# -- serialization ------------------------------------------------------------------------

def _fmt_float(v: float) -> str:
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    s = "%.17g" % v
    if not any(ch in s for ch in ".eE"):
        s += ".0"
    return s


def _dump(obj, indent: int, level: int = 0) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number, bool)) or v is None for v in obj):
            return "[" + ", ".join(_dump(v, indent) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(report: ReportFile) -> str:
    return _dump(report.to_dict(), 2) + "\n"


def from_json(text: str) -> ReportFile:
    return ReportFile.from_dict(json.loads(text))


def to_csv(report: ReportFile) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for e in report.entries:
        r = e.report
        if r is None:
            w.writerow([e.point_index, e.theorem, "", "", "", "", "", ""])
            continue
        w.writerow([e.point_index, e.theorem, _fmt_float(r.lhs), _fmt_float(r.rhs), _fmt_float(r.gap),
                    str(r.holds).lower(), str(r.equality).lower(),
                    _fmt_float(r.worst_equality_residual)])
    return buf.getvalue()


def emit_report(report: ReportFile, path=None, fmt: str = "json") -> str:
    """Serialize the report; write it to `path` when given. Returns the text."""
    if fmt not in ("json", "csv"):
        raise ConfigError(f"unknown report format {fmt!r}")
    text = to_json(report) if fmt == "json" else to_csv(report)
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise ReportIOError(f"cannot write report to {path}: {exc}") from None
    return text
