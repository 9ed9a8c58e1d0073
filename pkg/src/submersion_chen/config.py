"""Run configuration files (JSON) and their conversion to submersion setups."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .domain import Domain
from .errors import ConfigError, MissingField, ShapeError
from .expressions import parse_expression
from .fields import ANALYTIC, CENTRAL
from .frames import SmoothMap, SubmersionSetup
from .metric import MetricField
from .space_forms import SpaceFormModel, StructureTensors
from .tolerances import Tolerances

_KNOWN = {"name", "description", "n", "m", "parameters", "metric_total", "metric_base", "map",
          "structure", "model", "domain", "base_domain", "points", "planes", "theorems",
          "tolerances", "derivative_mode", "output"}


def _matrix(spec, n: int, label: str, symmetric: bool = True) -> list:
    """Nested n x n list of entries from a nested list or a sparse {"i,j": expr} dict."""
    if isinstance(spec, dict):
        M = [[None] * n for _ in range(n)]
        for key, val in spec.items():
            try:
                i, j = (int(t) for t in str(key).split(","))
            except ValueError:
                raise ConfigError(f"{label}: bad index {key!r}, expected 'i,j'") from None
            if not (1 <= i <= n and 1 <= j <= n):
                raise ShapeError(f"{label}: index {key!r} outside 1..{n}")
            if symmetric and i > j:
                i, j = j, i
            M[i - 1][j - 1] = val
    elif isinstance(spec, list):
        if len(spec) != n or any(not isinstance(r, list) or len(r) != n for r in spec):
            raise ShapeError(f"{label} must be {n}x{n}")
        M = [list(r) for r in spec]
    else:
        raise ConfigError(f"{label} must be a nested list or an 'i,j' dict")
    if symmetric:
        for i in range(n):
            if M[i][i] is None:
                raise MissingField(f"{label}: missing diagonal entry {i + 1},{i + 1}")
    return [[0 if v is None else v for v in row] for row in M]


def _vector(spec, n: int, label: str) -> list:
    if isinstance(spec, dict):
        v = [0] * n
        for key, val in spec.items():
            i = int(key)
            if not 1 <= i <= n:
                raise ShapeError(f"{label}: index {i} outside 1..{n}")
            v[i - 1] = val
        return v
    if not isinstance(spec, list) or len(spec) != n:
        raise ShapeError(f"{label} must have {n} entries")
    return list(spec)


def _canon(item, n, prefix, params) -> str:
    return parse_expression(item, n, prefix, params).canonical()


def _plane(spec, label):
    if spec is None:
        return None
    if isinstance(spec, dict) and "vectors" in spec:
        vecs = np.asarray(spec["vectors"], dtype=float)
        if vecs.ndim != 2 or vecs.shape[0] != 2:
            raise ShapeError(f"planes.{label}.vectors must be two vectors")
        return vecs
    if isinstance(spec, list) and len(spec) == 2 and all(isinstance(v, int) for v in spec):
        if spec[0] == spec[1] or min(spec) < 1:
            raise ConfigError(f"planes.{label} needs two distinct 1-based indices")
        return (spec[0] - 1, spec[1] - 1)
    raise ConfigError(f"planes.{label} must be [i, j] or {{'vectors': [[...], [...]]}}")


@dataclass
class RunConfig:
    name: str
    n: int
    m: int
    metric_total: list
    metric_base: list
    map: list
    parameters: dict = field(default_factory=dict)
    structure: dict | None = None
    model: SpaceFormModel | None = None
    domain: list = field(default_factory=list)
    base_domain: list = field(default_factory=list)
    points: list = field(default_factory=list)
    planes: dict = field(default_factory=dict)
    theorems: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    derivative_mode: str = ANALYTIC
    output: dict = field(default_factory=dict)
    description: str = ""
    source: str | None = None

    # -- construction ------------------------------------------------------------

    @classmethod
    def from_dict(cls, d: dict, source: str | None = None) -> "RunConfig":
        unknown = set(d) - _KNOWN
        if unknown:
            raise ConfigError(f"unknown config field(s): {sorted(unknown)}")
        for key in ("n", "m", "metric_total", "metric_base", "map"):
            if key not in d:
                raise MissingField(f"config is missing {key!r}")
        n, m = d["n"], d["m"]
        if not (isinstance(n, int) and isinstance(m, int)) or n < 1 or m < 1:
            raise ShapeError("n and m must be positive integers")
        if m > n:
            raise ShapeError(f"base dimension m={m} exceeds total dimension n={n}")
        params = {str(k): float(v) for k, v in d.get("parameters", {}).items()}
        mode = d.get("derivative_mode", ANALYTIC)
        if mode not in (ANALYTIC, CENTRAL):
            raise ConfigError(f"derivative_mode must be {ANALYTIC!r} or {CENTRAL!r}")
        map_ = d["map"]
        if not isinstance(map_, list) or len(map_) != m:
            raise ShapeError(f"map must have m={m} components")
        structure = d.get("structure")
        if structure is not None:
            structure = dict(structure)
            if "kind" not in structure or "tensor" not in structure:
                raise MissingField("structure needs 'kind' and 'tensor'")
            structure["tensor"] = _matrix(structure["tensor"], n, "structure.tensor", symmetric=False)
            for key in ("xi", "eta"):
                if structure.get(key) is not None:
                    structure[key] = _vector(structure[key], n, f"structure.{key}")
        model = None
        if d.get("model") is not None:
            md = dict(d["model"])
            if "family" not in md:
                raise MissingField("model needs 'family'")
            c123 = md.get("c123")
            model = SpaceFormModel(md["family"], md.get("c"), tuple(c123) if c123 else None,
                                   md.get("alpha"))
        points = d.get("points", [[0.0] * n])
        if points == "origin":
            points = [[0.0] * n]
        pts = []
        for p in points:
            if not isinstance(p, list) or len(p) != n:
                raise ShapeError(f"every point needs {n} coordinates")
            pts.append([float(parse_expression(v, 0, "x", params)(np.zeros(0)))
                        if isinstance(v, str) else float(v) for v in p])
        planes = d.get("planes", {}) or {}
        bad = set(planes) - {"vertical", "horizontal"}
        if bad:
            raise ConfigError(f"unknown plane key(s): {sorted(bad)}")
        theorems = list(d.get("theorems", []))
        from .inequalities import THEOREMS

        for t in theorems:
            if t not in THEOREMS:
                raise ConfigError(f"unknown theorem id {t!r}; known: {sorted(THEOREMS)}")
        tol = dict(d.get("tolerances", {}))
        try:
            Tolerances().updated(tol)
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
        cfg = cls(
            name=d.get("name", Path(source).stem if source else "config"), n=n, m=m,
            metric_total=_matrix(d["metric_total"], n, "metric_total"),
            metric_base=_matrix(d["metric_base"], m, "metric_base"), map=list(map_),
            parameters=params, structure=structure, model=model,
            domain=list(d.get("domain", [])), base_domain=list(d.get("base_domain", [])),
            points=pts, planes=planes, theorems=theorems, tolerances=tol,
            derivative_mode=mode, output=dict(d.get("output", {})),
            description=d.get("description", ""), source=source)
        cfg.canonical()  # parses every expression once so errors surface at load time
        return cfg

    # -- derived objects --------------------------------------------------------------

    @property
    def vertical_plane(self):
        return _plane(self.planes.get("vertical"), "vertical")

    @property
    def horizontal_plane(self):
        return _plane(self.planes.get("horizontal"), "horizontal")

    def build_setup(self) -> SubmersionSetup:
        p, mode = self.parameters, self.derivative_mode
        dom = Domain.from_strings(self.domain, self.n, "x", p)
        g1 = MetricField(self.metric_total, self.n, mode=mode, domain=dom, parameters=p)
        g2 = MetricField(self.metric_base, self.m, mode=mode, prefix="y", parameters=p,
                         domain=Domain.from_strings(self.base_domain, self.m, "y", p))
        F = SmoothMap(self.map, self.n, self.m, mode=mode, domain=dom, parameters=p)
        st = None
        if self.structure is not None:
            s = self.structure
            st = StructureTensors(s["kind"], s["tensor"], s.get("xi"), s.get("eta"), self.n, p)
        tol = Tolerances.for_mode(mode == ANALYTIC).updated(self.tolerances)
        return SubmersionSetup(g1, g2, F, st, dom, self.name, tol)

    def canonical(self) -> dict:
        """Semantic content with every expression in canonical form."""
        n, m, p = self.n, self.m, self.parameters
        c = lambda v, dim, pre="x": _canon(v, dim, pre, p)
        out = {
            "n": n, "m": m, "parameters": dict(sorted(p.items())),
            "metric_total": [[c(v, n) for v in row[i:]] for i, row in enumerate(self.metric_total)],
            "metric_base": [[c(v, m, "y") for v in row[i:]] for i, row in enumerate(self.metric_base)],
            "map": [c(v, n) for v in self.map],
            "domain": sorted(" ".join(t.split()) for t in self.domain),
            "base_domain": sorted(" ".join(t.split()) for t in self.base_domain),
            "points": self.points, "planes": self.planes, "theorems": self.theorems,
            "tolerances": dict(sorted(self.tolerances.items())),
            "derivative_mode": self.derivative_mode,
            "model": self.model.to_dict() if self.model else None,
            "structure": None,
        }
        if self.structure is not None:
            s = self.structure
            out["structure"] = {
                "kind": s["kind"],
                "tensor": [[c(v, n) for v in row] for row in s["tensor"]],
                "xi": [c(v, n) for v in s["xi"]] if s.get("xi") is not None else None,
                "eta": [c(v, n) for v in s["eta"]] if s.get("eta") is not None else None,
            }
        return out

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return RunConfig.from_dict(data, str(path))


# -- built-in catalog ----------------------------------------------------------------

CATALOG = ("girmednh", "gigseh", "hopf_s7_s4", "flat_product", "sphere_chart",
           "cosymplectic_r7", "synthetic_complex_r6", "sasakian_r5", "s2xs2")


def catalog_path(name: str):
    if name not in catalog_names():
        raise ConfigError(f"unknown catalog entry {name!r}; known: {', '.join(catalog_names())}")
    return resources.files("submersion_chen") / "catalog" / f"{name}.json"


def catalog_names() -> list:
    root = resources.files("submersion_chen") / "catalog"
    found = {p.name[:-5] for p in root.iterdir() if p.name.endswith(".json")}
    return [n for n in CATALOG if n in found] + sorted(found - set(CATALOG))


def load_catalog(name: str) -> RunConfig:
    path = catalog_path(name)
    return RunConfig.from_dict(json.loads(path.read_text()), f"catalog:{name}")
