import csv
import io
import json

import numpy as np
import pytest

from submersion_chen.cli import main
from submersion_chen.config import RunConfig, catalog_names, load_catalog, load_config
from submersion_chen.errors import ConfigError, MissingField, ShapeError
from submersion_chen.report import ReportFile, emit_report, from_json, run_verify, to_csv, to_json

REQUIRED = ["girmednh", "gigseh", "hopf_s7_s4", "flat_product", "sphere_chart", "cosymplectic_r7",
            "synthetic_complex_r6"]

FLAT = {
    "n": 4, "m": 2,
    "metric_total": {"1,1": "1", "2,2": "1", "3,3": "1", "4,4": "1"},
    "metric_base": [["1", 0], [0, "1"]],
    "map": ["x3", "x4"],
    "points": [[0, 0, 0, 0]],
    "theorems": [],
}


def write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return p


def test_load_girmednh():
    cfg = load_catalog("girmednh")
    assert (cfg.n, cfg.m) == (6, 3)
    assert cfg.metric_total[0][0] == "exp(2*x4)" and cfg.metric_total[5][5] == "exp(2*x4)"
    assert cfg.metric_total[1][1] == "exp(2*x6)" and cfg.metric_total[0][1] == 0
    assert cfg.parameters["alpha"] == pytest.approx(np.pi / 4)
    setup = cfg.build_setup()
    np.testing.assert_allclose(setup.map.value(np.array([0, 0, 1, 0, 1, 0.])), [0, 0, 0], atol=1e-15)


def test_minimal_flat_config(tmp_path):
    cfg = load_config(write(tmp_path, FLAT))
    assert cfg.build_setup().r == 2


@pytest.mark.parametrize("patch, err", [
    ({"m": 5}, ShapeError),
    ({"map": ["x3"]}, ShapeError),
    ({"metric_total": {"1,1": "1", "2,2": "1", "3,3": "1"}}, MissingField),
    ({"metric_total": {"1,1": "1", "2,2": "1", "3,3": "1", "4,4": "1", "5,5": "1"}}, ShapeError),
    ({"points": [[0, 0, 0]]}, ShapeError),
    ({"theorems": ["thm99"]}, ConfigError),
    ({"tolerances": {"nonsense_tol": 1}}, ConfigError),
    ({"map": ["x3 +", "x4"]}, ConfigError),
    ({"map": ["x5", "x4"]}, ConfigError),
    ({"extra": 1}, ConfigError),
])
def test_config_errors(tmp_path, patch, err):
    with pytest.raises(err):
        load_config(write(tmp_path, {**FLAT, **patch}))
    d = dict(FLAT)
    del d["map"]
    with pytest.raises(MissingField):
        RunConfig.from_dict(d)


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{ not json")
    with pytest.raises(ConfigError):
        load_config(p)


def test_config_hash_semantics(tmp_path):
    h0 = load_config(write(tmp_path, FLAT)).config_hash
    spaced = {**FLAT, "map": [" x3 ", "x4"], "metric_total": {"1,1": " 1", "2,2": "1 ", "3,3": "1", "4,4": "1"}}
    assert load_config(write(tmp_path, spaced)).config_hash == h0
    assert load_config(write(tmp_path, {**FLAT, "output": {"path": "x.json"}})).config_hash == h0
    for patch in ({"map": ["x3", "x4 + x1"]}, {"points": [[0, 0, 0, 0.1]]}, {"theorems": ["thm31"]},
                  {"tolerances": {"gap_tol": 1e-6}}, {"derivative_mode": "central"}):
        assert load_config(write(tmp_path, {**FLAT, **patch})).config_hash != h0


@pytest.mark.parametrize("name", catalog_names())
def test_catalog_entries_run(name):
    rep = run_verify(load_catalog(name))
    assert not rep.errors and not rep.failed
    cfg = load_catalog(name)
    assert len(rep.entries) == len(cfg.points) * len(set(cfg.theorems))


def test_required_catalog_present():
    assert set(REQUIRED) <= set(catalog_names())


def test_run_verify_examples():
    rep = run_verify(load_catalog("gigseh"), theorems=["thm31", "thm41"])
    for e in rep.entries:
        assert e.report.equality and abs(e.report.gap) < 1e-6
        assert all(c.residual < 1e-6 for c in e.report.equality_conditions if c.frame == "adapted")
    rep = run_verify(load_catalog("girmednh"), [0], ["thm31"])
    (e,) = rep.entries
    assert e.report.holds and not e.report.equality
    assert rep.validation["submersion"]["flagged"] == [0] and rep.warnings
    rep = run_verify(load_catalog("hopf_s7_s4"), [0], ["rsf_thm36", "rsf_thm43"])
    assert [e.theorem for e in rep.entries] == ["rsf_thm36", "rsf_thm43"]
    assert rep.entries[0].report.equality
    assert rep.entries[0].report.lhs == pytest.approx(2.0) and rep.entries[0].report.rhs == pytest.approx(2.0)


def test_per_point_errors_are_recorded():
    cfg = load_catalog("sphere_chart")
    rep = run_verify(cfg, theorems=["thm31", "thm41"])
    errs = [e for e in rep.entries if e.error]
    assert len(errs) == len(cfg.points) and all(e.error["type"] == "DimensionTooSmall" for e in errs)
    assert len(rep.entries) == 2 * len(cfg.points)


def test_json_round_trip(tmp_path):
    rep = run_verify(load_catalog("hopf_s7_s4"), [0])
    text = emit_report(rep, tmp_path / "r.json", "json")
    back = from_json((tmp_path / "r.json").read_text())
    assert to_json(back) == text
    assert json.loads(text)["entries"][0]["report"]["gap"] == rep.entries[0].report.gap
    assert isinstance(back, ReportFile)


def test_csv_output():
    rep = run_verify(load_catalog("gigseh"), theorems=[])
    assert to_csv(rep).strip() == "point_index,theorem,lhs,rhs,gap,holds,equality,worst_equality_residual"
    rep = run_verify(load_catalog("gigseh"), [0], ["thm31"])
    rows = list(csv.DictReader(io.StringIO(to_csv(rep))))
    assert rows[0]["gap"] == "0.0" and rows[0]["holds"] == "true"


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["catalog", "list"]) == 0
    assert "girmednh" in capsys.readouterr().out
    out = tmp_path / "g.csv"
    assert main(["catalog", "run", "gigseh", "--out", str(out), "--format", "csv"]) == 0
    assert out.read_text().startswith("point_index")
    cfg = json.loads((__import__("importlib.resources").resources.files("submersion_chen")
                      / "catalog" / "sasakian_r5.json").read_text())
    cfg["theorems"] = ["thm41"]
    assert main(["verify", "--config", str(write(tmp_path, cfg))]) == 2
    assert main(["verify", "--config", str(write(tmp_path, {**FLAT, "m": 9}))]) == 1
    assert main(["verify", "--config", str(tmp_path / "missing.json")]) == 1
    assert main(["verify", "--config", str(write(tmp_path, FLAT)), "--theorem", "thm31"]) == 1  # r = 2
    capsys.readouterr()
    assert main(["verify", "--config", str(write(tmp_path, {**FLAT, "n": 5, "metric_total":
                {f"{i},{i}": "1" for i in range(1, 6)}, "points": [[0] * 5]})),
                 "--theorem", "thm31", "--point", "0"]) == 0
    assert json.loads(capsys.readouterr().out)["entries"][0]["report"]["equality"] is True


def test_cli_lemma(capsys):
    assert main(["lemma", "--k", "3", "--a", "1,1,2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["b"] == pytest.approx(2.0) and out["equality"] is True
    assert main(["lemma", "--k", "4", "--a", "1,2"]) == 1
