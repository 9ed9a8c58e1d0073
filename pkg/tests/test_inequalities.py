import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from submersion_chen.config import catalog_names
from submersion_chen.errors import (ConfigError, ConstraintViolated, DimensionTooSmall,
                                    FiberTooSmall, MixedStructureVector, ModelMisfit)
from submersion_chen.frames import SmoothMap, SubmersionSetup, build_frames
from submersion_chen.inequalities import (THEOREMS, LemmaInstance, check_delta_hat,
                                          check_horizontal_vertical, check_theorem, check_vertical,
                                          chen_lemma_gap, equality_diagnostics)
from submersion_chen.invariants import frame_curvature
from submersion_chen.metric import MetricField
from submersion_chen.space_forms import SpaceFormModel

from conftest import catalog_setup, twisted_slices

# -- lemma ----------------------------------------------------------------------------


@pytest.mark.parametrize("a, b, gap, eq", [
    ((1, 1, 2), 2.0, 0.0, True),
    ((1, 1, 1, 1), 4 / 3, 2 / 3, False),
    ((0, 0, 0), 0.0, 0.0, True),
])
def test_lemma_examples(a, b, gap, eq):
    res = chen_lemma_gap(LemmaInstance(len(a), a, b))
    assert res.gap == pytest.approx(gap, abs=1e-12)
    assert res.equality is eq
    assert LemmaInstance.from_a(a).b == pytest.approx(b)


def test_lemma_constraint_violated():
    with pytest.raises(ConstraintViolated):
        chen_lemma_gap(LemmaInstance(3, (1, 1, 2), 3.0))
    with pytest.raises(ConfigError):
        LemmaInstance.from_a([1, 2])


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=3, max_size=10))
def test_lemma_gap_nonnegative(a):
    res = chen_lemma_gap(LemmaInstance.from_a(a))
    assert res.gap >= -1e-9
    if res.condition_residual < 1e-9:
        assert abs(res.gap) < 1e-7


@settings(max_examples=100, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.integers(3, 10))
def test_lemma_equality_instances(a1, a2, k):
    a = [a1, a2] + [a1 + a2] * (k - 2)
    res = chen_lemma_gap(LemmaInstance.from_a(a))
    assert abs(res.gap) < 1e-7 and res.equality


# -- vertical inequality ----------------------------------------------------------------


def test_gigseh_equality_any_plane(gigseh):
    cfg, setup = gigseh
    x = np.ones(6)
    for plane in [(0, 1), (1, 2), [[1.0, 0, 1.0, 0, 1.0, 0], [1.0, 0, -1.0, 0, 0, 0]]]:
        r = check_vertical(setup, x, plane)
        assert abs(r.gap) < 1e-12 and r.equality and r.diagnostics_pass


def test_girmednh_strict(girmednh):
    _, setup = girmednh
    r = check_vertical(setup, np.zeros(6), (0, 1))
    assert r.holds and not r.equality and r.gap == pytest.approx(0.5, abs=1e-9)
    assert r.terms["normH2"] == pytest.approx(2 / 9, abs=1e-12)
    ref = {c.label: c for c in r.equality_conditions if c.frame == "reference"}
    assert ref["T_11^l + T_22^l = 0 (l >= 2)"].residual == pytest.approx(1.0, abs=1e-12)
    assert not r.diagnostics_pass


def test_hopf_vertical_equality(hopf):
    cfg, setup = hopf
    r = check_theorem("rsf_thm36", setup, cfg.points[0], model=cfg.model)
    assert r.lhs == pytest.approx(2.0, abs=1e-9) and r.rhs == pytest.approx(2.0, abs=1e-9)
    assert r.equality and r.diagnostics_pass
    assert all(v["residual"] < 1e-9 for v in r.cross_checks.values())


def test_theorem31_counterexample():
    """Minimal fibres with an off-diagonal T violate the stated vertical inequality."""
    setup = twisted_slices()
    r = check_vertical(setup, np.zeros(4), (0, 1))
    assert r.terms["normH2"] == pytest.approx(0.0, abs=1e-14)
    assert r.lhs == pytest.approx(0.0, abs=1e-12)
    assert r.rhs == pytest.approx(0.25, abs=1e-12)
    assert not r.holds
    labels = {c.label: c.passed for c in r.equality_conditions if c.frame == "adapted"}
    assert not labels["T_1j = T_2j = 0 (j > 2)"]


def test_vertical_gap_invariant_under_rotation_in_plane(girmednh):
    cfg, setup = girmednh
    x = cfg.points[1]
    fr = build_frames(setup, x)
    base = check_vertical(setup, x, fr.vertical[:2]).gap
    for t in (0.3, 1.1, 2.5):
        c, s = np.cos(t), np.sin(t)
        rot = np.array([[c, s], [-s, c]]) @ fr.vertical[:2]
        assert check_vertical(setup, x, rot).gap == pytest.approx(base, abs=1e-7)


def test_dimension_errors():
    cfg, setup = catalog_setup("s2xs2")
    with pytest.raises(FiberTooSmall):
        check_vertical(setup, cfg.points[0])
    with pytest.raises(FiberTooSmall):
        equality_diagnostics(setup, cfg.points[0])
    cfg, setup = catalog_setup("sphere_chart")
    with pytest.raises(DimensionTooSmall):
        check_horizontal_vertical(setup, cfg.points[0])


def test_model_misfit(hopf):
    cfg, setup = hopf
    with pytest.raises(ModelMisfit):
        check_vertical(setup, cfg.points[0], model=SpaceFormModel("real", c=2.0))
    with pytest.raises(ModelMisfit):
        check_vertical(setup, cfg.points[0], model=SpaceFormModel("complex", c=1.0))


def test_mixed_xi_rejected():
    cfg, setup = catalog_setup("cosymplectic_r7")
    tilted = SubmersionSetup(setup.g1, MetricField.euclidean(4),
                             SmoothMap(["x3", "x4", "x5", "(x6 + x7)*sqrt(0.5)"], 7),
                             structure=setup.structure)
    with pytest.raises(MixedStructureVector):
        check_vertical(tilted, np.zeros(7), model=cfg.model)


# -- delta-hat --------------------------------------------------------------------------


def test_delta_hat_examples(hopf):
    _, flat = catalog_setup("flat_product")
    r = check_delta_hat(flat, np.zeros(5))
    assert r.lhs == pytest.approx(0) and r.rhs == pytest.approx(0) and r.equality
    cfg, setup = hopf
    r = check_delta_hat(setup, cfg.points[0], model=cfg.model)
    assert r.lhs == pytest.approx(2.0, abs=1e-6) and r.rhs == pytest.approx(2.0, abs=1e-6)
    _, g = catalog_setup("girmednh")
    assert check_delta_hat(g, np.zeros(6)).gap > 0


def test_delta_hat_dominance(rng):
    cfg, setup = catalog_setup("sphere_chart")
    x = cfg.points[0]
    r = check_delta_hat(setup, x)
    assert r.rhs <= r.lhs + 1e-9
    fc = frame_curvature(setup, x)
    for _ in range(20):
        Q, _ = np.linalg.qr(rng.normal(size=(3, 2)))
        a, b = Q.T
        K = np.einsum("ijkl,i,j,k,l->", fc.ker, a, b, b, a)
        assert r.rhs <= r.terms["tauV_ker"] - K + 1e-9


# -- vertical-horizontal inequality -------------------------------------------------------------


def test_horizontal_vertical_examples(gigseh, hopf):
    _, flat = catalog_setup("flat_product")
    r = check_horizontal_vertical(flat, np.zeros(5))
    assert r.lhs == pytest.approx(0) and r.rhs == pytest.approx(0) and r.equality
    r = check_horizontal_vertical(gigseh[1], np.ones(6))
    assert r.equality
    cfg, setup = hopf
    r = check_theorem("rsf_thm43", setup, cfg.points[0], model=cfg.model)
    assert r.lhs == pytest.approx(19.0, abs=1e-9)
    assert r.holds and r.rhs >= 19.0


@pytest.mark.parametrize("name, point", [("hopf_s7_s4", 0), ("hopf_s7_s4", 1), ("sasakian_r5", 0),
                                         ("sasakian_r5", 1)])
def test_horizontal_vertical_gap_is_an_A_combination(name, point):
    """With totally geodesic fibres the gap reduces to A-sums, so it can be negative."""
    cfg, setup = catalog_setup(name)
    r = check_horizontal_vertical(setup, cfg.points[point], (0, 1), (0, 1))
    t = r.terms
    assert t["normH2"] < 1e-20
    expected = t["A_sum_first_row"] + t["A_sum_block"] - 3 * t["A12_sq"]
    assert r.gap == pytest.approx(expected, abs=1e-6)


def test_sasakian_violates_horizontal_vertical():
    cfg, setup = catalog_setup("sasakian_r5")
    for th in ("thm41", "gssf_thm47"):
        r = check_theorem(th, setup, cfg.points[0], (0, 1), (0, 1), cfg.model)
        assert r.gap == pytest.approx(-3.0, abs=1e-9) and not r.holds


@pytest.mark.parametrize("name", ["synthetic_complex_r6", "cosymplectic_r7"])
def test_closed_form_cross_checks(name):
    cfg, setup = catalog_setup(name)
    for th in cfg.theorems:
        for p in cfg.points:
            r = check_theorem(th, setup, p, cfg.vertical_plane, cfg.horizontal_plane, cfg.model)
            assert r.holds
            assert all(v["residual"] < 1e-5 for v in r.cross_checks.values())


# -- equality diagnostics and catalog-wide properties ------------------------------------------


def test_diagnostics_zero_mean_curvature_tries_each_direction():
    cfg, setup = catalog_setup("gigseh")
    d = equality_diagnostics(setup, np.ones(6))
    assert d.passed and all(c.residual == 0 for c in d.conditions)


@pytest.mark.parametrize("name", catalog_names())
def test_catalog_theorems_hold_and_equality_is_consistent(name):
    cfg, setup = catalog_setup(name)
    for p in cfg.points:
        for th in cfg.theorems:
            r = check_theorem(th, setup, p, cfg.vertical_plane, cfg.horizontal_plane, cfg.model)
            assert r.holds, (th, r.gap)
            if THEOREMS[th][0] == "vertical":
                assert r.diagnostics_pass == (abs(r.gap) <= setup.tolerances.eq_tol)


def test_registry_errors(hopf):
    cfg, setup = hopf
    with pytest.raises(ConfigError):
        check_theorem("thm99", setup, cfg.points[0])
    with pytest.raises(ConfigError):
        check_theorem("rsf_thm36", setup, cfg.points[0])
    with pytest.raises(ConfigError):
        check_theorem("csf_thm38", setup, cfg.points[0], model=cfg.model)
