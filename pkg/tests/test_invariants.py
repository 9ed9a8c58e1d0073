import numpy as np
import pytest

from submersion_chen.frames import Plane2, build_frames
from submersion_chen.invariants import (base_curvature_oracle, extremal_sectional, extremize,
                                        fiber_curvature_oracle, frame_curvature, grid_extremum,
                                        invariant_bundle, mixed_curvature_direct,
                                        mixed_curvature_tensor, sectional_curvature)
from submersion_chen.synthetic import random_warped_product

from conftest import catalog_setup


def _oracles(setup, x):
    fr = build_frames(setup, x)
    fc = frame_curvature(setup, x, fr)
    return (np.max(np.abs(fc.ker - fiber_curvature_oracle(setup, x, fr))),
            np.max(np.abs(fc.perp - base_curvature_oracle(setup, x, fr))),
            np.max(np.abs(mixed_curvature_tensor(setup, x, fr) - mixed_curvature_direct(setup, x, fr))))


@pytest.mark.parametrize("seed", range(4))
def test_fundamental_equations_against_oracles(seed):
    wp = random_warped_product(np.random.default_rng(seed), base_dim=2, fiber_dim=3)
    e10, e11, e12 = _oracles(wp.setup, wp.point)
    assert e10 < 1e-5 and e11 < 1e-5 and e12 < 1e-5


def test_literal_sign_form_disagrees_with_oracle():
    """The Gauss equation with the T-terms of the opposite sign does not reproduce the fibre curvature."""
    wp = random_warped_product(np.random.default_rng(11), base_dim=2, fiber_dim=3, scale=0.5)
    setup, x = wp.setup, wp.point
    fr = build_frames(setup, x)
    fc = frame_curvature(setup, x, fr)
    t = fc.tH
    literal = fc.vertical - np.einsum("ila,jka->ijkl", t, t) + np.einsum("jla,ika->ijkl", t, t)
    oracle = fiber_curvature_oracle(setup, x, fr)
    assert np.max(np.abs(fc.ker - oracle)) < 1e-5
    assert np.max(np.abs(literal - oracle)) > 1e-3


def test_additivity_and_bundle():
    cfg, setup = catalog_setup("hopf_s7_s4")
    b = invariant_bundle(setup, cfg.points[0])
    assert b.additivity_residual < 1e-9
    assert b.tau_M1 == pytest.approx(21.0, abs=1e-9)          # 7*6/2 on the unit sphere
    assert b.tauV_ker == pytest.approx(3.0, abs=1e-9)
    assert b.tauH_perp == pytest.approx(24.0, abs=1e-6)  # base S4(1/2): K = 4 on 6 planes
    assert b.infK["vertical"] == pytest.approx(1.0, abs=1e-6)
    assert b.supK["horizontal"] == pytest.approx(4.0, abs=1e-6)


def test_s2xs2_extremes():
    cfg, setup = catalog_setup("s2xs2")
    lo, plane_lo = extremal_sectional(setup, cfg.points[0], "ambient", "inf")
    hi, plane_hi = extremal_sectional(setup, cfg.points[0], "ambient", "sup")
    assert lo == pytest.approx(0.0, abs=1e-6)
    assert hi == pytest.approx(1.0, abs=1e-6)
    assert sectional_curvature(setup, cfg.points[0], plane_hi) == pytest.approx(hi, abs=1e-9)


@pytest.mark.parametrize("k", [3, 4])
def test_extremize_matches_grid(k, rng):
    # random algebraic curvature tensor built from symmetric forms
    R = np.zeros((k,) * 4)
    for _ in range(3):
        S = rng.normal(size=(k, k))
        S = S + S.T
        c = rng.normal()
        R += c * (np.einsum("ad,bc->abcd", S, S) - np.einsum("ac,bd->abcd", S, S))
    for mode in ("inf", "sup"):
        val, basis = extremize(R, mode)
        ref = grid_extremum(R, mode, step=np.pi / 40)
        assert (val <= ref + 1e-9) if mode == "inf" else (val >= ref - 1e-9)
        assert val == pytest.approx(ref, abs=5e-2 * max(1, abs(ref)))
        np.testing.assert_allclose(basis @ basis.T, np.eye(2), atol=1e-10)


def test_sectional_curvature_models():
    _, setup = catalog_setup("girmednh")
    fr = build_frames(setup, np.zeros(6))
    plane = Plane2("vertical", fr.vertical[:2])
    amb = sectional_curvature(setup, np.zeros(6), plane, model="ambient")
    ind = sectional_curvature(setup, np.zeros(6), plane, model="induced")
    fc = frame_curvature(setup, np.zeros(6), fr)
    assert amb == pytest.approx(fc.vertical[0, 1, 1, 0])
    assert ind == pytest.approx(fc.ker[0, 1, 1, 0])
