import numpy as np
import pytest

from submersion_chen.errors import DegeneratePlane, RankDeficient, ShapeError
from submersion_chen.frames import (SmoothMap, SubmersionSetup, adapt_frames, build_frames,
                                    frame_residuals, orthonormalize, submersion_residual,
                                    validate_submersion)
from submersion_chen.metric import MetricField

from conftest import catalog_setup


def test_girmednh_frames_at_origin():
    _, setup = catalog_setup("girmednh")
    fr = build_frames(setup, np.zeros(6))
    s = np.sqrt(0.5)
    np.testing.assert_allclose(fr.vertical, [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0],
                                             [0, 0, s, 0, s, 0]], atol=1e-14)
    np.testing.assert_allclose(np.abs(fr.horizontal), [[0, 0, s, 0, s, 0], [0, 0, 0, 1, 0, 0],
                                                       [0, 0, 0, 0, 0, 1]], atol=1e-14)
    assert max(frame_residuals(setup, fr).values()) < 1e-12


@pytest.mark.parametrize("name", ["gigseh", "hopf_s7_s4", "cosymplectic_r7", "sasakian_r5", "sphere_chart"])
def test_frames_orthonormal_and_valid(name):
    cfg, setup = catalog_setup(name)
    for p in cfg.points:
        fr = build_frames(setup, p)
        assert max(frame_residuals(setup, fr).values()) < 1e-10
        assert submersion_residual(setup, p, fr) < 1e-8


def test_girmednh_is_flagged_as_non_submersion():
    cfg, setup = catalog_setup("girmednh")
    rep = validate_submersion(setup, cfg.points)
    assert rep.flagged == (0, 1) and not rep.passed
    assert rep.max_residual == pytest.approx(1.0)


def test_rank_deficient():
    setup = SubmersionSetup(MetricField.euclidean(3), MetricField.euclidean(2),
                            SmoothMap(["x1^2", "x2"], 3))
    with pytest.raises(RankDeficient):
        build_frames(setup, [0, 0, 0])
    build_frames(setup, [1, 0, 0])


def test_dimension_mismatch():
    with pytest.raises(ShapeError):
        SubmersionSetup(MetricField.euclidean(3), MetricField.euclidean(1), SmoothMap(["x1", "x2"], 3))
    with pytest.raises(ShapeError):
        SmoothMap(["x1", "x2", "x1*x2"], 2)


def test_adapt_frames_plane_and_h1():
    _, setup = catalog_setup("gigseh")
    x = np.ones(6)
    fr = build_frames(setup, x)
    v = np.array([[1.0, 0, 1.0, 0, 0, 0], [0, 0, 1.0, 0, -1.0, 0]])
    ad = adapt_frames(setup, fr, vertical_plane=v, h1=[0, 1, 0, 1, 0, 0])
    G = setup.g1.value(x)
    # span{V1, V2} equals span of the given vectors
    P = ad.vertical[:2]
    coef = np.linalg.lstsq(P.T, v.T, rcond=None)[0]
    np.testing.assert_allclose(P.T @ coef, v.T, atol=1e-12)
    np.testing.assert_allclose(ad.horizontal[0], np.array([0, 1, 0, 1, 0, 0]) / np.sqrt(2), atol=1e-12)
    np.testing.assert_allclose(ad.basis() @ G @ ad.basis().T, np.eye(6), atol=1e-12)
    with pytest.raises(DegeneratePlane):
        adapt_frames(setup, fr, vertical_plane=[[0, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0]])


def test_orthonormalize_rejects_dependent_vectors():
    with pytest.raises(DegeneratePlane):
        orthonormalize(np.eye(3), [[1, 0, 0], [2, 0, 0]])
