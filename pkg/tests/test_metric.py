import numpy as np
import pytest

from submersion_chen.errors import NonPositiveDefinite, ShapeError, UnknownIdentifier
from submersion_chen.metric import (MetricField, christoffel, curvature_symmetry_residuals,
                                    eval_metric, local_metric, metricity_residual, riemann)

from conftest import catalog_setup, stereo_sphere


def test_flat_metric_has_zero_curvature():
    R = riemann(MetricField.euclidean(4), np.zeros(4))
    assert np.max(np.abs(R.components)) < 1e-14
    # flat metric in polar-like coordinates: dr^2 + r^2 dt^2
    polar = MetricField.diagonal(["1", "x1^2"])
    R = riemann(polar, [1.3, 0.4])
    assert np.max(np.abs(R.components)) < 1e-12
    Rc = riemann(MetricField.diagonal(["1", "x1^2"], mode="central"), [1.3, 0.4])
    assert np.max(np.abs(Rc.components)) < 1e-7


@pytest.mark.parametrize("mode, tol", [("analytic", 1e-12), ("central", 1e-5)])
def test_sphere_sectional_curvature(mode, tol):
    g = stereo_sphere(4, mode=mode)
    R = riemann(g, [0.2, -0.1, 0.3, 0.5])
    e = np.eye(4)
    for i in range(4):
        for j in range(i + 1, 4):
            assert R.sectional(e[i], e[j]) == pytest.approx(1.0, abs=tol)


def test_round_sphere_polar_chart():
    # dθ^2 + sin(θ)^2 dφ^2: R(dθ,dφ,dφ,dθ) = sin^2(θ); scaled by 4 it is 4 sin^2(θ)
    e1, e2 = [1, 0], [0, 1]
    R = riemann(MetricField.diagonal(["1", "sin(x1)^2"]), [np.pi / 3, 0.0])
    assert R.value(e1, e2, e2, e1) == pytest.approx(0.75)
    R4 = riemann(MetricField.diagonal(["4", "4*sin(x1)^2"]), [np.pi / 3, 0.0])
    assert R4.value(e1, e2, e2, e1) == pytest.approx(3.0)
    assert R4.sectional(e1, e2) == pytest.approx(0.25)
    gc = MetricField.diagonal(["1", "sin(x1)^2"], mode="central")
    assert riemann(gc, [np.pi / 3, 0.0]).value(e1, e2, e2, e1) == pytest.approx(0.75, abs=1e-6)


def test_girmednh_christoffel_symbols():
    _, setup = catalog_setup("girmednh")
    gam = christoffel(setup.g1, np.zeros(6))
    assert gam[3, 0, 0] == pytest.approx(-1.0, abs=1e-12)   # Γ^4_11
    assert gam[0, 0, 3] == pytest.approx(1.0, abs=1e-12)    # Γ^1_14
    assert gam[5, 1, 1] == pytest.approx(-1.0, abs=1e-12)   # Γ^6_22
    g_central = MetricField(setup.g1.exprs and [[setup.g1.exprs[6 * i + j] for j in range(6)]
                                                 for i in range(6)], mode="central")
    gc = christoffel(g_central, np.zeros(6))
    np.testing.assert_allclose(gc, gam, atol=1e-6)


def test_symmetries_and_metricity(rng):
    from submersion_chen.synthetic import random_warped_product

    wp = random_warped_product(rng)
    lm = local_metric(wp.setup.g1, wp.point)
    assert metricity_residual(lm) < 1e-12
    res = curvature_symmetry_residuals(riemann(wp.setup.g1, wp.point).components)
    assert max(res.values()) < 1e-10


def test_non_positive_definite():
    g = MetricField([["1", "x1"], [0, "1"]])
    eval_metric(g, [0.5, 0])
    with pytest.raises(NonPositiveDefinite):
        eval_metric(g, [1.0, 0])
    with pytest.raises(NonPositiveDefinite):
        eval_metric(MetricField.diagonal(["x1", "1"]), [-1.0, 0.0])


def test_upper_triangle_is_authoritative():
    g = MetricField([["1", "0.5"], ["7", "2"]])
    np.testing.assert_allclose(eval_metric(g, [0, 0]), [[1, 0.5], [0.5, 2]])


def test_shape_errors():
    with pytest.raises(ShapeError):
        MetricField([["1", "0"], ["0"]])
    with pytest.raises(UnknownIdentifier):
        MetricField.diagonal(["1", "x3"])
