from functools import lru_cache

import numpy as np
import pytest

from submersion_chen.config import load_catalog
from submersion_chen.frames import SmoothMap, SubmersionSetup
from submersion_chen.metric import MetricField


@lru_cache(maxsize=None)
def catalog_setup(name):
    cfg = load_catalog(name)
    return cfg, cfg.build_setup()


@pytest.fixture
def girmednh():
    return catalog_setup("girmednh")


@pytest.fixture
def gigseh():
    return catalog_setup("gigseh")


@pytest.fixture
def hopf():
    return catalog_setup("hopf_s7_s4")


def twisted_slices(mode=None):
    """g = dx4^2 + (dx1^2 + dx2^2 + dx3^2 + 2 x4 dx1 dx3) onto x4: minimal fibers with T_13 != 0."""
    g = MetricField([["1", 0, "x4", 0], [0, "1", 0, 0], ["x4", 0, "1", 0], [0, 0, 0, "1"]], mode=mode)
    return SubmersionSetup(g, MetricField([["1"]], prefix="y", mode=mode), SmoothMap(["x4"], 4, mode=mode))


def stereo_sphere(n, mode=None):
    A = "(1+" + "+".join(f"x{i}^2" for i in range(1, n + 1)) + ")"
    return MetricField.diagonal([f"4/{A}^2"] * n, mode=mode)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
