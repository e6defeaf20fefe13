import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elicitlab import kernels
from elicitlab.shapes import SHAPE_TAGS, ShapeFunction

needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")

PARAMS = {"negsquare": 0.7, "alpha_half_square": 0.05, "const": 2.0, "exp_clip": 3.0}
SHAPES = [ShapeFunction(t, PARAMS.get(t)) for t in SHAPE_TAGS]


def rows(seed, n, k):
    rng = np.random.default_rng(seed)
    return rng.normal(-1.0, 1.5, size=(n, k)), rng.standard_t(3, size=n)


@needs_numba
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(SHAPES), st.floats(0.01, 0.99))
def test_pinball_paths_agree(seed, g, alpha):
    X, y = rows(seed, 200, 1)
    a = kernels.pinball_rows_numpy(X[:, 0], y, alpha, g)
    b = kernels.pinball_rows_numba(X[:, 0], y, alpha, g)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


@needs_numba
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.01, 0.99))
def test_expectile_paths_agree(seed, tau):
    X, y = rows(seed, 200, 1)
    np.testing.assert_allclose(kernels.expectile_rows_numpy(X[:, 0], y, tau),
                               kernels.expectile_rows_numba(X[:, 0], y, tau), rtol=1e-12, atol=1e-12)


@needs_numba
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(SHAPES), st.sampled_from(SHAPES), st.integers(1, 3))
def test_spectral_paths_agree(seed, g, risk_shape, m):
    X, y = rows(seed, 200, m + 1)
    q = np.linspace(0.05, 0.5, m)
    p = np.full(m, 1.0 / m)
    gs = (g,) * m
    a = kernels.spectral_rows_numpy(X, y, q, p, gs, risk_shape)
    b = kernels.spectral_rows_numba(X, y, q, p, gs, risk_shape)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


def test_dispatch_broadcasts_on_numpy_path():
    # a grid of forecasts against one observation is not row aligned
    X = np.linspace(-2, 2, 11)
    out = kernels.pinball_rows(X, 0.3, 0.5, ShapeFunction("identity"))
    assert out.shape == (11,)


@pytest.mark.parametrize("flag,expect", [("1", "False"), ("0", str(kernels.HAVE_NUMBA))])
def test_env_flag_selects_path(flag, expect):
    env = dict(os.environ, ELICITLAB_DISABLE_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", "from elicitlab import kernels; print(kernels.USE_NUMBA)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expect
