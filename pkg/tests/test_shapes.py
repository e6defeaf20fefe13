import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elicitlab import ShapeError, ShapeFunction
from elicitlab.shapes import SHAPE_TAGS, moment_function

PARAMS = {"negsquare": 0.7, "alpha_half_square": 0.05, "const": 2.0, "exp_clip": 3.0}


def make(tag):
    return ShapeFunction(tag, PARAMS.get(tag))


@pytest.mark.parametrize("tag", SHAPE_TAGS)
def test_derivative_matches_central_difference(tag):
    g = make(tag)
    z = np.array([-2.5, -1.0, -0.3, 0.4, 1.1, 2.7])
    h = 1e-6
    fd = (g.value(z + h) - g.value(z - h)) / (2 * h)
    np.testing.assert_allclose(g.deriv(z), fd, rtol=1e-7, atol=1e-8)


def test_phi_derivative_formula():
    g = ShapeFunction("phi")
    z = np.linspace(-3, 3, 13)
    expect = np.sign(z) * (z * z + 2 * np.abs(z)) / (1 + np.abs(z)) ** 2
    np.testing.assert_allclose(g.deriv(z), expect, atol=1e-15)


@pytest.mark.parametrize("tag", SHAPE_TAGS)
def test_flags_agree_with_values(tag):
    g = make(tag)
    z = np.linspace(-4, 4, 401)
    v = g.value(z)
    dv = np.diff(v)
    if g.increasing:
        assert np.all(dv >= -1e-12)
    if g.strictly_increasing:
        assert np.all(dv > 0)
    if g.convex:
        assert np.all(np.diff(dv) >= -1e-12)
    if g.positive:
        assert np.all(v > 0)


def test_parameter_rules():
    with pytest.raises(ShapeError):
        ShapeFunction("alpha_half_square")
    with pytest.raises(ShapeError):
        ShapeFunction("exp", 1.0)
    with pytest.raises(ShapeError):
        ShapeFunction("bogus")
    assert ShapeFunction("negsquare").param == 1.0
    assert ShapeFunction("negsquare", 0.0).convex
    assert not ShapeFunction("negsquare", 2.0).convex


def test_moment_catalog():
    assert moment_function("one").value(3.0) == 1.0
    with pytest.raises(ShapeError):
        moment_function("cube")


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SHAPE_TAGS), st.floats(-5, 5))
def test_literal_round_trip(tag, z):
    from elicitlab import parse_shape

    g = make(tag)
    back = parse_shape(g.literal())
    assert back == g
    assert back.value(z) == g.value(z)
