import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from elicitlab import (
    ElicitError,
    Exponential,
    Lognormal,
    Mixture,
    MomentError,
    Normal,
    StudentT,
    TwoPoint,
    Uniform,
    mix,
)
from elicitlab.shapes import ShapeFunction

LEVELS = np.linspace(0.02, 0.98, 20)

loc = st.floats(-5, 5)
pos = st.floats(0.2, 4)

FAMILIES = {
    "normal": st.builds(Normal, loc, pos),
    "student_t": st.builds(StudentT, st.floats(1.5, 30), loc, pos),
    "lognormal": st.builds(Lognormal, st.floats(-1, 1), st.floats(0.1, 1.2)),
    "uniform": st.tuples(loc, pos).map(lambda t: Uniform(t[0], t[0] + t[1])),
    "exponential": st.builds(Exponential, st.floats(0.2, 5)),
    "mixture": st.builds(
        lambda w, m1, s1, m2, s2: mix([(w, Normal(m1, s1)), (1 - w, Normal(m2, s2))]),
        st.floats(0.05, 0.95), loc, pos, loc, pos),
}


# -- examples ---------------------------------------------------------------


def test_cdf_examples():
    assert Normal(0, 1).cdf(0.0) == 0.5
    assert Uniform(0, 1).cdf(0.25) == pytest.approx(0.25, abs=1e-15)
    assert StudentT(3, 0, 1).cdf(0.0) == pytest.approx(0.5, abs=1e-15)


def test_quantile_examples(frozen):
    assert Normal(0, 1).quantile(0.5) == pytest.approx(0.0, abs=1e-15)
    assert Uniform(2, 4).quantile(0.25) == pytest.approx(2.5, abs=1e-14)
    assert Normal(0, 1).quantile(0.05) == pytest.approx(frozen["normal_quantile_0.05"], abs=1e-10)
    assert Normal(0, 1).quantile(0.05) == pytest.approx(-1.644854, abs=1e-6)


def test_lpe_examples(frozen):
    assert Normal(0, 1).lpe(math.inf) == 0.0
    assert Uniform(0, 1).lpe(0.5) == pytest.approx(0.125, abs=1e-15)
    assert Exponential(1.0).lpe(1.0) == pytest.approx(frozen["exponential_lpe_at_1"], abs=1e-12)
    assert Exponential(1.0).lpe(1.0) == pytest.approx(1 - 2 / math.e, abs=1e-12)


def test_mixture_examples(frozen):
    n = Normal(0, 1)
    assert mix([(1.0, n)]) is n
    m = mix([(0.5, Normal(0, 1)), (0.5, Normal(2, 1))])
    assert m.mean == pytest.approx(1.0, abs=1e-15)
    assert m.variance == pytest.approx(frozen["mixture_variance"], abs=1e-10)


def test_mixture_rejects_bad_weights():
    with pytest.raises(ElicitError):
        Mixture(((0.5, Normal(0, 1)), (0.6, Normal(1, 1))))
    with pytest.raises(ElicitError):
        Mixture(((-0.5, Normal(0, 1)), (1.5, Normal(1, 1))))


def test_student_t_needs_finite_mean():
    with pytest.raises(ElicitError):
        StudentT(1.0, 0, 1)
    t3 = StudentT(3.0, 0, 1)
    assert t3.variance == pytest.approx(3.0)
    with pytest.raises(MomentError):
        StudentT(1.5, 0, 1).second_moment


def test_two_point_uses_lower_quantile():
    d = TwoPoint(-1.0, 2.0, 0.3)
    assert d.quantile(0.3) == -1.0
    assert d.quantile(0.3000001) == 2.0
    assert d.lpe(0.0) == pytest.approx(-0.3)
    assert not d.continuous
    assert d.has_unique_quantile(0.2)
    assert not d.has_unique_quantile(0.3)


def test_shift_moves_location():
    d = Exponential(2.0).shift(1.5)
    assert d.mean == pytest.approx(2.0)
    assert d.quantile(0.5) == pytest.approx(1.5 + math.log(2) / 2)
    assert d.lpe(math.inf) == pytest.approx(2.0)


def test_scale_falls_back_to_iqr():
    d = StudentT(1.5, 0, 2)
    q1, q3 = d.quantile(0.25), d.quantile(0.75)
    assert d.scale() == pytest.approx((q3 - q1) / 1.349)


# -- invariants ---------------------------------------------------------------


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_quantile_cdf_round_trip(family):
    @settings(max_examples=200, deadline=None)
    @given(FAMILIES[family])
    def check(d):
        q = d.quantile(LEVELS)
        assert np.all(np.diff(q) > 0)
        np.testing.assert_allclose(d.cdf(q), LEVELS, atol=1e-9, rtol=0)
        back = np.array([d.quantile(float(p)) for p in d.cdf(q)])
        np.testing.assert_allclose(back, q, atol=1e-9 * max(1.0, d.scale()), rtol=1e-9)

    check()


def _quad_lpe(d, x):
    lo, hi = d.support()
    f = lambda y: y * d.pdf(y)  # noqa: E731
    upper = min(x, hi)
    if upper <= lo:
        return 0.0
    c = float(d.quantile(0.5))
    pts = [p for p in (c,) if lo < p < upper]
    a = integrate.quad(f, lo, pts[0], epsabs=1e-13, epsrel=1e-12, limit=200)[0] if pts else 0.0
    b = integrate.quad(f, pts[0] if pts else lo, upper, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
    return a + b


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_lpe_matches_quadrature(family):
    @settings(max_examples=20, deadline=None)
    @given(FAMILIES[family])
    def check(d):
        xs = d.quantile(np.linspace(0.05, 0.95, 10))
        for x in xs:
            assert float(d.lpe(x)) == pytest.approx(_quad_lpe(d, float(x)), abs=1e-8)

    check()


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_lpe_tends_to_mean(family):
    @settings(max_examples=20, deadline=None)
    @given(FAMILIES[family])
    def check(d):
        assert float(d.lpe(math.inf)) == pytest.approx(d.mean, abs=1e-9 * max(1.0, abs(d.mean)))

    check()


@settings(max_examples=50, deadline=None)
@given(FAMILIES["normal"], FAMILIES["exponential"], st.floats(-3, 3))
def test_mixture_is_affine_in_weight(d0, d1, x):
    ws = (0.2, 0.5, 0.9)
    for w in ws:
        m = mix([(1 - w, d0), (w, d1)])
        assert m.cdf(x) == pytest.approx((1 - w) * d0.cdf(x) + w * d1.cdf(x), abs=1e-14)
        assert m.lpe(x) == pytest.approx((1 - w) * d0.lpe(x) + w * d1.lpe(x), abs=1e-12)


def test_partial_square_matches_quadrature():
    d = StudentT(5.0, 0.3, 1.2)
    sq = ShapeFunction("square")
    for x in (-2.0, 0.0, 1.7):
        ref = integrate.quad(lambda y: y * y * d.pdf(y), -np.inf, x, epsabs=1e-13, epsrel=1e-12)[0]
        assert float(d.partial(sq, x)) == pytest.approx(ref, rel=1e-9)


def test_partial_exp_matches_quadrature():
    for d in (Normal(0.2, 0.7), Exponential(3.0), Uniform(-1, 2)):
        lo = d.support()[0]
        ref = integrate.quad(lambda y: math.exp(y) * d.pdf(y), lo, 0.5, epsabs=1e-13, epsrel=1e-12)[0]
        assert float(d.partial(ShapeFunction("exp"), 0.5)) == pytest.approx(ref, rel=1e-9)
