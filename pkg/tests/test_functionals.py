import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elicitlab import (
    ElicitError,
    Expectile,
    ExpectedShortfall,
    Exponential,
    Lognormal,
    Mean,
    MomentError,
    Normal,
    NonUniqueQuantileError,
    SpectralMeasure,
    SpectralWithQuantiles,
    StudentT,
    TwoPoint,
    Uniform,
    VaRES,
    decompose_spectral_with_unit_mass,
    eval_functional,
    expected_shortfall,
    mix,
    value_at_risk,
)
from elicitlab.functionals import MeanVariance, MomentK, Quantile, RatioOfExpectations, stack

CONTINUOUS = [
    Normal(0.3, 1.4),
    StudentT(4.0, -0.2, 0.8),
    Uniform(-1.0, 3.0),
    Exponential(0.7),
    Lognormal(0.1, 0.6),
    mix([(0.4, Normal(-1, 0.5)), (0.6, Normal(2, 1.5))]),
]


def test_examples(frozen):
    assert eval_functional(Mean(), Normal(1, 2)) == pytest.approx([1.0])
    v, e = eval_functional(VaRES(0.05), Normal(0, 1))
    assert v == pytest.approx(frozen["normal_quantile_0.05"], abs=1e-10)
    assert e == pytest.approx(frozen["normal_es_0.05"], abs=1e-10)
    assert (v, e) == pytest.approx((-1.644854, -2.062713), abs=1e-5)
    mu = SpectralMeasure((0.25, 0.75), (0.5, 0.5))
    out = eval_functional(SpectralWithQuantiles(mu), Uniform(0, 1))
    np.testing.assert_allclose(out, [0.25, 0.75, 0.25], atol=1e-12)
    assert eval_functional(Expectile(0.25), Uniform(0, 1))[0] == pytest.approx(1 / (1 + math.sqrt(3)), abs=1e-8)
    assert eval_functional(Expectile(0.25), Uniform(0, 1))[0] == pytest.approx(
        frozen["uniform_expectile_0.25"], abs=1e-12)


def test_student_t_var_es_against_oracle(frozen):
    v, e = VaRES(0.05).eval(StudentT(4, 0, 1))
    assert v == pytest.approx(frozen["student_t4_var_0.05"], abs=1e-9)
    assert e == pytest.approx(frozen["student_t4_es_0.05"], abs=1e-9)


def test_decompose():
    d = SpectralMeasure.delta(0.5)
    assert decompose_spectral_with_unit_mass(d) == (d, 0.0)
    tilde, lam = decompose_spectral_with_unit_mass(SpectralMeasure((0.5, 1.0), (0.5, 0.5)))
    assert tilde == SpectralMeasure.delta(0.5)
    assert lam == 0.5


def test_recombination(frozen):
    mu = SpectralMeasure((0.5, 1.0), (0.5, 0.5))
    tilde, lam = decompose_spectral_with_unit_mass(mu)
    u = Uniform(0, 1)
    nu = (1 - lam) * tilde.evaluate(u) + lam * u.mean
    assert nu == pytest.approx(0.375, abs=1e-14)
    assert mu.evaluate(u) == pytest.approx(frozen["uniform_spectral_half_half"], abs=1e-14)


def test_spectral_measure_validation():
    with pytest.raises(ElicitError, match="mass at 0"):
        SpectralMeasure((0.0, 0.5), (0.5, 0.5))
    with pytest.raises(ElicitError):
        SpectralMeasure((0.2, 0.2), (0.5, 0.5))
    with pytest.raises(ElicitError):
        SpectralMeasure((0.2, 0.4), (0.5, 0.6))


def test_var_needs_unique_quantile():
    d = TwoPoint(-1.0, 2.0, 0.3)
    with pytest.raises(NonUniqueQuantileError):
        value_at_risk(d, 0.3)
    assert value_at_risk(d, 0.3, strict=False) == -1.0


def test_es_at_atoms_is_quantile_average():
    # (1/a) int_0^a F^-1(u) du with F^-1 = -1 on (0, 0.3] and 2 above
    d = TwoPoint(-1.0, 2.0, 0.3)
    assert expected_shortfall(d, 0.3) == pytest.approx(-1.0)
    assert expected_shortfall(d, 0.5) == pytest.approx((0.3 * -1 + 0.2 * 2) / 0.5)


def test_mean_variance_and_moments():
    d = Normal(1.0, 1.5)
    np.testing.assert_allclose(MeanVariance().eval(d), [1.0, 2.25], atol=1e-12)
    assert MomentK(2).eval(d)[0] == pytest.approx(1 + 2.25)
    assert RatioOfExpectations("square", "one").eval(d)[0] == pytest.approx(3.25)
    with pytest.raises(MomentError):
        MeanVariance().eval(StudentT(1.8, 0, 1))


def test_stack_concatenates():
    d = Normal(0, 1)
    f = stack([Quantile(0.1), Mean()])
    assert f.k == 2
    np.testing.assert_allclose(f.eval(d), [d.quantile(0.1), 0.0], atol=1e-14)


def test_es_not_elicitable_flag():
    assert not ExpectedShortfall(0.1).elicitable
    assert VaRES(0.1).elicitable


# -- invariants ---------------------------------------------------------------

ALPHAS = np.linspace(0.02, 0.98, 20)


@pytest.mark.parametrize("d", CONTINUOUS, ids=lambda d: d.literal()[:20])
def test_es_below_var(d):
    for a in ALPHAS:
        v, e = VaRES(float(a)).eval(d)
        assert e < v


@pytest.mark.parametrize("d", CONTINUOUS, ids=lambda d: d.literal()[:20])
def test_unit_mass_spectral_is_mean(d):
    assert SpectralMeasure.delta(1.0).evaluate(d) == pytest.approx(d.mean, abs=1e-10)


@pytest.mark.parametrize("d", CONTINUOUS, ids=lambda d: d.literal()[:20])
def test_es_matches_quantile_integral(d):
    from scipy import integrate

    for a in (0.025, 0.1, 0.5):
        ref = integrate.quad(lambda u: float(d.quantile(u)), 0, a, limit=200, epsabs=1e-12, epsrel=1e-11)[0] / a
        assert VaRES(a).eval(d)[1] == pytest.approx(ref, abs=1e-7)


@pytest.mark.parametrize("d", CONTINUOUS, ids=lambda d: d.literal()[:20])
def test_median_expectile_is_mean(d):
    assert Expectile(0.5).eval(d)[0] == pytest.approx(d.mean, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(CONTINUOUS), st.floats(0.01, 0.99), st.floats(-10, 10))
def test_translation_equivariance(d, alpha, c):
    base = VaRES(alpha).eval(d)
    moved = VaRES(alpha).eval(d.shift(c))
    np.testing.assert_allclose(moved, base + c, atol=1e-8)
