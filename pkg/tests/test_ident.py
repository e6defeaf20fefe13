import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elicitlab import (
    ElicitError,
    Expectile,
    ExpectileIdent,
    Exponential,
    Lognormal,
    Mean,
    MeanVarianceIdent,
    Normal,
    QuantileIdent,
    RatioIdent,
    SpectralIdent,
    SpectralMeasure,
    StackedIdent,
    StudentT,
    Uniform,
    VarEsIdent,
    VaRES,
    Variance,
    check_orientation,
    expected_ident,
    ident_for,
    identify,
    parse_ident,
)
from elicitlab.functionals import MeanVariance, Quantile, QuantileVector, SpectralWithQuantiles, stack

DISTS = [Normal(0.0, 1.0), StudentT(4.0, 0.0, 1.0), Uniform(0.0, 1.0), Exponential(1.0), Lognormal(0.0, 0.5)]


def test_identify_examples():
    assert identify(QuantileIdent(0.1), [0.0], 1.0) == pytest.approx([-0.1])
    np.testing.assert_allclose(identify(VarEsIdent(0.5), [0.0, -1.0], -2.0), [0.5, 3.0])
    assert identify(ExpectileIdent(0.5), [2.0], 1.0) == pytest.approx([1.0])


def test_expected_ident_examples():
    d = Normal(0.0, 1.0)
    q = d.quantile(0.3)
    assert expected_ident(QuantileIdent(0.3), d, [q])[0] == pytest.approx(0.0, abs=1e-10)
    t = VaRES(0.05).eval(d)
    np.testing.assert_allclose(expected_ident(VarEsIdent(0.05), d, t), [0.0, 0.0], atol=1e-6)
    np.testing.assert_allclose(expected_ident(VarEsIdent(0.05), d, [t[0], 0.0]), [0.0, -t[1]], atol=1e-6)


def test_expected_matches_sample_average():
    rng = np.random.default_rng(5)
    d = Normal(0.2, 1.3)
    y = rng.normal(0.2, 1.3, 400_000)
    mu = SpectralMeasure((0.1, 0.4), (0.3, 0.7))
    v = SpectralIdent(mu)
    x = np.array([-1.3, -0.2, -1.5])
    mc = v.values(np.tile(x, (len(y), 1)), y).mean(axis=0)
    np.testing.assert_allclose(v.expected(d, x), mc, atol=1e-2)


@pytest.mark.parametrize("f", [Mean(), Quantile(0.2), Expectile(0.7), VaRES(0.05), MeanVariance(),
                               QuantileVector((0.1, 0.9)), SpectralWithQuantiles(SpectralMeasure((0.2,), (1.0,))),
                               stack([Quantile(0.5), Mean()])], ids=lambda f: f.literal())
@pytest.mark.parametrize("d", DISTS, ids=lambda d: d.literal())
def test_zero_at_functional(f, d):
    v = ident_for(f)
    assert v.k == f.k
    assert np.max(np.abs(v.expected(d, f.eval(d)))) < 1e-8


def test_no_ident_for_variance():
    with pytest.raises(ElicitError):
        ident_for(Variance())


# -- orientation --------------------------------------------------------------


def test_orientation_scalar():
    rep = check_orientation(QuantileIdent(0.5), Normal(0, 1), [0.0])
    assert rep.passed and rep.asserted


def test_orientation_stacked_quantiles():
    v = StackedIdent((QuantileIdent(0.1), QuantileIdent(0.9)))
    d = Normal(0, 1)
    rep = check_orientation(v, d, d.quantile(np.array([0.1, 0.9])), rays=64, steps=10)
    assert rep.passed and rep.asserted
    assert rep.n_checked == 64 * 10


def test_orientation_var_es_is_informational():
    d = Normal(0, 1)
    rep = check_orientation(VarEsIdent(0.05), d, VaRES(0.05).eval(d))
    assert not rep.asserted
    assert "worst_margin" in rep.to_dict()


@pytest.mark.parametrize("v,t", [
    (ExpectileIdent(0.8), lambda d: Expectile(0.8).eval(d)),
    (RatioIdent(), lambda d: [d.mean]),
])
@pytest.mark.parametrize("d", DISTS, ids=lambda d: d.literal())
def test_orientation_scalar_rows(v, t, d):
    rep = check_orientation(v, d, t(d))
    assert rep.passed


# -- strictness and transforms ------------------------------------------------


@pytest.mark.parametrize("v,f", [
    (VarEsIdent(0.05), VaRES(0.05)),
    (SpectralIdent(SpectralMeasure((0.1, 0.3), (0.5, 0.5))), SpectralWithQuantiles(SpectralMeasure((0.1, 0.3), (0.5, 0.5)))),
    (MeanVarianceIdent(), MeanVariance()),
])
@pytest.mark.parametrize("d", [Normal(0, 1), StudentT(4.0, 0, 1), Uniform(0, 1)], ids=lambda d: d.literal())
def test_strictness(v, f, d):
    rng = np.random.default_rng(11)
    t = f.eval(d)
    sc = f.scales(d)
    X = t + rng.uniform(-2, 2, size=(400, len(t))) * sc
    far = np.max(np.abs(X - t) / sc, axis=1) > 1e-2
    X = X[far][:100]
    norms = np.max(np.abs(v.expected(d, X)), axis=1)
    assert len(X) == 100
    assert norms.min() > 0


@settings(max_examples=50, deadline=None)
@given(st.floats(-2, 2), st.floats(0.2, 3), st.floats(-2, 2), st.floats(0.2, 3))
def test_invertible_transform_keeps_zero_set(a, b, c, e):
    # h V with det h != 0 vanishes exactly where V does
    h = np.array([[b, a], [c, e + abs(a * c) / b + 0.1]])
    assert abs(np.linalg.det(h)) > 1e-6
    d = Normal(0.0, 1.0)
    v = VarEsIdent(0.1)
    t = VaRES(0.1).eval(d)
    grid = t + np.array([[0, 0], [0.3, 0], [0, -0.4], [0.2, -0.2], [-0.5, -0.6]])
    vb = v.expected(d, grid)
    hv = vb @ h.T
    zero_v = np.max(np.abs(vb), axis=1) < 1e-9
    zero_hv = np.max(np.abs(hv), axis=1) < 1e-9
    np.testing.assert_array_equal(zero_v, zero_hv)
    assert zero_v[0] and not zero_v[1:].any()


@pytest.mark.parametrize("lit", ["mean", "mean_variance", "ratio(square, one)", "quantile(0.05)",
                                 "expectile(0.9)", "var_es(0.025)", "spectral(0.3@0.1, 0.7@0.5)",
                                 "stack(quantile(0.1), quantile(0.9))"])
def test_literal_round_trip(lit):
    v = parse_ident(lit)
    assert parse_ident(v.literal()) == v
