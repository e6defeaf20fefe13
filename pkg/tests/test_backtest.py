import numpy as np
import pytest

from elicitlab import ElicitError, ParseError
from elicitlab.backtest import (
    ForecastTable,
    evaluate,
    load_forecasts,
    score_sweep,
    simulate_quantile_duel,
    simulate_var_es_duel,
    write_forecasts,
)
from elicitlab.parsing import parse_score

VAR_ES = parse_score("var_es(0.05, G1=zero, G2=exp)")

CSV = """period,y,A:x1,A:x2,B:x1,B:x2
0,-0.31,-1.64,-2.06,-1.64,-2.50
1,0.52,-1.64,-2.06,-1.64,-2.50
2,-2.40,-1.64,-2.06,-1.64,-2.50
"""


def _write(tmp_path, text, name="f.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


# -- loading ------------------------------------------------------------------


def test_load_small_file(tmp_path):
    t = load_forecasts(_write(tmp_path, CSV))
    assert t.n_rows == 3
    assert t.methods == ["A", "B"]
    assert t.k == 2
    assert t.periods == ["0", "1", "2"]
    np.testing.assert_allclose(t.forecasts["B"][:, 1], -2.50)


def test_domain_rows_are_flagged(tmp_path):
    text = CSV + "3,0.1,-1.64,-2.06,-1.0,-0.5\n"
    t = load_forecasts(_write(tmp_path, text), VAR_ES.domain)
    assert t.n_invalid == 1
    assert t.invalid.tolist() == [False, False, False, True]
    rep = evaluate(t, VAR_ES)
    assert rep.n_rows == 3
    assert rep.n_skipped == 1


@pytest.mark.parametrize("text, msg", [
    ("", "no data rows"),
    ("period,y,A:x1\n", "no data rows"),
    ("when,y,A:x1\n0,1,2\n", "header"),
    ("period,y,A\n0,1,2\n", "malformed"),
    ("period,y,A:x1,A:x1\n0,1,2,3\n", "duplicate"),
    ("period,y,A:x1,B:x1,B:x2\n0,1,2,3,4\n", "same number"),
    ("period,y,A:x1,A:x3\n0,1,2,3\n", "x1..x2"),
    ("period,y,A:x1\n0,1\n", "expected 3 cells"),
    ("period,y,A:x1\n0,abc,1\n", "non-numeric"),
    ("period,y,A:x1\n0,nan,1\n", "finite"),
])
def test_load_errors(tmp_path, text, msg):
    with pytest.raises(ParseError, match=msg):
        load_forecasts(_write(tmp_path, text))


def test_missing_file_is_reported(tmp_path):
    with pytest.raises(ElicitError, match="cannot read"):
        load_forecasts(tmp_path / "absent.csv")


def test_domain_dimension_mismatch(tmp_path):
    p = _write(tmp_path, "period,y,A:x1\n0,1,2\n")
    with pytest.raises(ElicitError, match="components"):
        load_forecasts(p, VAR_ES.domain)


def test_write_load_round_trip(tmp_path):
    t = simulate_var_es_duel(n=50, seed=3)
    p = tmp_path / "rt.csv"
    write_forecasts(t, p)
    back = load_forecasts(p)
    assert back.methods == t.methods
    assert back.periods == t.periods
    np.testing.assert_array_equal(back.y, t.y)
    for m in t.methods:
        np.testing.assert_array_equal(back.forecasts[m], t.forecasts[m])


# -- evaluation ---------------------------------------------------------------


def test_single_method_has_rank_one():
    t = ForecastTable(["0", "1"], [0.0, 1.0], {"only": np.array([[0.5], [0.5]])})
    rep = evaluate(t, parse_score("pinball(0.5, G=identity)"))
    assert rep.ranks == [1]
    assert rep.mean_diff == [0.0]


def test_ties_keep_input_order():
    X = np.array([[0.2], [0.2], [0.2]])
    t = ForecastTable(["0", "1", "2"], [0.0, 1.0, -1.0], {"b": X, "a": X.copy()})
    rep = evaluate(t, parse_score("pinball(0.5, G=identity)"))
    assert rep.mean_scores[0] == rep.mean_scores[1]
    assert rep.ranks == [1, 2]


def test_pinball_values_by_hand():
    t = ForecastTable(["0", "1"], [0.0, 2.0], {"m": np.array([[1.0], [1.0]])})
    rep = evaluate(t, parse_score("pinball(0.5, G=identity)"))
    # (1{y<=x} - a) x - 1{y<=x} y: 0.5 at y=0 and -0.5 at y=2
    assert rep.mean_scores == [pytest.approx(0.0)]


def test_truthful_beats_biased():
    t = simulate_var_es_duel(n=100_000, seed=1)
    rep = evaluate(t, VAR_ES, baseline="truthful")
    assert rep.ranks == [1, 2]
    i = rep.methods.index("biased")
    assert rep.mean_diff[i] > 3 * rep.se_diff[i]


def test_quantile_duel_ranks_truth_first():
    t = simulate_quantile_duel(n=50_000, seed=2)
    rep = evaluate(t, parse_score("pinball(0.1, G=identity)"))
    assert rep.ranks[rep.methods.index("truthful")] == 1


def test_evaluate_errors():
    t = simulate_quantile_duel(n=10, seed=0)
    with pytest.raises(ElicitError, match="components"):
        evaluate(t, VAR_ES)
    with pytest.raises(ElicitError, match="baseline"):
        evaluate(t, parse_score("pinball(0.1)"), baseline="nobody")


def test_all_rows_invalid_is_an_error():
    t = ForecastTable(["0"], [0.0], {"m": np.array([[0.0, 1.0]])})
    with pytest.raises(ElicitError, match="no valid rows"):
        evaluate(t, VAR_ES)


def test_report_serialization():
    t = simulate_var_es_duel(n=200, seed=0)
    rep = evaluate(t, VAR_ES)
    d = rep.to_dict()
    assert d["per_method"]["truthful"]["rank"] in (1, 2)
    assert "score: var_es(0.05, G1=zero, G2=exp)" in rep.to_text()


# -- sweeps -------------------------------------------------------------------


def test_sweep_over_consistent_shapes_keeps_ranking():
    t = simulate_var_es_duel(n=100_000, seed=4)
    rep = score_sweep(t, "var_es(0.05, G1=zero, G2={})", ["exp", "softplus"])
    assert rep.rank_vectors == [[1, 2], [1, 2]]
    assert rep.stability == 1.0
    assert "stability: 1.000" in rep.to_text()


def test_single_point_sweep_equals_evaluate():
    t = simulate_quantile_duel(n=2000, seed=5)
    sw = score_sweep(t, "pinball(0.1, G={})", ["atan"])
    direct = evaluate(t, parse_score("pinball(0.1, G=atan)"))
    assert sw.reports[0].mean_scores == direct.mean_scores
    assert sw.modal_ranking == direct.ranks


def test_pinball_sweep_is_stable():
    t = simulate_quantile_duel(n=100_000, seed=6)
    grid = ["identity", "atan", "softplus", "exp_clip(3)", "exp"]
    rep = score_sweep(t, "pinball(0.1, G={})", grid)
    assert len(rep.reports) == 5
    assert rep.stability == 1.0
    assert rep.modal_ranking[rep.reports[0].methods.index("truthful")] == 1


def test_sweep_skips_rejected_shapes():
    t = simulate_quantile_duel(n=100, seed=0)
    rep = score_sweep(t, "pinball(0.1, G={})", ["identity", "negsquare"])
    assert rep.points == ["identity"]
    assert rep.skipped[0]["shape"] == "negsquare"
    assert "skipped" in rep.to_text()


def test_sweep_template_needs_placeholder():
    t = simulate_quantile_duel(n=10, seed=0)
    with pytest.raises(ElicitError, match="placeholder"):
        score_sweep(t, "pinball(0.1)", ["identity"])
