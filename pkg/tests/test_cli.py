import json
import subprocess
import sys

import pytest

from elicitlab.backtest import simulate_var_es_duel, write_forecasts
from elicitlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _config(tmp_path, **kw):
    cfg = {
        "distributions": ["normal(0, 1)"],
        "functionals": ["var_es(0.05)"],
        "scores": ["var_es(0.05, G1=zero, G2=exp)"],
        "checks": ["consistency", "osband"],
        "n_samples": 200,
    }
    cfg.update(kw)
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    return str(p)


@pytest.fixture(scope="module")
def duel_csv(tmp_path_factory):
    p = tmp_path_factory.mktemp("bt") / "duel.csv"
    write_forecasts(simulate_var_es_duel(n=20_000, seed=7), p)
    return str(p)


# -- score ----------------------------------------------------------------------


def test_score_pinball(capsys):
    code, out, _ = run(capsys, "score", "pinball(0.5,G=identity)", "--x", "1", "--y", "0")
    assert code == 0
    assert float(out) == 0.5


def test_score_var_es(capsys):
    code, out, _ = run(capsys, "score", "var_es(0.05)", "--x", "0,0", "--y", "1")
    assert code == 0
    assert float(out) == -1.0


def test_score_negative_vector_needs_equals_form(capsys):
    code, out, _ = run(capsys, "score", "var_es(0.05)", "--x=-1.6,-2.1", "--y", "-2")
    assert code == 0
    float(out)


def test_score_outside_domain(capsys):
    code, _, err = run(capsys, "score", "var_es(0.05)", "--x", "0,1", "--y", "1")
    assert code == 2
    assert "action domain" in err


def test_score_bad_literal(capsys):
    code, _, err = run(capsys, "score", "pinball(0.5, G=negsquare)", "--x", "1", "--y", "0")
    assert code == 2
    assert "increasing G" in err


def test_score_json_out(capsys, tmp_path):
    out = tmp_path / "s.json"
    code, text, _ = run(capsys, "--out", str(out), "score", "pinball(0.5)", "--x", "1", "--y", "0")
    assert code == 0
    assert float(text) == 0.5
    payload = json.loads(out.read_text())
    assert payload["value"] == 0.5
    assert payload["score"] == "pinball(0.5, G=identity)"


# -- verify ---------------------------------------------------------------------


def test_verify_bundled_config(capsys):
    code, out, _ = run(capsys, "verify", "varesbasic.json")
    assert code == 0
    assert "2/2 cells passed" in out


def test_verify_concave_shape_fails(capsys, tmp_path):
    cfg = _config(tmp_path, scores=["var_es(0.05, G1=zero, G2=negsquare, unchecked=1)"])
    code, _, err = run(capsys, "verify", cfg)
    assert code == 1
    assert "consistency" in err


def test_verify_empty_distribution_list(capsys, tmp_path):
    code, _, err = run(capsys, "verify", _config(tmp_path, distributions=[]))
    assert code == 2
    assert "distributions" in err


def test_verify_missing_config(capsys, tmp_path):
    code, _, err = run(capsys, "verify", str(tmp_path / "nope.json"))
    assert code == 2
    assert "nope.json" in err


def test_verify_seed_override_and_json(capsys, tmp_path):
    out = tmp_path / "v.json"
    code, _, _ = run(capsys, "--seed", "5", "--out", str(out), "verify", _config(tmp_path))
    assert code == 0
    reports = json.loads(out.read_text())
    assert len(reports) == 1
    names = [c["name"] for c in reports[0]["checks"]]
    assert "consistency" in names and "osband" in names


def test_global_flags_after_subcommand(capsys, tmp_path):
    code, _, _ = run(capsys, "verify", _config(tmp_path), "--seed", "3", "--tol-scale", "2")
    assert code == 0


def test_tol_scale_must_be_positive(capsys):
    code, _, err = run(capsys, "--tol-scale", "0", "score", "pinball(0.5)", "--x", "1", "--y", "0")
    assert code == 2
    assert "tol-scale" in err


# -- backtest -------------------------------------------------------------------


def test_backtest_ranks_two_methods(capsys, duel_csv):
    code, out, _ = run(capsys, "backtest", duel_csv, "--score", "var_es(0.05, G1=zero, G2=exp)")
    assert code == 0
    lines = [ln.split() for ln in out.splitlines()]
    ranks = {ln[0]: int(ln[1]) for ln in lines if ln and ln[0] in ("truthful", "biased")}
    assert ranks == {"truthful": 1, "biased": 2}


def test_backtest_sweep(capsys, duel_csv, tmp_path):
    out = tmp_path / "sweep.json"
    code, text, _ = run(capsys, "--out", str(out), "backtest", duel_csv,
                        "--sweep", "var_es(0.05, G1=zero, G2={})", "--grid", "exp;softplus")
    assert code == 0
    assert text.count("ranks [") == 2
    assert "stability: 1.000" in text
    payload = json.loads(out.read_text())
    assert [p["ranks"] for p in payload["points"]] == [[1, 2], [1, 2]]
    assert out.with_suffix(".txt").read_text() == text


def test_backtest_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "backtest", str(tmp_path / "none.csv"), "--score", "pinball(0.5)")
    assert code == 2
    assert "cannot read" in err


def test_backtest_needs_a_score(capsys, duel_csv):
    code, _, err = run(capsys, "backtest", duel_csv)
    assert code == 2
    assert "--score" in err


def test_backtest_reports_flagged_rows(capsys, tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("period,y,A:x1,A:x2\n0,1,0,-1\n1,0,0,1\n")
    code, out, _ = run(capsys, "backtest", str(p), "--score", "var_es(0.05)")
    assert code == 0
    assert "flagged rows outside the action domain: 1" in out


# -- osband and levelset --------------------------------------------------------


def test_osband_pinball(capsys, tmp_path):
    out = tmp_path / "o.json"
    code, text, _ = run(capsys, "--out", str(out), "osband", "--score", "pinball(0.3)", "--x", "0.2")
    assert code == 0
    assert "h = [[1.]]" in text
    payload = json.loads(out.read_text())
    assert payload["passed"]
    assert payload["h"][0][0] == pytest.approx(1.0, abs=1e-6)


def test_osband_var_es_with_panel(capsys):
    panel = "normal(0,1); normal(0.5,1.3); student_t(5,0,1); normal(-0.4,0.8)"
    code, text, _ = run(capsys, "osband", "--score", "var_es(0.05)", "--x=-1.6,-2.1", "--panel", panel)
    assert code == 0
    assert "hessian asymmetry" in text


def test_levelset_variance(capsys):
    code, out, _ = run(capsys, "levelset", "--functional", "variance", "--f0", "normal(0,1)",
                       "--f1", "normal(1,1)")
    assert code == 0
    assert "max deviation along the path 0.25" in out
    assert "violation: not elicitable" in out


def test_levelset_mean_has_no_violation(capsys):
    code, out, _ = run(capsys, "levelset", "--functional", "mean", "--f0", "normal(0,1)",
                       "--f1", "uniform(-1,1)")
    assert code == 0
    assert "no violation" in out


def test_levelset_es_search(capsys, tmp_path):
    out = tmp_path / "l.json"
    code, _, _ = run(capsys, "--out", str(out), "levelset", "--search-es", "0.5")
    assert code == 0
    assert json.loads(out.read_text())["violation"]


def test_levelset_needs_arguments(capsys):
    code, _, err = run(capsys, "levelset", "--functional", "mean")
    assert code == 2
    assert "--f0" in err


# -- parser ---------------------------------------------------------------------


def test_unknown_subcommand_is_usage_error(capsys):
    assert main(["frobnicate"]) == 2


def test_version(capsys):
    assert main(["--version"]) == 0
    assert "elicitlab" in capsys.readouterr().out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "elicitlab.cli", "score", "pinball(0.5)", "--x", "1", "--y", "0"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0
    assert float(r.stdout) == 0.5
