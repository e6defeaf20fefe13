"""Library values against the frozen high-precision references in ``oracles/frozen.json``."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from elicitlab import ExpectedShortfall, Normal, VarEsScore, Variance, eval_functional, expected_score

ORACLES = Path(__file__).with_name("oracles")


def test_variance_of_shifted_normal(frozen):
    assert eval_functional(Variance(), Normal(1, 1.5))[0] == pytest.approx(frozen["normal_1_1.5_variance"], abs=1e-12)


def test_normal_es_at_2_5_percent(frozen):
    got = eval_functional(ExpectedShortfall(0.025), Normal(0, 1))[0]
    assert got == pytest.approx(frozen["normal_es_0.025"], abs=1e-10)


def test_biased_es_report_costs_expected_score(frozen):
    v, e = frozen["normal_quantile_0.05"], frozen["normal_es_0.05"]
    s = VarEsScore(0.05)
    biased = expected_score(s, Normal(0, 1), [v, e - 0.5])
    truth = expected_score(s, Normal(0, 1), [v, e])
    assert biased == pytest.approx(frozen["normal_exp_score_es_bias"], abs=1e-10)
    assert biased - truth == pytest.approx(
        frozen["normal_exp_score_es_bias"] - frozen["normal_exp_score_at_truth"], abs=1e-10)
    assert biased > truth


@pytest.mark.slow
def test_frozen_values_regenerate(tmp_path, frozen):
    pytest.importorskip("mpmath")
    out = tmp_path / "frozen.json"
    subprocess.run([sys.executable, str(ORACLES / "compute.py"), str(out)], check=True, capture_output=True,
                   timeout=600)
    fresh = json.loads(out.read_text())
    assert sorted(fresh) == sorted(frozen)
    for k, v in frozen.items():
        assert fresh[k] == pytest.approx(v, rel=1e-13, abs=1e-15), k
