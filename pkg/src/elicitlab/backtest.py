"""Realized-score comparison of competing point forecasters.

Input is a CSV with header ``period,y,<method>:x1[,<method>:x2,...]``; each
method contributes ``k`` consecutive-or-interleaved columns named
``<method>:x1 .. <method>:xk``.  Scores are negatively oriented, so lower
mean realized score ranks first.  Standard errors of paired score
differences are naive iid estimates (no autocorrelation correction).
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ElicitError, ParseError
from .scores import ActionDomain, ScoreSpec

__all__ = [
    "ForecastTable",
    "ComparisonReport",
    "SweepReport",
    "load_forecasts",
    "write_forecasts",
    "evaluate",
    "score_sweep",
    "simulate_var_es_duel",
    "simulate_quantile_duel",
]

_COL = re.compile(r"^(?P<method>[^:]+):x(?P<idx>[1-9][0-9]*)$")


@dataclass
class ForecastTable:
    periods: list[str]
    y: np.ndarray
    forecasts: dict[str, np.ndarray]
    invalid: np.ndarray = None  # rows flagged by a domain check
    source: str = ""

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        if self.invalid is None:
            self.invalid = np.zeros(len(self.y), dtype=bool)

    @property
    def methods(self) -> list[str]:
        return list(self.forecasts)

    @property
    def k(self) -> int:
        return next(iter(self.forecasts.values())).shape[1]

    @property
    def n_rows(self) -> int:
        return len(self.y)

    @property
    def n_invalid(self) -> int:
        return int(self.invalid.sum())

    def flag_domain(self, domain: ActionDomain) -> np.ndarray:
        """Rows where any method leaves ``domain``; those rows are skipped for every method."""
        bad = np.zeros(self.n_rows, dtype=bool)
        for X in self.forecasts.values():
            bad |= ~domain.contains(X)
        return bad


def _parse_header(header: list[str]) -> tuple[dict[str, list[int]], int]:
    if len(header) < 3 or header[0].strip() != "period" or header[1].strip() != "y":
        raise ParseError("header must start with 'period,y,' followed by '<method>:x<i>' columns")
    cols: dict[str, dict[int, int]] = {}
    for j, name in enumerate(header[2:], start=2):
        m = _COL.match(name.strip())
        if not m:
            raise ParseError(f"malformed forecast column {name!r}; expected '<method>:x<i>'")
        slot = cols.setdefault(m["method"], {})
        i = int(m["idx"])
        if i in slot:
            raise ParseError(f"duplicate column {name!r}")
        slot[i] = j
    ks = {len(v) for v in cols.values()}
    if len(ks) != 1:
        raise ParseError("every method must report the same number of components")
    k = ks.pop()
    out = {}
    for meth, slot in cols.items():
        if sorted(slot) != list(range(1, k + 1)):
            raise ParseError(f"method {meth!r} must have columns x1..x{k}")
        out[meth] = [slot[i] for i in range(1, k + 1)]
    return out, k


def _read(text: str, source: str, domain: ActionDomain | None) -> ForecastTable:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise ParseError(f"{source}: no data rows")
    cols, k = _parse_header(rows[0])
    body = rows[1:]
    if not body:
        raise ParseError(f"{source}: no data rows")
    n = len(body)
    periods, y = [], np.empty(n)
    fc = {m: np.empty((n, k)) for m in cols}
    for r, row in enumerate(body):
        line = r + 2
        if len(row) != len(rows[0]):
            raise ParseError(f"{source}:{line}: expected {len(rows[0])} cells, got {len(row)}")
        periods.append(row[0].strip())
        try:
            y[r] = float(row[1])
            for m, idx in cols.items():
                fc[m][r] = [float(row[j]) for j in idx]
        except ValueError:
            raise ParseError(f"{source}:{line}: non-numeric cell") from None
        if not math.isfinite(y[r]):
            raise ParseError(f"{source}:{line}: realized value must be finite")
    table = ForecastTable(periods, y, fc, source=source)
    if domain is not None:
        if domain.k != k:
            raise ElicitError(f"forecasts have {k} components but the domain expects {domain.k}")
        table.invalid = table.flag_domain(domain)
    return table


def load_forecasts(path, domain: ActionDomain | None = None) -> ForecastTable:
    """Parse a forecast CSV; rows outside ``domain`` are flagged (and later skipped)."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise ElicitError(f"cannot read {path}: {e.strerror}") from e
    return _read(text, str(path), domain)


def write_forecasts(table: ForecastTable, path) -> None:
    k = table.k
    header = ["period", "y"] + [f"{m}:x{i + 1}" for m in table.methods for i in range(k)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in range(table.n_rows):
            cells = [table.periods[r], repr(float(table.y[r]))]
            for m in table.methods:
                cells += [repr(float(v)) for v in table.forecasts[m][r]]
            w.writerow(cells)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


@dataclass
class ComparisonReport:
    score: str
    methods: list[str]
    mean_scores: list[float]
    ranks: list[int]
    baseline: str
    mean_diff: list[float]
    se_diff: list[float]
    n_rows: int
    n_skipped: int

    def to_dict(self):
        per = {
            m: {"mean_score": self.mean_scores[i], "rank": self.ranks[i],
                "mean_diff_vs_baseline": self.mean_diff[i], "se_diff_naive": self.se_diff[i]}
            for i, m in enumerate(self.methods)
        }
        return {"score": self.score, "baseline": self.baseline, "n_rows": self.n_rows,
                "n_skipped": self.n_skipped, "methods": self.methods, "per_method": per}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        head = ["method", "rank", "mean_score", f"diff_vs_{self.baseline}", "se_naive"]
        body = [[m, str(self.ranks[i]), f"{self.mean_scores[i]:.10g}", f"{self.mean_diff[i]:.6g}",
                 f"{self.se_diff[i]:.3g}"] for i, m in enumerate(self.methods)]
        widths = [max(len(r[c]) for r in [head, *body]) for c in range(len(head))]
        lines = [f"score: {self.score}", f"rows used: {self.n_rows}  skipped: {self.n_skipped}"]
        for r in [head, *body]:
            lines.append("  ".join(v.ljust(w) if c == 0 else v.rjust(w) for c, (v, w) in enumerate(zip(r, widths))))
        return "\n".join(lines) + "\n"


def _ranks(means: Sequence[float]) -> list[int]:
    # stable: ties keep input order
    order = sorted(range(len(means)), key=lambda i: (means[i], i))
    ranks = [0] * len(means)
    for r, i in enumerate(order, start=1):
        ranks[i] = r
    return ranks


def evaluate(table: ForecastTable, score: ScoreSpec, baseline: str | None = None) -> ComparisonReport:
    """Mean realized scores, paired differences against ``baseline`` and ranks."""
    if table.k != score.k:
        raise ElicitError(f"forecasts have {table.k} components, score {score.literal()} expects {score.k}")
    keep = ~(table.invalid | table.flag_domain(score.domain))
    n = int(keep.sum())
    if n == 0:
        raise ElicitError("no valid rows left after domain checks")
    baseline = baseline or table.methods[0]
    if baseline not in table.forecasts:
        raise ElicitError(f"unknown baseline method {baseline!r}")
    y = table.y[keep]
    S = {m: np.asarray(score.values(np.ascontiguousarray(X[keep]), y), dtype=float) for m, X in table.forecasts.items()}
    means = [float(S[m].mean()) for m in table.methods]
    diffs, ses = [], []
    for m in table.methods:
        dlt = S[m] - S[baseline]
        diffs.append(float(dlt.mean()))
        ses.append(float(dlt.std(ddof=1) / math.sqrt(n)) if n > 1 else float("nan"))
    return ComparisonReport(score.literal(), table.methods, means, _ranks(means), baseline, diffs, ses, n,
                            table.n_rows - n)


@dataclass
class SweepReport:
    template: str
    points: list[str]
    reports: list[ComparisonReport]
    skipped: list[dict] = field(default_factory=list)

    @property
    def rank_vectors(self) -> list[list[int]]:
        return [r.ranks for r in self.reports]

    @property
    def modal_ranking(self) -> list[int] | None:
        if not self.reports:
            return None
        return list(Counter(tuple(r) for r in self.rank_vectors).most_common(1)[0][0])

    @property
    def stability(self) -> float:
        """Fraction of grid points whose ranking equals the modal ranking."""
        if not self.reports:
            return float("nan")
        modal = self.modal_ranking
        return sum(r == modal for r in self.rank_vectors) / len(self.reports)

    def to_dict(self):
        return {
            "template": self.template,
            "points": [{"shape": p, "score": r.score, "ranks": r.ranks, "mean_scores": r.mean_scores}
                       for p, r in zip(self.points, self.reports)],
            "skipped": self.skipped,
            "methods": self.reports[0].methods if self.reports else [],
            "modal_ranking": self.modal_ranking,
            "stability": self.stability if self.reports else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"sweep: {self.template}"]
        w = max([len(p) for p in self.points] + [5])
        for p, r in zip(self.points, self.reports):
            lines.append(f"  {p.ljust(w)}  ranks {r.ranks}")
        for s in self.skipped:
            lines.append(f"  {s['shape'].ljust(w)}  skipped: {s['reason']}")
        if self.reports:
            lines.append(f"stability: {self.stability:.3f} (modal ranking {self.modal_ranking})")
        return "\n".join(lines) + "\n"


def score_sweep(table: ForecastTable, template: str, grid: Sequence[str], baseline: str | None = None) -> SweepReport:
    """Evaluate ``template.format(shape)`` for every shape literal in ``grid``.

    Grid points whose instantiation fails the family's shape checks are
    skipped and listed in ``skipped``.
    """
    from .parsing import parse_score

    if "{}" not in template:
        raise ElicitError("sweep template needs a '{}' placeholder for the shape")
    points, reports, skipped = [], [], []
    for g in grid:
        try:
            spec = parse_score(template.format(g))
        except ElicitError as e:
            skipped.append({"shape": g, "reason": str(e)})
            continue
        points.append(g)
        reports.append(evaluate(table, spec, baseline))
    return SweepReport(template, points, reports, skipped)


# ---------------------------------------------------------------------------
# simulation fixtures
# ---------------------------------------------------------------------------


def simulate_var_es_duel(n: int = 100_000, seed: int = 0, alpha: float = 0.05, mu: float = 0.0,
                         sigma: float = 1.0, es_bias: float = 0.5) -> ForecastTable:
    """Normal data; ``truthful`` reports the true (VaR, ES), ``biased`` shifts ES by ``es_bias * sigma``.

    The bias is applied downward (more conservative ES) so the biased forecast
    stays inside ``{x1 >= x2}``.
    """
    from .dist import Normal
    from .functionals import VaRES

    rng = np.random.default_rng(seed)
    y = mu + sigma * rng.standard_normal(n)
    t = VaRES(alpha).eval(Normal(mu, sigma))
    truthful = np.tile(t, (n, 1))
    biased = np.tile(t - np.array([0.0, es_bias * sigma]), (n, 1))
    return ForecastTable([str(i) for i in range(n)], y, {"truthful": truthful, "biased": biased}, source="simulated")


def simulate_quantile_duel(n: int = 100_000, seed: int = 0, alpha: float = 0.1, bias: float = 0.25) -> ForecastTable:
    """Normal(0,1) data; ``truthful`` reports the alpha-quantile, ``high`` and ``low`` are shifted by ``bias``."""
    from scipy.special import ndtri

    rng = np.random.default_rng(seed)
    y = rng.standard_normal(n)
    q = float(ndtri(alpha))
    fc = {name: np.full((n, 1), q + s) for name, s in (("truthful", 0.0), ("high", bias), ("low", -bias))}
    return ForecastTable([str(i) for i in range(n)], y, fc, source="simulated")
