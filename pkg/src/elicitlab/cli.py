"""Command-line front end: ``elicitlab {verify,score,backtest,osband,levelset}``.

Exit codes: 0 success / all asserted checks pass, 1 a check failed,
2 usage, parse or configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .backtest import evaluate, load_forecasts, score_sweep
from .errors import ElicitError
from .lab import (
    CHECK_NAMES,
    DEFAULT_TOL,
    cartesian_cells,
    default_panel,
    es_levelset_search,
    levelset_probe,
    osband_recover_h,
    osband_structure,
    run_matrix,
    second_order_symmetry_check,
)
from .parsing import parse_distribution, parse_functional, parse_ident, parse_score, parse_vector
from .scores import QuantilePinball, SpectralScore, SumScore

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

BUNDLED_CONFIGS = ("varesbasic.json",)

__all__ = ["main", "build_parser", "load_config", "build_cells"]


class UsageError(Exception):
    """Configuration problem detected by the CLI itself."""


def _err(msg: str) -> None:
    print(f"elicitlab: error: {msg}", file=sys.stderr)


def _warn(msg: str) -> None:
    print(f"elicitlab: warning: {msg}", file=sys.stderr)


def _emit(args, payload: str, text: str | None = None) -> None:
    """Write ``payload`` to ``--out`` when given, and ``text`` (or the payload) to stdout."""
    if args.out:
        Path(args.out).write_text(payload if payload.endswith("\n") else payload + "\n", encoding="utf-8")
    if text is not None or not args.out:
        sys.stdout.write(text if text is not None else payload + "\n")


def _tolerances(args):
    return DEFAULT_TOL.scaled(args.tol_scale)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def load_config(path: str) -> dict:
    p = Path(path)
    if not p.exists() and p.name in BUNDLED_CONFIGS and str(p) == p.name:
        text = resources.files("elicitlab").joinpath("data", p.name).read_text(encoding="utf-8")
    else:
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as e:
            raise UsageError(f"cannot read config {path}: {e.strerror}") from e
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"config {path} is not valid JSON: {e}") from e
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    return cfg


def _unbounded_quantile_shapes(score):
    if isinstance(score, QuantilePinball):
        return [score.G] if not score.G.bounded else []
    if isinstance(score, SpectralScore):
        return [g for g in score.gs if not g.bounded]
    if isinstance(score, SumScore):
        return [g for _, s in score.parts for g in _unbounded_quantile_shapes(s)]
    return []


def build_cells(cfg: dict):
    for key in ("distributions", "functionals", "scores"):
        if not isinstance(cfg.get(key), list) or not cfg[key]:
            raise UsageError(f"config needs a nonempty list '{key}'")
    dists = [parse_distribution(s) for s in cfg["distributions"]]
    funcs = [parse_functional(s) for s in cfg["functionals"]]
    scores = [parse_score(s) for s in cfg["scores"]]
    checks = cfg.get("checks", list(CHECK_NAMES))
    unknown = set(checks) - set(CHECK_NAMES)
    if unknown:
        raise UsageError(f"unknown checks: {', '.join(sorted(unknown))}")
    for s in scores:
        if not any(f.k == s.k for f in funcs):
            raise UsageError(f"score {s.literal()} has dimension {s.k}, matching no listed functional")
        for d in dists:
            loose = _unbounded_quantile_shapes(s)
            if loose and math.isfinite(d.max_moment):
                _warn(f"{s.literal()} uses unbounded G ({', '.join(g.literal() for g in loose)}) with heavy-tailed "
                      f"{d.literal()}; a bounded G such as atan keeps the score integrable")
    return cartesian_cells(scores, funcs, dists), checks


def _render_reports(reports) -> str:
    lines = []
    for i, r in enumerate(reports):
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"[{status}] cell {i}: {r.score} | {r.functional} | {r.distribution}")
        if r.error:
            lines.append(f"    error: {r.error}")
        for c in r.checks:
            tag = "ok " if c.passed else ("BAD" if c.asserted else "obs")
            note = "" if c.asserted else " (observed, not asserted)"
            lines.append(f"    {tag} {c.name:<12} margin={c.margin:.3g}{note}")
    n_fail = sum(not r.passed for r in reports)
    lines.append(f"{len(reports) - n_fail}/{len(reports)} cells passed")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    cells, checks = build_cells(cfg)
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    n_samples = int(cfg.get("n_samples", 1000))
    reports = run_matrix(cells, checks, seed=seed, n_samples=n_samples, tol=_tolerances(args),
                         workers=int(cfg.get("workers", 1)))
    payload = json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)
    _emit(args, payload, _render_reports(reports))
    for i, r in enumerate(reports):
        if not r.passed:
            what = ", ".join(r.failing()) or r.error
            print(f"cell {i} failed: {what}", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# ---------------------------------------------------------------------------
# score
# ---------------------------------------------------------------------------


def cmd_score(args) -> int:
    spec = parse_score(args.score)
    x = np.array(parse_vector(args.x))
    spec.check_domain(x)
    val = float(np.asarray(spec.values(x, float(args.y))))
    _emit(args, json.dumps({"score": spec.literal(), "x": x.tolist(), "y": float(args.y), "value": val}),
          f"{val:.12g}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# backtest
# ---------------------------------------------------------------------------


def cmd_backtest(args) -> int:
    if args.sweep:
        grid = [g.strip() for g in args.grid.split(";") if g.strip()] if args.grid else []
        if not grid:
            raise UsageError("--sweep needs --grid with ';'-separated shape literals")
        probe = parse_score(args.sweep.format(grid[0])) if args.score is None else parse_score(args.score)
        table = load_forecasts(args.csv, probe.domain)
        rep = score_sweep(table, args.sweep, grid, args.baseline)
        if not rep.reports:
            _err("every grid point was rejected by the shape checks")
            return EXIT_USAGE
    else:
        if not args.score:
            raise UsageError("backtest needs --score or --sweep")
        spec = parse_score(args.score)
        table = load_forecasts(args.csv, spec.domain)
        rep = evaluate(table, spec, args.baseline)
    text = rep.to_text()
    if table.n_invalid:
        text += f"flagged rows outside the action domain: {table.n_invalid}\n"
    if args.out:
        out = Path(args.out)
        out.write_text(rep.to_json() + "\n", encoding="utf-8")
        out.with_suffix(".txt").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# osband
# ---------------------------------------------------------------------------


def cmd_osband(args) -> int:
    spec = parse_score(args.score)
    ident = parse_ident(args.ident) if args.ident else spec.ident()
    x = np.array(parse_vector(args.x))
    spec.check_domain(x)
    if args.panel:
        panel = [parse_distribution(s.strip()) for s in args.panel.split(";") if s.strip()]
    else:
        panel = default_panel(float(np.mean(x)), 1.0, max(spec.k + 2, 4))
    tol = _tolerances(args)
    res = osband_recover_h(spec, ident, x, panel, fd_step=args.fd_step)
    struct = osband_structure(spec, res.h, x)
    sym = second_order_symmetry_check(spec, ident, x, panel, tol=tol.symmetry)
    ok = res.residual <= tol.osband_residual and all(v <= tol.osband_structure for v in struct.values())
    payload = {
        "score": spec.literal(), "ident": ident.literal(), "x": x.tolist(),
        "panel": [d.literal() for d in panel], "h": res.h.tolist(), "residual": res.residual,
        "min_singular": res.min_singular, "structure": {k: float(v) for k, v in struct.items()},
        "symmetry": sym.to_dict(), "passed": bool(ok and sym.passed),
    }
    lines = [f"h = {np.array2string(res.h, precision=8)}", f"relative residual = {res.residual:.3g}"]
    lines += [f"{k}: {v:.3g}" for k, v in struct.items()]
    lines.append(f"hessian asymmetry = {sym.margin:.3g} ({'pass' if sym.passed else 'FAIL'})")
    _emit(args, json.dumps(payload, indent=2, sort_keys=True), "\n".join(lines) + "\n")
    return EXIT_OK if payload["passed"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# levelset
# ---------------------------------------------------------------------------


def cmd_levelset(args) -> int:
    lambdas = tuple(parse_vector(args.lambdas))
    if args.search_es is not None:
        rep = es_levelset_search(args.search_es)
    else:
        if not (args.functional and args.f0 and args.f1):
            raise UsageError("levelset needs --functional, --f0 and --f1, or --search-es ALPHA")
        fn = parse_functional(args.functional)
        rep = levelset_probe(fn, parse_distribution(args.f0), parse_distribution(args.f1), lambdas)
    verdict = "violation: not elicitable on any class containing this path" if rep.violation else "no violation"
    text = (f"{rep.functional}: F0={rep.f0} F1={rep.f1}\n"
            f"common value {rep.common}; max deviation along the path {rep.max_deviation:.12g}\n{verdict}\n")
    _emit(args, json.dumps(rep.to_dict(), indent=2, sort_keys=True), text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _globals(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=d, help="random seed for sampled checks")
    p.add_argument("--out", default=d, help="write the JSON report to this path")
    p.add_argument("--tol-scale", type=float, default=argparse.SUPPRESS if suppress else 1.0,
                   help="multiply every check tolerance by this factor (default 1)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="elicitlab", description="Consistent scoring functions: lab and backtests.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification matrix from a JSON config")
    v.add_argument("config", help=f"config path, or a bundled name ({', '.join(BUNDLED_CONFIGS)})")
    _globals(v, True)

    s = sub.add_parser("score", help="evaluate one realized score")
    s.add_argument("score", help='score literal, e.g. "pinball(0.5, G=identity)"')
    s.add_argument("--x", required=True, help="forecast vector, comma separated")
    s.add_argument("--y", required=True, type=float, help="realized observation")
    _globals(s, True)

    b = sub.add_parser("backtest", help="rank forecasters in a CSV by mean realized score")
    b.add_argument("csv")
    b.add_argument("--score", help="score literal")
    b.add_argument("--sweep", help="score template with a '{}' placeholder for a shape")
    b.add_argument("--grid", help="';'-separated shape literals for --sweep")
    b.add_argument("--baseline", help="method used for paired differences (default: first)")
    _globals(b, True)

    o = sub.add_parser("osband", help="recover h in grad Sbar = h Vbar")
    o.add_argument("--score", required=True)
    o.add_argument("--x", required=True)
    o.add_argument("--ident", help="identification literal (default: the score's own)")
    o.add_argument("--panel", help="';'-separated distribution literals")
    o.add_argument("--fd-step", type=float, default=1e-5)
    _globals(o, True)

    ls = sub.add_parser("levelset", help="probe level-set convexity along a mixture path")
    ls.add_argument("--functional")
    ls.add_argument("--f0")
    ls.add_argument("--f1")
    ls.add_argument("--lambdas", default="0.25,0.5,0.75")
    ls.add_argument("--search-es", type=float, metavar="ALPHA",
                    help="search matched-ES normal pairs for a violating path")
    _globals(ls, True)
    return p


COMMANDS = {"verify": cmd_verify, "score": cmd_score, "backtest": cmd_backtest, "osband": cmd_osband,
            "levelset": cmd_levelset}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    if not args.tol_scale > 0:
        _err("--tol-scale must be positive")
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ElicitError) as e:
        _err(str(e))
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

