"""Numerical verification of consistency, Osband structure and level sets.

The workhorse is :func:`expected_score`, which evaluates ``Sbar(x, F)``
either from closed forms (cdf / lpe / partial expectations) or by adaptive
quadrature over ``y`` with forced breakpoints at the score's kinks.  Everything
else is built from it:

* :func:`minimize_expected_score` -- refined exhaustive grid search,
* :func:`consistency_certificate` -- sampled gaps plus ray profiles,
* :func:`osband_recover_h` -- least-squares fit of ``grad Sbar = h Vbar``,
* :func:`second_order_symmetry_check` -- Hessian symmetry of ``Sbar``,
* :func:`levelset_probe` -- non-elicitability via mixture paths.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import integrate, optimize

from .dist import Distribution, Mixture, Normal, mix
from .errors import BoundaryError, DomainError, ElicitError, PrecisionError
from .functionals import ExpectedShortfall, Functional, expected_shortfall
from .ident import IdentSpec, check_orientation, ident_for, random_unit_vectors
from .scores import ScoreSpec, SpectralScore, SumScore

__all__ = [
    "QuadratureConfig",
    "Tolerances",
    "expected_score",
    "expected_scores",
    "minimize_expected_score",
    "consistency_certificate",
    "osband_recover_h",
    "osband_structure",
    "second_order_symmetry_check",
    "levelset_probe",
    "es_levelset_search",
    "default_panel",
    "VerificationReport",
    "Check",
    "verify_cell",
    "run_matrix",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings for the quadrature path of :func:`expected_score`."""

    epsrel: float = 1e-10
    epsabs: float = 1e-12
    limit: int = 200
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        if not (self.epsrel > 0 and self.epsabs > 0):
            raise ElicitError("quadrature tolerances must be positive")
        if self.limit < 1:
            raise ElicitError("max subdivisions must be positive")


@dataclass(frozen=True)
class Tolerances:
    """Pass/fail thresholds of the lab checks; ``scaled(f)`` loosens them all by ``f``."""

    path_agreement: float = 1e-8
    minimizer: float = 2e-3
    gap_floor: float = 1e-10
    gap_radius: float = 1e-2
    osband_residual: float = 1e-4
    osband_structure: float = 1e-4
    symmetry: float = 1e-4
    levelset: float = 1e-6
    ident_zero: float = 1e-8

    def scaled(self, factor: float) -> Tolerances:
        if not factor > 0:
            raise ElicitError("tolerance scale must be positive")
        # the radius and level-set threshold define what counts as a violation; keep them fixed
        keep = {"gap_radius", "levelset"}
        return replace(self, **{k: (v if k in keep else v * factor) for k, v in asdict(self).items()})


DEFAULT_QUAD = QuadratureConfig()
DEFAULT_TOL = Tolerances()


# ---------------------------------------------------------------------------
# expected scores
# ---------------------------------------------------------------------------


def _quad_with_error(func, lo, hi, breaks, cfg: QuadratureConfig):
    pts = sorted({float(b) for b in breaks if lo < b < hi and math.isfinite(b)})
    edges = [lo, *pts, hi]
    total, err = 0.0, 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        pieces = [(a, 0.0), (0.0, b)] if (math.isinf(a) and math.isinf(b)) else [(a, b)]
        for u, v in pieces:
            out = integrate.quad(func, u, v, epsabs=cfg.epsabs, epsrel=cfg.epsrel, limit=cfg.limit,
                                 full_output=1)
            val, e = out[0], out[1]
            # a fourth item is QUADPACK's warning text; ier 5 reads "probably divergent"
            if len(out) > 3 and "divergent" in str(out[3]):
                e = math.inf
            total += val
            err += e
    return total, err


def _quad_expected(score: ScoreSpec, d: Distribution, x: np.ndarray, cfg: QuadratureConfig) -> float:
    # Sbar is linear in F: recurse through mixtures, sum over atoms
    if isinstance(d, Mixture):
        return sum(w * _quad_expected(score, c, x, cfg) for w, c in d.components)
    total = 0.0
    for y, m in d.atoms():
        total += m * float(np.asarray(score.values(x, y)))
    if not d._has_density():
        return total
    lo, hi = d.support()
    breaks = (*score.kinks(x), *cfg.breakpoints, *d._breaks())

    def integrand(y):
        return float(np.asarray(score.values(x, y))) * float(d.pdf(y))

    val, err = _quad_with_error(integrand, lo, hi, breaks, cfg)
    if not math.isfinite(val) or err > max(1e-6, 1e-6 * abs(val)):
        raise PrecisionError(
            f"expected score of {score.literal()} under {d.literal()} looks divergent "
            f"(quadrature error estimate {err:.3g})"
        )
    return total + val


def expected_score(score: ScoreSpec, d: Distribution, x, cfg: QuadratureConfig | None = None,
                   method: str = "auto", verify: bool = False, tol: float = DEFAULT_TOL.path_agreement) -> float:
    """``Sbar(x, F) = E_F S(x, Y)``.

    Parameters
    ----------
    method : {"auto", "closed", "quad"}
        ``auto`` uses the closed form when the family has one.
    verify : bool
        Evaluate both paths and raise :class:`PrecisionError` if they differ by
        more than ``tol * max(1, |value|)``.
    """
    cfg = cfg or DEFAULT_QUAD
    x = np.atleast_1d(np.asarray(x, dtype=float))
    score.check_domain(x)
    closed = None
    if method in ("auto", "closed") or verify:
        closed = score.expected_closed(d, x)
        if closed is None and method == "closed":
            raise ElicitError(f"{score.literal()} has no closed-form expected score")
    if method == "closed" or (method == "auto" and closed is not None and not verify):
        return float(closed)
    numeric = _quad_expected(score, d, x, cfg)
    if verify and closed is not None:
        diff = abs(float(closed) - numeric)
        if diff > tol * max(1.0, abs(numeric)):
            raise PrecisionError(f"closed form and quadrature disagree by {diff:.3g} for {score.literal()}")
    return numeric


def expected_scores(score: ScoreSpec, d: Distribution, X, cfg: QuadratureConfig | None = None) -> np.ndarray:
    """Vectorized ``Sbar`` over rows of ``X``; rows outside the domain map to ``+inf``."""
    X = np.asarray(X, dtype=float).reshape(-1, score.k)
    ok = score.domain.contains(X)
    out = np.full(len(X), np.inf)
    if not ok.any():
        return out
    vals = score.expected_closed(d, X[ok])
    if vals is None:
        vals = np.array([_quad_expected(score, d, x, cfg or DEFAULT_QUAD) for x in X[ok]])
    vals = np.asarray(vals, dtype=float).reshape(-1)
    out[ok] = np.where(np.isfinite(vals), vals, np.inf)
    return out


# ---------------------------------------------------------------------------
# minimization and certificates
# ---------------------------------------------------------------------------


@dataclass
class MinimizeResult:
    argmin: np.ndarray
    value: float
    rounds: int
    pitch: np.ndarray


def minimize_expected_score(score: ScoreSpec, d: Distribution, box=None, cfg: QuadratureConfig | None = None,
                            points: int = 21, min_rounds: int = 4, shrink: float = 5.0,
                            pitch_rel: float = 1e-4, scales=None) -> MinimizeResult:
    """Refined exhaustive grid search for ``argmin_x Sbar(x, F)``.

    ``box`` is a ``(k, 2)`` array of bounds; by default ``t +- 4 scale`` per
    coordinate around the target functional, shifted by 0.37 of the first
    pitch.  Each round evaluates a full
    ``points^k`` grid, then shrinks the half-width by ``shrink`` around the
    incumbent.  Rounds continue past ``min_rounds`` until the pitch is at most
    ``pitch_rel * scale`` in every coordinate.

    Raises
    ------
    ElicitError
        If the first-round argmin sits on the box boundary.
    """
    k = score.k
    sc = np.asarray(score.target.scales(d) if scales is None else scales, dtype=float).reshape(k)
    if box is None:
        t = np.asarray(score.target.eval(d), dtype=float)
        # off-center by a fraction of the first pitch so t is never a grid node
        nudge = 0.37 * (8 * sc / (points - 1)) * np.where(np.arange(k) % 2 == 0, 1.0, -1.0)
        box = np.stack([t - 4 * sc + nudge, t + 4 * sc + nudge], axis=1)
    box = np.asarray(box, dtype=float).reshape(k, 2)
    center = box.mean(axis=1)
    half = (box[:, 1] - box[:, 0]) / 2
    target_pitch = pitch_rel * sc
    r = 0
    best_x, best_v = center, math.inf
    while True:
        axes = [center[i] + np.linspace(-half[i], half[i], points) for i in range(k)]
        if r == 0:
            axes = [np.clip(a, box[i, 0], box[i, 1]) for i, a in enumerate(axes)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, k)
        vals = expected_scores(score, d, mesh, cfg)
        # keep a hair away from strict domain boundaries
        vals = np.where(score.domain.contains(mesh, margin=1e-6 * float(sc.min())), vals, np.inf)
        if not np.isfinite(vals).any():
            raise DomainError("search box does not intersect the action domain")
        j = int(np.argmin(vals))
        idx = np.unravel_index(j, (points,) * k)
        if r == 0 and any(i in (0, points - 1) for i in idx):
            raise BoundaryError(f"argmin on the search-box boundary at {mesh[j].tolist()}; widen the box",
                                mesh[j].tolist())
        if vals[j] < best_v:
            best_x, best_v = mesh[j], float(vals[j])
        pitch = 2 * half / (points - 1)
        r += 1
        if r >= min_rounds and np.all(pitch <= target_pitch):
            break
        center = best_x
        half = half / shrink
    return MinimizeResult(np.asarray(best_x, dtype=float), best_v, r, pitch)


@dataclass
class Check:
    name: str
    passed: bool
    margin: float
    asserted: bool = True
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "passed": bool(self.passed), "margin": _jsonable(self.margin),
                "asserted": bool(self.asserted), "detail": _jsonable(self.detail)}


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (np.floating, float)):
        f = float(v)
        return f if math.isfinite(f) else str(f)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _sample_in_domain(score, t, half, n, rng):
    out = []
    while sum(len(o) for o in out) < n:
        cand = t + rng.uniform(-1, 1, size=(4 * n, len(t))) * half
        out.append(cand[score.domain.contains(cand)])
    return np.concatenate(out)[:n]


def consistency_certificate(score: ScoreSpec, functional: Functional, d: Distribution, n_samples: int = 1000,
                            seed: int = 0, rays: int = 16, box_scale: float = 4.0,
                            tol: Tolerances = DEFAULT_TOL) -> Check:
    """Sampled strict-consistency certificate around ``t = T(F)``.

    Passes when every sampled ``x`` has ``Sbar(x) >= Sbar(t) - gap_floor``,
    every sample with ``|x - t|_inf > gap_radius`` has a strictly positive
    gap, and along ``rays`` random directions the profile ``s -> Sbar(t + s v)``
    is minimized at ``s = 0``.  Whether the profile derivative has the sign
    of ``s`` is recorded in ``detail`` but not asserted: consistency does not
    make ``Sbar`` monotone along rays.
    """
    rng = np.random.default_rng(seed)
    t = np.asarray(functional.eval(d), dtype=float)
    sc = np.asarray(functional.scales(d), dtype=float)
    if not score.domain.contains(t[None, :])[0]:
        raise DomainError(f"T(F) = {t.tolist()} is not interior to the action domain of {score.literal()}")
    s_t = float(expected_scores(score, d, t[None, :])[0])
    X = _sample_in_domain(score, t, box_scale * sc, n_samples, rng)
    gaps = expected_scores(score, d, X) - s_t
    far = np.max(np.abs(X - t) / sc, axis=1) > tol.gap_radius
    floor_ok = bool(np.all(gaps >= -tol.gap_floor))
    far_ok = bool(np.all(gaps[far] > 0)) if far.any() else True

    # ray profiles
    V = random_unit_vectors(len(t), rays, rng) if len(t) > 1 else np.array([[1.0], [-1.0]])
    mags = np.array([1e-3, 1e-2, 1e-1, 0.5, 1.0, 2.0])
    ray_ok, deriv_ok, worst_ray = True, True, math.inf
    for v in V:
        step = v * sc
        for m in mags:
            for sgn in (-1.0, 1.0):
                s = sgn * m
                pts = t + np.array([s, s * 1.01, s * 0.99])[:, None] * step
                vals = expected_scores(score, d, pts)
                if not np.all(np.isfinite(vals)):
                    continue
                gap = vals[0] - s_t
                worst_ray = min(worst_ray, gap)
                ray_ok &= bool(gap > -tol.gap_floor)
                slope = (vals[1] - vals[2]) / (0.02 * s)
                deriv_ok &= bool(np.sign(slope) == np.sign(s)) or abs(vals[1] - vals[2]) < 1e-13
    passed = floor_ok and far_ok and ray_ok
    return Check(
        "consistency",
        passed,
        float(gaps.min()),
        detail={
            "n_samples": int(len(X)),
            "min_gap": float(gaps.min()),
            "median_gap": float(np.median(gaps)),
            "min_far_gap": float(gaps[far].min()) if far.any() else None,
            "gap_floor_ok": floor_ok,
            "far_gap_positive": far_ok,
            "ray_minimum_ok": ray_ok,
            "ray_derivative_sign_ok": deriv_ok,
            "worst_ray_gap": float(worst_ray),
        },
    )


# ---------------------------------------------------------------------------
# Osband's principle
# ---------------------------------------------------------------------------


def default_panel(center: float = 0.0, scale: float = 1.0, size: int = 5) -> list[Distribution]:
    """Normals with shifted means and scales around ``center``."""
    specs = [(0.0, 1.0), (0.6, 1.0), (-0.5, 1.4), (0.3, 0.7), (-0.2, 1.2), (0.9, 0.8), (-0.8, 0.9)]
    if size > len(specs):
        raise ElicitError(f"default panel has at most {len(specs)} members")
    return [Normal(center + m * scale, s * scale) for m, s in specs[:size]]


def _fd_gradient(f, x, steps):
    """Central differences with one Richardson step."""
    k = len(x)
    g = np.empty(k)
    for i in range(k):
        e = np.zeros(k)
        e[i] = steps[i]
        d1 = (f(x + e) - f(x - e)) / (2 * steps[i])
        d2 = (f(x + e / 2) - f(x - e / 2)) / steps[i]
        g[i] = (4 * d2 - d1) / 3
    return g


def _fd_steps(x, fd_step):
    return fd_step * np.maximum(1.0, np.abs(x))


@dataclass
class OsbandResult:
    h: np.ndarray
    residual: float
    min_singular: float
    gradients: np.ndarray
    vbars: np.ndarray


def osband_recover_h(score: ScoreSpec, ident: IdentSpec | None, x, panel: Sequence[Distribution] | None = None,
                     fd_step: float = 1e-5, span_tol: float = 1e-6) -> OsbandResult:
    """Fit ``grad Sbar(x, F_j) = h(x) Vbar(x, F_j)`` over a panel by least squares.

    Raises
    ------
    ElicitError
        If the panel's ``Vbar`` vectors do not span ``R^k``.
    """
    ident = ident or score.ident()
    x = np.asarray(x, dtype=float)
    k = score.k
    panel = list(panel) if panel is not None else default_panel(float(np.mean(x)), 1.0, max(k + 2, 4))
    if len(panel) < k + 1:
        raise ElicitError(f"panel needs at least {k + 1} distributions")
    steps = _fd_steps(x, fd_step)
    G = np.array([_fd_gradient(lambda z, d=d: expected_score(score, d, z), x, steps) for d in panel])
    Vb = np.array([np.asarray(ident.expected(d, x), dtype=float).reshape(k) for d in panel])
    sv = np.linalg.svd(Vb, compute_uv=False)
    if sv.min() <= span_tol:
        raise ElicitError(f"panel is rank deficient: smallest singular value of Vbar is {sv.min():.3g}")
    Ht, *_ = np.linalg.lstsq(Vb, G, rcond=None)
    res = Vb @ Ht - G
    residual = float(np.max(np.linalg.norm(res, axis=1)) / max(np.max(np.linalg.norm(G, axis=1)), 1e-300))
    return OsbandResult(Ht.T, residual, float(sv.min()), G, Vb)


def osband_structure(score: ScoreSpec, h: np.ndarray, x) -> dict[str, float]:
    """Relative deviations from the zero pattern the family's theory predicts for ``h``."""
    x = np.asarray(x, dtype=float)
    norm = max(float(np.max(np.abs(h))), 1e-300)
    out: dict[str, float] = {}
    if isinstance(score, SpectralScore):
        k = score.k
        q, p = np.array(score.mu.points), np.array(score.mu.weights)
        # quantile rows only see their own component; last row tied to h_kk
        for m in range(k - 1):
            out[f"h[{m + 1},{k}]"] = abs(h[m, k - 1]) / norm
            pred = p[m] / q[m] * x[m] * h[k - 1, k - 1]
            out[f"h[{k},{m + 1}]-(p/q)x h[{k},{k}]"] = abs(h[k - 1, m] - pred) / norm
            for l in range(k - 1):
                if l != m:
                    out[f"h[{m + 1},{l + 1}]"] = abs(h[m, l]) / norm
    elif isinstance(score, SumScore) and score.mode == "concat":
        i = 0
        for _, part in score.parts:
            j = i + part.k
            off = np.abs(h[i:j, :]).copy()
            off[:, i:j] = 0.0
            out[f"off-block rows {i + 1}..{j}"] = float(off.max()) / norm
            i = j
    return out


def second_order_symmetry_check(score: ScoreSpec, ident: IdentSpec | None, x, panel=None,
                                fd_step: float = 1e-4, tol: float = DEFAULT_TOL.symmetry) -> Check:
    """Finite-difference Hessian of ``Sbar`` must be symmetric for every panel member.

    ``H[l, m]`` differentiates the ``l``-th central-difference gradient along
    ``m`` with an outer step three times the inner one, so symmetry is not
    built into the stencil.
    """
    x = np.asarray(x, dtype=float)
    k = score.k
    panel = list(panel) if panel is not None else default_panel(float(np.mean(x)), 1.0, max(k + 2, 4))
    if k == 1:
        return Check("symmetry", True, 0.0, detail={"note": "k = 1"})
    inner = _fd_steps(x, fd_step)
    outer = 3 * inner
    worst = 0.0
    per = []
    for d in panel:
        f = lambda z, d=d: expected_score(score, d, z)  # noqa: E731

        def grad_l(z, l):
            e = np.zeros(k)
            e[l] = inner[l]
            return (f(z + e) - f(z - e)) / (2 * inner[l])

        H = np.empty((k, k))
        for l in range(k):
            for m in range(k):
                e = np.zeros(k)
                e[m] = outer[m]
                H[l, m] = (grad_l(x + e, l) - grad_l(x - e, l)) / (2 * outer[m])
        rel = float(np.max(np.abs(H - H.T)) / max(np.max(np.abs(H)), 1e-300))
        per.append(rel)
        worst = max(worst, rel)
    return Check("symmetry", worst <= tol, worst, detail={"per_member": per})


# ---------------------------------------------------------------------------
# level sets
# ---------------------------------------------------------------------------


@dataclass
class LevelSetReport:
    functional: str
    f0: str
    f1: str
    common: list
    values: list
    lambdas: list
    max_deviation: float
    violation: bool

    def to_dict(self):
        return _jsonable(asdict(self))


def levelset_probe(functional: Functional, f0: Distribution, f1: Distribution, lambdas=(0.25, 0.5, 0.75),
                   match_tol: float = 1e-9, threshold: float = DEFAULT_TOL.levelset) -> LevelSetReport:
    """Evaluate ``T((1 - lam) F0 + lam F1)`` along a path with ``T(F0) = T(F1)``.

    A deviation above ``threshold`` certifies that ``T`` has a non-convex level
    set, hence is not elicitable on any class containing the path.
    """
    t0 = np.asarray(functional.eval(f0), dtype=float)
    t1 = np.asarray(functional.eval(f1), dtype=float)
    if np.max(np.abs(t0 - t1)) >= match_tol:
        raise ElicitError(f"endpoints are not on one level set: T(F0) = {t0.tolist()}, T(F1) = {t1.tolist()}")
    vals = [np.asarray(functional.eval(mix([(1 - lam, f0), (lam, f1)])), dtype=float) for lam in lambdas]
    dev = max(float(np.max(np.abs(v - t0))) for v in vals)
    return LevelSetReport(functional.literal(), f0.literal(), f1.literal(), t0.tolist(),
                          [v.tolist() for v in vals], list(lambdas), dev, dev > threshold)


def _normal_es_factor(alpha: float) -> float:
    # ES_alpha(N(m, s)) = m - s * factor
    return -expected_shortfall(Normal(0.0, 1.0), alpha)


def es_levelset_search(alpha: float = 0.5, base: Normal | None = None, sigmas=None, lambdas=None,
                       threshold: float = DEFAULT_TOL.levelset) -> LevelSetReport:
    """Grid search over normal partners with the same ``ES_alpha`` as ``base``; returns the worst path."""
    base = base or Normal(0.0, 1.0)
    es0 = expected_shortfall(base, alpha)
    c = _normal_es_factor(alpha)
    sigmas = np.geomspace(0.1, 10.0, 21) if sigmas is None else sigmas
    lambdas = np.linspace(0.05, 0.95, 19) if lambdas is None else lambdas
    fn = ExpectedShortfall(alpha)
    best = None
    for s in sigmas:
        if abs(s - base.sigma) < 1e-12:
            continue
        partner = Normal(es0 + c * float(s), float(s))
        rep = levelset_probe(fn, base, partner, tuple(float(v) for v in lambdas), threshold=threshold)
        if best is None or rep.max_deviation > best.max_deviation:
            best = rep
    return best


def matched_normal_partner(functional: Functional, d: Distribution, width: float = 2.0):
    """A normal with ``T`` equal to ``T(d)`` and scale ``width * scale(d)``, for scalar ``T``."""
    if functional.k != 1:
        return None
    t = float(functional.eval(d)[0])
    s = width * d.scale()

    def gap(m):
        return float(functional.eval(Normal(m, s))[0]) - t

    span = 10 * s + abs(t)
    try:
        m = optimize.brentq(gap, t - span, t + span, xtol=1e-14, rtol=1e-15)
    except ValueError:
        return None
    partner = Normal(m, s)
    if abs(gap(m)) >= 1e-10:
        return None
    return partner


# ---------------------------------------------------------------------------
# reports and the matrix runner
# ---------------------------------------------------------------------------

CHECK_NAMES = ("consistency", "orientation", "osband", "symmetry", "levelset")


@dataclass
class VerificationReport:
    functional: str
    score: str
    distribution: str
    t_true: list
    t_found: list | None = None
    gap_stats: dict | None = None
    h_matrix: list | None = None
    h_residual: float | None = None
    checks: list = field(default_factory=list)
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks if c.asserted)

    def failing(self) -> list[str]:
        return [c.name for c in self.checks if c.asserted and not c.passed]

    def to_dict(self):
        return {
            "functional": self.functional,
            "score": self.score,
            "distribution": self.distribution,
            "t_true": _jsonable(self.t_true),
            "t_found": _jsonable(self.t_found),
            "gap_stats": _jsonable(self.gap_stats),
            "h_matrix": _jsonable(self.h_matrix),
            "h_residual": _jsonable(self.h_residual),
            "checks": [c.to_dict() for c in self.checks],
            "error": self.error,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _osband_point(score: ScoreSpec, t: np.ndarray, sc: np.ndarray) -> np.ndarray:
    # nudge off T(F) so that the ES-type rows are not evaluated at a kink-free but degenerate spot
    x = t + 0.1 * sc * np.linspace(0.3, -0.3, len(t))
    if not score.domain.contains(x[None, :])[0]:
        x = t
    return x


def verify_cell(score: ScoreSpec, functional: Functional, d: Distribution, checks=CHECK_NAMES, seed: int = 0,
                n_samples: int = 1000, tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """Run the requested checks for one (score, functional, distribution) cell."""
    rep = VerificationReport(functional.literal(), score.literal(), d.literal(), [])
    try:
        t = np.asarray(functional.eval(d), dtype=float)
        sc = np.asarray(functional.scales(d), dtype=float)
        rep.t_true = t.tolist()
        if "consistency" in checks:
            try:
                res = minimize_expected_score(score, d, scales=sc)
            except BoundaryError as e:
                # a runaway minimizer is a consistency failure, not a setup error
                rep.checks.append(Check("minimizer", False, math.inf, detail={"boundary_point": e.point}))
            else:
                rep.t_found = res.argmin.tolist()
                err = float(np.max(np.abs(res.argmin - t) / sc))
                rep.checks.append(Check("minimizer", err <= tol.minimizer, err, detail={"rounds": res.rounds}))
            cert = consistency_certificate(score, functional, d, n_samples=n_samples, seed=seed, tol=tol)
            rep.gap_stats = {"min": cert.detail["min_gap"], "median": cert.detail["median_gap"]}
            rep.checks.append(cert)
        if "orientation" in checks:
            ident = ident_for(functional)
            o = check_orientation(ident, d, t, seed=seed, domain=score.domain)
            rep.checks.append(Check("orientation", o.passed, o.worst_margin, asserted=o.asserted,
                                    detail={"n_checked": o.n_checked, "failures": o.failures[:5]}))
        if "osband" in checks or "symmetry" in checks:
            x = _osband_point(score, t, sc)
            panel = default_panel(float(np.mean(t)), d.scale(), max(score.k + 2, 4))
            if "osband" in checks:
                o = osband_recover_h(score, ident_for(functional), x, panel)
                rep.h_matrix = o.h.tolist()
                rep.h_residual = o.residual
                struct = osband_structure(score, o.h, x)
                worst = max(struct.values(), default=0.0)
                rep.checks.append(Check("osband", o.residual <= tol.osband_residual
                                        and worst <= tol.osband_structure, max(o.residual, worst),
                                        detail={"x": x.tolist(), "residual": o.residual, "structure": struct,
                                                "min_singular": o.min_singular}))
            if "symmetry" in checks:
                rep.checks.append(second_order_symmetry_check(score, None, x, panel, tol=tol.symmetry))
        if "levelset" in checks:
            partner = matched_normal_partner(functional, d)
            if partner is None:
                rep.checks.append(Check("levelset", True, 0.0, asserted=False,
                                        detail={"note": "no scalar matched partner; skipped"}))
            else:
                lp = levelset_probe(functional, d, partner, match_tol=1e-9)
                # an elicitable functional must show no violation
                rep.checks.append(Check("levelset", not lp.violation, lp.max_deviation, detail=lp.to_dict()))
    except ElicitError as e:
        rep.error = f"{type(e).__name__}: {e}"
    return rep


def run_matrix(cells, checks=CHECK_NAMES, seed: int = 0, n_samples: int = 1000, tol: Tolerances = DEFAULT_TOL,
               workers: int = 1) -> list[VerificationReport]:
    """Run ``verify_cell`` over ``(score, functional, distribution)`` triples; order follows ``cells``."""
    cells = list(cells)

    def run(i_cell):
        i, (s, f, d) = i_cell
        return verify_cell(s, f, d, checks, seed=seed + i, n_samples=n_samples, tol=tol)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(run, enumerate(cells)))
    return [run(c) for c in enumerate(cells)]


def cartesian_cells(scores, functionals, distributions):
    """Pair each score with the listed functional it targets, crossed with all distributions."""
    cells = []
    for s in scores:
        match = [f for f in functionals if f == s.target]
        if not match:
            raise ElicitError(f"score {s.literal()} targets {s.target.literal()}, which is not among the functionals")
        for d in distributions:
            cells.append((s, match[0], d))
    return cells

