"""Target functionals ``T: F -> R^k`` evaluated exactly on a distribution.

These values are the ground truth every numerical check compares against,
so they are computed from closed-form primitives (cdf, quantile, lower
partial expectations) or by bracketed root finding, never by optimizing a
score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from scipy import optimize

from .dist import Distribution
from .errors import ElicitError, NonUniqueQuantileError
from .shapes import ShapeFunction, moment_function

__all__ = [
    "SpectralMeasure",
    "Functional",
    "Mean",
    "MomentK",
    "RatioOfExpectations",
    "Quantile",
    "Expectile",
    "MeanVariance",
    "Variance",
    "ExpectedShortfall",
    "QuantileVector",
    "ExpectileVector",
    "VaRES",
    "SpectralWithQuantiles",
    "Stacked",
    "eval_functional",
    "expected_shortfall",
    "value_at_risk",
    "expectile",
    "decompose_spectral_with_unit_mass",
]


def _level(v, name="level"):
    v = float(v)
    if not 0 < v < 1:
        raise ElicitError(f"{name} must lie in (0, 1), got {v!r}")
    return v


def value_at_risk(d: Distribution, alpha: float, strict: bool = True) -> float:
    """Lower alpha-quantile; with ``strict`` the quantile must be unique."""
    if strict and not d.has_unique_quantile(alpha):
        raise NonUniqueQuantileError(f"{d.literal()} has no unique {alpha!r}-quantile")
    return float(d.quantile(alpha))


def expected_shortfall(d: Distribution, alpha: float) -> float:
    """``(1/alpha) int_0^alpha VaR_u du``.

    Uses ``(E[Y 1{Y <= q}] - q (F(q) - alpha)) / alpha`` with ``q`` the lower
    quantile, which is exact with or without atoms at ``q``.
    """
    if alpha == 1.0:
        return d.mean
    alpha = _level(alpha, "ES level")
    d.require_moment(1)
    q = float(d.quantile(alpha))
    return (float(d.lpe(q)) - q * (float(d.cdf(q)) - alpha)) / alpha


def expected_expectile_ident(d: Distribution, tau: float, x):
    """``E[2 |1{Y <= x} - tau| (x - Y)]`` through cdf, lpe and mean."""
    x = np.asarray(x, dtype=float)
    F = np.asarray(d.cdf(x))
    L = np.asarray(d.lpe(x))
    m = d.mean
    return 2.0 * ((1 - tau) * (x * F - L) + tau * (x * (1 - F) - (m - L)))


def expectile(d: Distribution, tau: float) -> float:
    tau = _level(tau, "expectile level")
    d.require_moment(1)
    lo, hi = float(d.quantile(0.001)), float(d.quantile(0.999))
    if lo == hi:
        lo, hi = lo - 1.0, hi + 1.0
    f = lambda x: float(expected_expectile_ident(d, tau, x))  # noqa: E731
    width = hi - lo
    while f(lo) > 0:
        lo -= width
        width *= 2
    while f(hi) < 0:
        hi += width
        width *= 2
    return optimize.brentq(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500)


@dataclass(frozen=True)
class SpectralMeasure:
    """Finite spectral measure ``sum_m weights[m] * delta(points[m])``."""

    points: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        ws = tuple(float(w) for w in self.weights)
        if not pts or len(pts) != len(ws):
            raise ElicitError("spectral measure needs matching, nonempty points and weights")
        if any(p == 0.0 for p in pts):
            raise ElicitError(
                "spectral measures with mass at 0 are not supported: ES_0 is the essential infimum, "
                "which is -inf for distributions unbounded below and is not known to be elicitable"
            )
        if any(not 0 < p <= 1 for p in pts):
            raise ElicitError("spectral points must lie in (0, 1]")
        if len(set(pts)) != len(pts):
            raise ElicitError("spectral points must be pairwise distinct")
        if any(w <= 0 for w in ws):
            raise ElicitError("spectral weights must be positive")
        if abs(sum(ws) - 1.0) > 1e-12:
            raise ElicitError(f"spectral weights must sum to 1, got {sum(ws)!r}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", ws)

    @classmethod
    def delta(cls, q: float) -> SpectralMeasure:
        return cls((q,), (1.0,))

    def __len__(self):
        return len(self.points)

    def literal_args(self) -> str:
        return ", ".join(f"{w!r}@{q!r}" for q, w in zip(self.points, self.weights))

    def evaluate(self, d: Distribution) -> float:
        return float(sum(w * expected_shortfall(d, q) for q, w in zip(self.points, self.weights)))


def decompose_spectral_with_unit_mass(mu: SpectralMeasure) -> tuple[SpectralMeasure | None, float]:
    """Split ``mu = (1 - lam) * mu_tilde + lam * delta_1``.

    Returns ``(mu_tilde, lam)``; ``mu_tilde`` is None when ``mu = delta_1``.
    """
    lam = sum(w for q, w in zip(mu.points, mu.weights) if q == 1.0)
    if lam == 0.0:
        return mu, 0.0
    rest = [(q, w) for q, w in zip(mu.points, mu.weights) if q != 1.0]
    if lam >= 1.0 - 1e-15:
        if rest:
            raise ElicitError("unit mass at 1 together with other points is redundant")
        return None, 1.0
    pts = tuple(q for q, _ in rest)
    ws = np.array([w for _, w in rest]) / (1.0 - lam)
    ws[-1] = 1.0 - ws[:-1].sum()
    return SpectralMeasure(pts, tuple(float(w) for w in ws)), float(lam)


class Functional:
    """A target functional of fixed output dimension."""

    dim: ClassVar[int] = 1

    def eval(self, d: Distribution) -> np.ndarray:
        raise NotImplementedError

    def literal(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.literal()

    def scales(self, d: Distribution) -> np.ndarray:
        """Per-coordinate natural scale, used to size search boxes and FD steps."""
        return np.full(self.k, d.scale())

    @property
    def k(self) -> int:
        return self.dim

    @property
    def elicitable(self) -> bool:
        return True

    @property
    def quantile_levels(self) -> tuple[float, ...]:
        """Levels of quantile components that must be unique for strict claims."""
        return ()


@dataclass(frozen=True)
class Mean(Functional):
    def eval(self, d):
        d.require_moment(1)
        return np.array([d.mean])

    def literal(self):
        return "mean"


@dataclass(frozen=True)
class MomentK(Functional):
    order: int

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise ElicitError("moment order must be a positive integer")

    def eval(self, d):
        return np.array([d.moment(int(self.order))])

    def literal(self):
        return f"moment({int(self.order)})"

    def scales(self, d):
        s, m = d.scale(), abs(d.mean)
        return np.array([sum(math.comb(self.order, j) * m ** (self.order - j) * s**j for j in range(1, self.order + 1))])


@dataclass(frozen=True)
class RatioOfExpectations(Functional):
    p: str
    q: str

    def __post_init__(self):
        moment_function(self.p)
        if self.q not in ("one", "exp-clip"):
            raise ElicitError(f"denominator must be strictly positive; {self.q!r} is not")

    @property
    def p_fn(self) -> ShapeFunction:
        return moment_function(self.p)

    @property
    def q_fn(self) -> ShapeFunction:
        return moment_function(self.q)

    def eval(self, d):
        return np.array([d.expect(self.p_fn) / d.expect(self.q_fn)])

    def literal(self):
        return f"ratio({self.p}, {self.q})"


@dataclass(frozen=True)
class Quantile(Functional):
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _level(self.alpha, "quantile level"))

    def eval(self, d):
        return np.array([value_at_risk(d, self.alpha)])

    def literal(self):
        return f"quantile({self.alpha!r})"

    @property
    def quantile_levels(self):
        return (self.alpha,)


@dataclass(frozen=True)
class Expectile(Functional):
    tau: float

    def __post_init__(self):
        object.__setattr__(self, "tau", _level(self.tau, "expectile level"))

    def eval(self, d):
        return np.array([expectile(d, self.tau)])

    def literal(self):
        return f"expectile({self.tau!r})"


@dataclass(frozen=True)
class MeanVariance(Functional):
    dim: ClassVar[int] = 2

    def eval(self, d):
        d.require_moment(2)
        m = d.mean
        return np.array([m, d.moment(2) - m * m])

    def literal(self):
        return "mean_variance"

    def scales(self, d):
        s = d.scale()
        return np.array([s, s * s])


@dataclass(frozen=True)
class Variance(Functional):
    """Not elicitable on its own; used by level-set probes."""

    def eval(self, d):
        d.require_moment(2)
        return np.array([d.moment(2) - d.mean**2])

    def literal(self):
        return "variance"

    def scales(self, d):
        return np.array([d.scale() ** 2])

    @property
    def elicitable(self):
        return False


@dataclass(frozen=True)
class ExpectedShortfall(Functional):
    """ES on its own; not elicitable, used by level-set probes."""

    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _level(self.alpha, "ES level"))

    def eval(self, d):
        return np.array([expected_shortfall(d, self.alpha)])

    def literal(self):
        return f"es({self.alpha!r})"

    @property
    def elicitable(self):
        return False


@dataclass(frozen=True)
class QuantileVector(Functional):
    levels: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(_level(a, "quantile level") for a in self.levels))
        if not self.levels:
            raise ElicitError("quantile vector needs at least one level")

    @property
    def k(self):
        return len(self.levels)

    def eval(self, d):
        return np.array([value_at_risk(d, a) for a in self.levels])

    def literal(self):
        return "quantiles(" + ", ".join(repr(a) for a in self.levels) + ")"

    @property
    def quantile_levels(self):
        return self.levels


@dataclass(frozen=True)
class ExpectileVector(Functional):
    levels: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(_level(a, "expectile level") for a in self.levels))
        if not self.levels:
            raise ElicitError("expectile vector needs at least one level")

    @property
    def k(self):
        return len(self.levels)

    def eval(self, d):
        return np.array([expectile(d, t) for t in self.levels])

    def literal(self):
        return "expectiles(" + ", ".join(repr(a) for a in self.levels) + ")"


@dataclass(frozen=True)
class VaRES(Functional):
    alpha: float
    dim: ClassVar[int] = 2

    def __post_init__(self):
        object.__setattr__(self, "alpha", _level(self.alpha, "VaR/ES level"))

    def eval(self, d):
        return np.array([value_at_risk(d, self.alpha), expected_shortfall(d, self.alpha)])

    def literal(self):
        return f"var_es({self.alpha!r})"

    @property
    def quantile_levels(self):
        return (self.alpha,)

    def as_spectral(self) -> SpectralWithQuantiles:
        return SpectralWithQuantiles(SpectralMeasure.delta(self.alpha))


@dataclass(frozen=True)
class SpectralWithQuantiles(Functional):
    """``(F^-1(q_1), ..., F^-1(q_{k-1}), nu_mu(F))`` for the points ``q_m < 1`` of ``mu``."""

    mu: SpectralMeasure

    @property
    def quantile_points(self) -> tuple[float, ...]:
        return tuple(q for q in self.mu.points if q < 1.0)

    @property
    def k(self):
        return len(self.quantile_points) + 1

    def eval(self, d):
        qs = [value_at_risk(d, q) for q in self.quantile_points]
        return np.array([*qs, self.mu.evaluate(d)])

    def literal(self):
        return f"spectral({self.mu.literal_args()})"

    @property
    def quantile_levels(self):
        return self.quantile_points


@dataclass(frozen=True)
class Stacked(Functional):
    """Concatenation ``(T_1, ..., T_l)`` of functionals."""

    parts: tuple[Functional, ...]

    @property
    def k(self):
        return sum(p.k for p in self.parts)

    def eval(self, d):
        return np.concatenate([p.eval(d) for p in self.parts])

    def scales(self, d):
        return np.concatenate([p.scales(d) for p in self.parts])

    def literal(self):
        return "stack(" + ", ".join(p.literal() for p in self.parts) + ")"

    @property
    def quantile_levels(self):
        return tuple(a for p in self.parts for a in p.quantile_levels)


def stack(parts) -> Functional:
    """Canonical concatenation: all-quantile and all-expectile stacks get their own variant."""
    flat: list[Functional] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, Stacked) else [p])
    if len(flat) == 1:
        return flat[0]
    if all(isinstance(p, (Quantile, QuantileVector)) for p in flat):
        return QuantileVector(tuple(a for p in flat for a in p.quantile_levels))
    if all(isinstance(p, (Expectile, ExpectileVector)) for p in flat):
        return ExpectileVector(tuple(a for p in flat for a in ((p.tau,) if isinstance(p, Expectile) else p.levels)))
    return Stacked(tuple(flat))


def eval_functional(spec: Functional, d: Distribution) -> np.ndarray:
    return spec.eval(d)
