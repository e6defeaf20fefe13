"""Scoring-function families ``S(x, y)`` with their action domains.

Every family provides

* ``values(X, y)`` -- realized scores, vectorized (``X`` has trailing axis ``k``),
* ``expected_closed(d, X)`` -- ``E_F S(X, Y)`` assembled from cdf / lpe /
  partial-expectation primitives, or ``None`` when the family has no such
  shortcut,
* ``kinks(x)`` -- the ``y`` locations where ``S(x, .)`` is not smooth, used as
  forced breakpoints by the quadrature path in :mod:`elicitlab.lab`.

The additive ``a(y)`` term is always zero except in :class:`Rescaled`, which
exists to exercise equivalence-class invariance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import ClassVar, Sequence

import numpy as np

from . import kernels
from .dist import Distribution, quad_piecewise
from .errors import DomainError, ElicitError, ShapeError
from .functionals import (
    Expectile,
    Functional,
    Mean,
    MeanVariance,
    Quantile,
    RatioOfExpectations,
    SpectralMeasure,
    SpectralWithQuantiles,
    VaRES,
    stack,
)
from .ident import IdentSpec, ident_for
from .shapes import ShapeFunction, moment_function

__all__ = [
    "ActionDomain",
    "ScoreSpec",
    "QuantilePinball",
    "ExpectileSquare",
    "BregmanRatio",
    "BregmanMean",
    "MeanVarianceRevealed",
    "SpectralScore",
    "VarEsScore",
    "AcerbiSzekelyW",
    "SumScore",
    "NumericOneDim",
    "Rescaled",
    "score",
    "sum_score",
    "build_numeric_onedim",
    "increasing_condition_check",
]

CHECK_WINDOW = (-10.0, 10.0)
CHECK_POINTS = 200
SLOPE_TOL = 1e-12


# ---------------------------------------------------------------------------
# action domains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ActionDomain:
    """Intersection of half-spaces ``a . x >= b`` (``> b`` when strict) in ``R^k``."""

    k: int
    constraints: tuple[tuple[tuple[float, ...], float, bool], ...] = ()

    @classmethod
    def full(cls, k: int) -> ActionDomain:
        return cls(k)

    @classmethod
    def var_es(cls) -> ActionDomain:
        """``A_0 = {x_1 >= x_2}``."""
        return cls(2, (((1.0, -1.0), 0.0, False),))

    @classmethod
    def w_bound(cls, W: float) -> ActionDomain:
        """``{x_2 > W x_1}``."""
        return cls(2, (((-float(W), 1.0), 0.0, True),))

    @classmethod
    def lower_bound(cls, k: int, i: int, b: float, strict: bool = False) -> ActionDomain:
        a = [0.0] * k
        a[i] = 1.0
        return cls(k, ((tuple(a), float(b), strict),))

    @property
    def is_full(self) -> bool:
        return not self.constraints

    def intersect(self, other: ActionDomain) -> ActionDomain:
        if other.k != self.k:
            raise ElicitError("cannot intersect domains of different dimension")
        seen = list(self.constraints)
        for c in other.constraints:
            if c not in seen:
                seen.append(c)
        return ActionDomain(self.k, tuple(seen))

    def product(self, other: ActionDomain) -> ActionDomain:
        cons = [(a + (0.0,) * other.k, b, s) for a, b, s in self.constraints]
        cons += [((0.0,) * self.k + a, b, s) for a, b, s in other.constraints]
        return ActionDomain(self.k + other.k, tuple(cons))

    def contains(self, X, margin: float = 0.0) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        ok = np.all(np.isfinite(X), axis=-1)
        for a, b, strict in self.constraints:
            lhs = X @ np.asarray(a)
            ok &= (lhs > b + margin) if strict else (lhs >= b + margin)
        return ok

    def describe(self) -> str:
        if self.is_full:
            return f"R^{self.k}"
        parts = []
        for a, b, strict in self.constraints:
            terms = " + ".join(f"{c:g}*x{i + 1}" for i, c in enumerate(a) if c != 0)
            parts.append(f"{terms} {'>' if strict else '>='} {b:g}")
        return " and ".join(parts)


# ---------------------------------------------------------------------------
# base class
# ---------------------------------------------------------------------------


class ScoreSpec:
    """A scoring function on an action domain."""

    dim: ClassVar[int] = 1

    @property
    def k(self) -> int:
        return self.dim

    @property
    def domain(self) -> ActionDomain:
        return ActionDomain.full(self.k)

    @property
    def target(self) -> Functional:
        raise NotImplementedError

    @property
    def strict(self) -> bool:
        """Whether the shape checks certify strict (not merely weak) consistency."""
        return True

    def ident(self) -> IdentSpec:
        return ident_for(self.target)

    def values(self, X, y) -> np.ndarray:
        raise NotImplementedError

    def expected_closed(self, d: Distribution, X):
        return None

    def kinks(self, x) -> tuple[float, ...]:
        return ()

    def literal(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.literal()

    def check_domain(self, X) -> None:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.k:
            raise DomainError(f"{self.literal()} expects forecasts of dimension {self.k}, got {X.shape[-1]}")
        if not np.all(self.domain.contains(X)):
            raise DomainError(f"forecast outside the action domain {self.domain.describe()} of {self.literal()}")


def _rows(X, k):
    X = np.asarray(X, dtype=float)
    if X.ndim == 0 or X.shape[-1] != k:
        if k == 1:
            X = X[..., None]
        else:
            raise DomainError(f"expected forecasts of dimension {k}")
    return X


def _fmt(v: float) -> str:
    return repr(float(v))


# ---------------------------------------------------------------------------
# one-dimensional families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuantilePinball(ScoreSpec):
    """``(1{y <= x} - alpha) G(x) - 1{y <= x} G(y)``; strictly consistent for strictly increasing ``G``."""

    alpha: float
    G: ShapeFunction = ShapeFunction("identity")
    unchecked: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        if not 0 < self.alpha < 1:
            raise ElicitError("pinball level must lie in (0, 1)")
        if not self.unchecked and not self.G.increasing:
            raise ShapeError(f"pinball needs an increasing G, got {self.G.literal()}")

    @property
    def strict(self):
        return self.G.strictly_increasing

    @property
    def target(self):
        return Quantile(self.alpha)

    def values(self, X, y):
        X = _rows(X, 1)
        return kernels.pinball_rows(X[..., 0], y, self.alpha, self.G)

    def expected_closed(self, d, X):
        x = _rows(X, 1)[..., 0]
        return (np.asarray(d.cdf(x)) - self.alpha) * self.G.value(x) - np.asarray(d.partial(self.G, x))

    def kinks(self, x):
        return (float(np.ravel(x)[0]),)

    def literal(self):
        s = f"pinball({_fmt(self.alpha)}, G={self.G.literal()}"
        return s + (", unchecked=1)" if self.unchecked else ")")


@dataclass(frozen=True)
class ExpectileSquare(ScoreSpec):
    """``|1{y <= x} - tau| (x - y)^2``."""

    tau: float

    def __post_init__(self):
        object.__setattr__(self, "tau", float(self.tau))
        if not 0 < self.tau < 1:
            raise ElicitError("expectile level must lie in (0, 1)")

    @property
    def target(self):
        return Expectile(self.tau)

    def values(self, X, y):
        X = _rows(X, 1)
        return kernels.expectile_rows(X[..., 0], y, self.tau)

    def expected_closed(self, d, X):
        x = _rows(X, 1)[..., 0]
        d.require_moment(2)
        F = np.asarray(d.cdf(x))
        L = np.asarray(d.lpe(x))
        L2 = np.asarray(d.partial(ShapeFunction("square"), x))
        m, m2 = d.mean, d.moment(2)
        low = x * x * F - 2 * x * L + L2
        high = x * x * (1 - F) - 2 * x * (m - L) + (m2 - L2)
        return (1 - self.tau) * low + self.tau * high

    def kinks(self, x):
        return (float(np.ravel(x)[0]),)

    def literal(self):
        return f"expectile_sq({_fmt(self.tau)})"


@dataclass(frozen=True)
class BregmanRatio(ScoreSpec):
    """``-phi(x) q(y) + (x q(y) - p(y)) phi'(x)`` for ``E p(Y) / E q(Y)``."""

    phi: ShapeFunction
    p: str = "identity"
    q: str = "one"
    unchecked: bool = False

    def __post_init__(self):
        moment_function(self.p)
        if self.q not in ("one", "exp-clip"):
            raise ShapeError(f"denominator {self.q!r} is not strictly positive")
        if not self.unchecked and not self.phi.convex:
            raise ShapeError(f"Bregman score needs a convex phi, got {self.phi.literal()}")

    @property
    def strict(self):
        return self.phi.strictly_convex

    @property
    def target(self):
        if (self.p, self.q) == ("identity", "one"):
            return Mean()
        return RatioOfExpectations(self.p, self.q)

    def values(self, X, y):
        x = _rows(X, 1)[..., 0]
        y = np.asarray(y, dtype=float)
        qy = moment_function(self.q).value(y)
        py = moment_function(self.p).value(y)
        return -self.phi.value(x) * qy + (x * qy - py) * self.phi.deriv(x)

    def expected_closed(self, d, X):
        x = _rows(X, 1)[..., 0]
        eq = d.expect(moment_function(self.q))
        ep = d.expect(moment_function(self.p))
        return -self.phi.value(x) * eq + (x * eq - ep) * self.phi.deriv(x)

    def literal(self):
        s = f"bregman_ratio({self.p}, {self.q}, phi={self.phi.literal()}"
        return s + (", unchecked=1)" if self.unchecked else ")")


@dataclass(frozen=True)
class BregmanMean(BregmanRatio):
    def __init__(self, phi: ShapeFunction, unchecked: bool = False):
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "p", "identity")
        object.__setattr__(self, "q", "one")
        object.__setattr__(self, "unchecked", bool(unchecked))
        self.__post_init__()

    def literal(self):
        s = f"bregman_mean(phi={self.phi.literal()}"
        return s + (", unchecked=1)" if self.unchecked else ")")


@dataclass(frozen=True)
class MeanVarianceRevealed(ScoreSpec):
    """Bregman scores for (mean, second moment) read through ``(m, v) -> (m, v + m^2)``.

    ``S(m, v, y) = -phi1(m) - phi1'(m)(y - m) - phi2(s) - phi2'(s)(y^2 - s)`` with ``s = v + m^2``.
    """

    phi1: ShapeFunction = ShapeFunction("square")
    phi2: ShapeFunction = ShapeFunction("square")
    dim: ClassVar[int] = 2

    def __post_init__(self):
        for ph in (self.phi1, self.phi2):
            if not ph.strictly_convex:
                raise ShapeError(f"mean/variance score needs strictly convex phi, got {ph.literal()}")

    @property
    def domain(self):
        return ActionDomain.lower_bound(2, 1, 0.0)

    @property
    def target(self):
        return MeanVariance()

    def values(self, X, y):
        X = _rows(X, 2)
        y = np.asarray(y, dtype=float)
        m, s = X[..., 0], X[..., 1] + X[..., 0] ** 2
        return (-self.phi1.value(m) - self.phi1.deriv(m) * (y - m)
                - self.phi2.value(s) - self.phi2.deriv(s) * (y * y - s))

    def expected_closed(self, d, X):
        X = _rows(X, 2)
        d.require_moment(2)
        m, s = X[..., 0], X[..., 1] + X[..., 0] ** 2
        return (-self.phi1.value(m) - self.phi1.deriv(m) * (d.mean - m)
                - self.phi2.value(s) - self.phi2.deriv(s) * (d.moment(2) - s))

    def literal(self):
        return f"mean_var(phi1={self.phi1.literal()}, phi2={self.phi2.literal()})"


# ---------------------------------------------------------------------------
# spectral family (and the VaR / ES special case)
# ---------------------------------------------------------------------------


def increasing_condition_check(mu: SpectralMeasure, gs: Sequence[ShapeFunction], risk_shape: ShapeFunction,
                               domain: ActionDomain, window=CHECK_WINDOW, n: int = CHECK_POINTS):
    """Numerically test that ``x_r -> x_r (p_r/q_r) G_k(x_k) + G_r(x_r)`` increases on the domain.

    Returns ``(weakly_increasing, strictly_increasing, worst_slope)`` over a
    ``n x n`` grid of ``(x_r, x_k)`` inside ``window`` and the domain.
    """
    k = len(mu) + 1
    if k > 2 and not domain.is_full:
        raise ShapeError("the increasing-condition check supports constrained domains only for k = 2")
    grid = np.linspace(window[0], window[1], n)
    xr, xk = np.meshgrid(grid, grid, indexing="ij")  # axis 0 runs along x_r
    gk = risk_shape.deriv(xk)
    weak, strict, worst = True, True, math.inf
    for r, g in enumerate(gs):
        pq = mu.weights[r] / mu.points[r]
        h = xr * pq * gk + g.value(xr)
        if k == 2:
            ok = domain.contains(np.stack([xr, xk], axis=-1))
        else:
            ok = np.ones_like(xr, dtype=bool)
        pair_ok = ok[1:, :] & ok[:-1, :]
        if not pair_ok.any():
            continue
        slope = (h[1:, :] - h[:-1, :])[pair_ok]
        worst = min(worst, float(slope.min()))
        weak &= bool(np.all(slope >= -SLOPE_TOL))
        strict &= bool(np.all(slope > 0))
    return weak, strict and weak, worst


@dataclass(frozen=True)
class SpectralScore(ScoreSpec):
    """Score for ``(F^-1(q_1), ..., F^-1(q_{k-1}), nu_mu(F))`` with ``mu = sum p_m delta(q_m)``."""

    mu: SpectralMeasure
    gs: tuple[ShapeFunction, ...]
    risk_shape: ShapeFunction = ShapeFunction("exp")
    unchecked: bool = False
    _domain: ActionDomain | None = field(default=None, compare=False, repr=False)
    _strict: bool = field(default=True, init=False, compare=False, repr=False)

    def __post_init__(self):
        if any(q >= 1.0 for q in self.mu.points):
            raise ElicitError("spectral score needs points in (0, 1); use decompose_spectral_with_unit_mass for mass at 1")
        gs = tuple(self.gs)
        if len(gs) == 1 and len(self.mu) > 1:
            gs = gs * len(self.mu)
        if len(gs) != len(self.mu):
            raise ElicitError(f"need {len(self.mu)} quantile shape functions, got {len(gs)}")
        object.__setattr__(self, "gs", gs)
        if self.unchecked:
            object.__setattr__(self, "_strict", False)
            return
        if not self.risk_shape.convex:
            raise ShapeError(f"the ES-component shape must be convex, got {self.risk_shape.literal()}")
        weak, strict, worst = increasing_condition_check(self.mu, gs, self.risk_shape, self.domain)
        if not weak:
            raise ShapeError(
                f"x_r (p_r/q_r) G_k(x_k) + G_r(x_r) is not increasing on {self.domain.describe()} "
                f"(worst grid slope {worst:.3g})"
            )
        object.__setattr__(self, "_strict", bool(strict and self.risk_shape.strictly_convex))

    @property
    def k(self):
        return len(self.mu) + 1

    @property
    def domain(self):
        return self._domain if self._domain is not None else ActionDomain.full(self.k)

    @property
    def strict(self):
        return self._strict

    @property
    def target(self):
        return SpectralWithQuantiles(self.mu)

    @property
    def _qp(self):
        return np.array(self.mu.points), np.array(self.mu.weights)

    def values(self, X, y):
        X = _rows(X, self.k)
        q, p = self._qp
        return kernels.spectral_rows(X, y, q, p, self.gs, self.risk_shape)

    def expected_closed(self, d, X):
        X = _rows(X, self.k)
        q, p = self._qp
        d.require_moment(1)
        xq, xk = X[..., :-1], X[..., -1]
        F = np.asarray(d.cdf(xq))
        L = np.asarray(d.lpe(xq))
        quant = np.zeros(xk.shape)
        for r, g in enumerate(self.gs):
            if g.tag == "zero":
                continue
            quant = quant + (F[..., r] - q[r]) * g.value(xq[..., r]) - np.asarray(d.partial(g, xq[..., r]))
        inner = xk + np.sum(p / q * (xq * F - L - q * xq), axis=-1)
        return quant + self.risk_shape.deriv(xk) * inner - self.risk_shape.value(xk)

    def kinks(self, x):
        return tuple(float(v) for v in np.ravel(x)[:-1])

    def literal(self):
        gs = ", ".join(g.literal() for g in self.gs)
        s = f"spectral({self.mu.literal_args()}; G=[{gs}], Gk={self.risk_shape.literal()}"
        return s + (", unchecked=1)" if self.unchecked else ")")


@dataclass(frozen=True, init=False)
class VarEsScore(SpectralScore):
    """``(VaR_alpha, ES_alpha)`` score on ``A_0 = {x_1 >= x_2}``, optionally cut to ``{x_2 > W x_1}``."""

    alpha: float = 0.05
    W: float | None = None

    def __init__(self, alpha: float, G1: ShapeFunction = ShapeFunction("zero"),
                 G2: ShapeFunction = ShapeFunction("exp"), W: float | None = None, unchecked: bool = False):
        alpha = float(alpha)
        if not 0 < alpha < 1:
            raise ElicitError("VaR/ES level must lie in (0, 1)")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "W", None if W is None else float(W))
        dom = ActionDomain.var_es()
        if W is not None:
            dom = dom.intersect(ActionDomain.w_bound(W))
        object.__setattr__(self, "mu", SpectralMeasure.delta(alpha))
        object.__setattr__(self, "gs", (G1,))
        object.__setattr__(self, "risk_shape", G2)
        object.__setattr__(self, "unchecked", bool(unchecked))
        object.__setattr__(self, "_domain", dom)
        object.__setattr__(self, "_strict", True)
        self.__post_init__()

    @property
    def G1(self) -> ShapeFunction:
        return self.gs[0]

    @property
    def G2(self) -> ShapeFunction:
        return self.risk_shape

    @property
    def target(self):
        return VaRES(self.alpha)

    def literal(self):
        s = f"var_es({_fmt(self.alpha)}, G1={self.G1.literal()}, G2={self.G2.literal()}"
        if self.W is not None:
            s += f", W={_fmt(self.W)}"
        return s + (", unchecked=1)" if self.unchecked else ")")


@dataclass(frozen=True)
class AcerbiSzekelyW(ScoreSpec):
    """``alpha (x2^2/2 + W x1^2/2 - x1 x2) + 1{y <= x1} (-x2 (y - x1) + W (y^2 - x1^2)/2)``.

    The domain is ``{x1 >= x2}``; ``restrict=True`` further cuts it to
    ``{x2 > W x1}``, where the score is strictly consistent for (VaR, ES).
    """

    alpha: float
    W: float
    restrict: bool = False
    dim: ClassVar[int] = 2

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "W", float(self.W))
        object.__setattr__(self, "restrict", bool(self.restrict))
        if not 0 < self.alpha < 1:
            raise ElicitError("level must lie in (0, 1)")

    @property
    def domain(self):
        dom = ActionDomain.var_es()
        return dom.intersect(ActionDomain.w_bound(self.W)) if self.restrict else dom

    @property
    def target(self):
        return VaRES(self.alpha)

    def values(self, X, y):
        X = _rows(X, 2)
        y = np.asarray(y, dtype=float)
        x1, x2 = X[..., 0], X[..., 1]
        a, W = self.alpha, self.W
        ind = (y <= x1).astype(float)
        return a * (x2 * x2 / 2 + W * x1 * x1 / 2 - x1 * x2) + ind * (-x2 * (y - x1) + W * (y * y - x1 * x1) / 2)

    def expected_closed(self, d, X):
        X = _rows(X, 2)
        x1, x2 = X[..., 0], X[..., 1]
        a, W = self.alpha, self.W
        F = np.asarray(d.cdf(x1))
        L = np.asarray(d.lpe(x1))
        L2 = np.asarray(d.partial(ShapeFunction("square"), x1))
        return a * (x2 * x2 / 2 + W * x1 * x1 / 2 - x1 * x2) - x2 * (L - x1 * F) + W * (L2 - x1 * x1 * F) / 2

    def kinks(self, x):
        return (float(np.ravel(x)[0]),)

    def literal(self):
        return f"as_w({_fmt(self.alpha)}, W={_fmt(self.W)}" + (", restrict=1)" if self.restrict else ")")


# ---------------------------------------------------------------------------
# combinators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SumScore(ScoreSpec):
    """Positive combination of scores.

    ``mode="concat"``: ``sum_i w_i S_i(x_i, y)`` over concatenated forecasts
    (target is the stacked functional).  ``mode="mix"``: ``sum_i w_i S_i(x, y)``
    for scores of one functional.
    """

    parts: tuple[tuple[float, ScoreSpec], ...]
    mode: str = "concat"

    def __post_init__(self):
        parts = tuple((float(w), s) for w, s in self.parts)
        if not parts:
            raise ElicitError("sum of scores needs at least one part")
        if any(not w > 0 for w, _ in parts):
            raise ElicitError("score weights must be strictly positive")
        if self.mode not in ("concat", "mix"):
            raise ElicitError("mode must be 'concat' or 'mix'")
        if self.mode == "mix":
            t0 = parts[0][1].target
            if any(s.target != t0 for _, s in parts):
                raise ElicitError("mixture parts must target the same functional")
        object.__setattr__(self, "parts", parts)

    @property
    def k(self):
        if self.mode == "mix":
            return self.parts[0][1].k
        return sum(s.k for _, s in self.parts)

    @property
    def domain(self):
        doms = [s.domain for _, s in self.parts]
        out = doms[0]
        for dm in doms[1:]:
            out = out.intersect(dm) if self.mode == "mix" else out.product(dm)
        return out

    @property
    def strict(self):
        return all(s.strict for _, s in self.parts)

    @property
    def target(self):
        if self.mode == "mix":
            return self.parts[0][1].target
        return stack([s.target for _, s in self.parts])

    def _slices(self, X):
        out, i = [], 0
        for _, s in self.parts:
            out.append(X[..., i : i + s.k])
            i += s.k
        return out

    def values(self, X, y):
        X = _rows(X, self.k)
        if self.mode == "mix":
            return sum(w * s.values(X, y) for w, s in self.parts)
        return sum(w * s.values(xs, y) for (w, s), xs in zip(self.parts, self._slices(X)))

    def expected_closed(self, d, X):
        X = _rows(X, self.k)
        xs = [X] * len(self.parts) if self.mode == "mix" else self._slices(X)
        vals = [s.expected_closed(d, x) for (_, s), x in zip(self.parts, xs)]
        if any(v is None for v in vals):
            return None
        return sum(w * v for (w, _), v in zip(self.parts, vals))

    def kinks(self, x):
        x = np.ravel(np.asarray(x, dtype=float))
        xs = [x] * len(self.parts) if self.mode == "mix" else self._slices(x)
        return tuple(v for (_, s), xi in zip(self.parts, xs) for v in s.kinks(xi))

    def literal(self):
        name = "mix" if self.mode == "mix" else "sum"
        return f"{name}(" + ", ".join(f"{_fmt(w)}*{s.literal()}" for w, s in self.parts) + ")"


def sum_score(parts: Sequence[tuple[float, ScoreSpec]], mode: str = "concat") -> SumScore:
    return SumScore(tuple(parts), mode)


@dataclass(frozen=True)
class Rescaled(ScoreSpec):
    """``lam * S(x, y) + a(y)`` -- the same equivalence class as ``S``."""

    base: ScoreSpec
    lam: float = 1.0
    a: ShapeFunction = ShapeFunction("zero")

    def __post_init__(self):
        object.__setattr__(self, "lam", float(self.lam))
        if not self.lam > 0:
            raise ElicitError("rescaling factor must be positive")

    @property
    def k(self):
        return self.base.k

    @property
    def domain(self):
        return self.base.domain

    @property
    def strict(self):
        return self.base.strict

    @property
    def target(self):
        return self.base.target

    def values(self, X, y):
        return self.lam * self.base.values(X, y) + self.a.value(np.asarray(y, dtype=float))

    def expected_closed(self, d, X):
        v = self.base.expected_closed(d, X)
        if v is None:
            return None
        return self.lam * v + d.expect(self.a)

    def kinks(self, x):
        return self.base.kinks(x)

    def literal(self):
        return f"rescale({self.base.literal()}, {_fmt(self.lam)}, a={self.a.literal()})"


@dataclass(frozen=True)
class NumericOneDim(ScoreSpec):
    """``S(x, y) = int_{z0}^x g(v) V(v, y) dv`` for an oriented scalar identification function."""

    ident_spec: IdentSpec
    g: ShapeFunction
    z0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "z0", float(self.z0))
        if self.ident_spec.k != 1 or not self.ident_spec.asserted_oriented:
            raise ElicitError("numeric construction needs a one-dimensional oriented identification function")

    def _check_g(self, lo, hi):
        grid = np.linspace(lo, hi, 65)
        if np.any(np.asarray(self.g.value(grid)) <= 0):
            raise ShapeError(f"g = {self.g.literal()} is not strictly positive on [{lo:g}, {hi:g}]")

    @property
    def target(self):
        from .functionals import Expectile, Quantile, RatioOfExpectations  # local: avoid widening module API
        from .ident import ExpectileIdent, QuantileIdent, RatioIdent

        v = self.ident_spec
        if isinstance(v, QuantileIdent):
            return Quantile(v.alpha)
        if isinstance(v, ExpectileIdent):
            return Expectile(v.tau)
        if isinstance(v, RatioIdent):
            return Mean() if (v.p, v.q) == ("identity", "one") else RatioOfExpectations(v.p, v.q)
        raise ElicitError("unsupported identification function")

    def ident(self):
        return self.ident_spec

    def _one(self, x: float, y: float) -> float:
        lo, hi = min(self.z0, x), max(self.z0, x)
        self._check_g(lo, hi)
        f = lambda v: float(self.g.value(v)) * float(self.ident_spec.values(np.array([v]), y)[0])  # noqa: E731
        val = quad_piecewise(f, lo, hi, (y,), epsabs=1e-13, epsrel=1e-10)
        return val if x >= self.z0 else -val

    def values(self, X, y):
        X = _rows(X, 1)[..., 0]
        xb, yb = np.broadcast_arrays(X, np.asarray(y, dtype=float))
        out = np.array([self._one(float(a), float(b)) for a, b in zip(xb.ravel(), yb.ravel())])
        return out.reshape(xb.shape)[()] if xb.ndim == 0 else out.reshape(xb.shape)

    def expected_closed(self, d, X):
        # Fubini: Sbar(x) = int_{z0}^x g(v) Vbar(v, F) dv, a 1-D integral of closed forms
        x = np.ravel(_rows(X, 1)[..., 0])
        out = []
        for xv in x:
            lo, hi = min(self.z0, xv), max(self.z0, xv)
            self._check_g(lo, hi)
            f = lambda v: float(self.g.value(v)) * float(self.ident_spec.expected(d, np.array([v]))[0])  # noqa: E731
            val = quad_piecewise(f, lo, hi, (), epsabs=1e-13, epsrel=1e-11)
            out.append(val if xv >= self.z0 else -val)
        X = np.asarray(X, dtype=float)
        shape = X.shape[:-1] if (X.ndim and X.shape[-1] == 1) else X.shape
        return np.array(out).reshape(shape)

    def kinks(self, x):
        return (float(np.ravel(x)[0]), self.z0)

    def literal(self):
        return f"numeric({self.ident_spec.literal()}, g={self.g.literal()}, z0={_fmt(self.z0)})"


def build_numeric_onedim(ident: IdentSpec, g: ShapeFunction, z0: float = 0.0) -> NumericOneDim:
    if not g.positive:
        raise ShapeError(f"g = {g.literal()} must be strictly positive")
    return NumericOneDim(ident, g, z0)


def score(spec: ScoreSpec, x, y) -> float:
    """Realized score ``S(x, y)`` of a single forecast vector."""
    X = np.atleast_1d(np.asarray(x, dtype=float))
    spec.check_domain(X)
    return float(np.asarray(spec.values(X, float(y))))
