"""Identification functions ``V(x, y)`` and their expectations.

Pointwise values are vectorized: ``X`` may have shape ``(k,)`` or ``(n, k)``
and ``y`` broadcasts against the leading axes.  Expected values
``Vbar(x, F)`` use cdf / lpe closed forms, so they are exact up to the
accuracy of those primitives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np

from .dist import Distribution
from .errors import ElicitError
from .functionals import (
    Expectile,
    ExpectileVector,
    Functional,
    Mean,
    MeanVariance,
    Quantile,
    QuantileVector,
    RatioOfExpectations,
    SpectralMeasure,
    SpectralWithQuantiles,
    Stacked,
    VaRES,
    expected_expectile_ident,
)
from .shapes import moment_function

__all__ = [
    "IdentSpec",
    "RatioIdent",
    "QuantileIdent",
    "ExpectileIdent",
    "VarEsIdent",
    "SpectralIdent",
    "MeanVarianceIdent",
    "StackedIdent",
    "ident_for",
    "identify",
    "expected_ident",
    "check_orientation",
    "OrientationReport",
    "orientation_steps",
]


def _as_rows(x, k):
    X = np.asarray(x, dtype=float)
    if X.shape[-1] != k:
        raise ElicitError(f"identification function expects dimension {k}, got {X.shape[-1]}")
    return X


class IdentSpec:
    dim: ClassVar[int] = 1
    # orientation proven for Table-1 scalar rows and stacks of them
    asserted_oriented: ClassVar[bool] = True

    @property
    def k(self) -> int:
        return self.dim

    def values(self, x, y) -> np.ndarray:
        raise NotImplementedError

    def expected(self, d: Distribution, x) -> np.ndarray:
        raise NotImplementedError

    def literal(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.literal()


@dataclass(frozen=True)
class RatioIdent(IdentSpec):
    """``V(x, y) = x q(y) - p(y)``."""

    p: str = "identity"
    q: str = "one"

    def __post_init__(self):
        moment_function(self.p)
        moment_function(self.q)

    def values(self, x, y):
        X = _as_rows(x, 1)
        y = np.asarray(y, dtype=float)[..., None]
        return X * moment_function(self.q).value(y) - moment_function(self.p).value(y)

    def expected(self, d, x):
        X = _as_rows(x, 1)
        return X * d.expect(moment_function(self.q)) - d.expect(moment_function(self.p))

    def literal(self):
        return "mean" if (self.p, self.q) == ("identity", "one") else f"ratio({self.p}, {self.q})"


@dataclass(frozen=True)
class QuantileIdent(IdentSpec):
    """``V(x, y) = 1{y <= x} - alpha``."""

    alpha: float

    def values(self, x, y):
        X = _as_rows(x, 1)
        y = np.asarray(y, dtype=float)[..., None]
        return (y <= X).astype(float) - self.alpha

    def expected(self, d, x):
        X = _as_rows(x, 1)
        return np.asarray(d.cdf(X)) - self.alpha

    def literal(self):
        return f"quantile({self.alpha!r})"


@dataclass(frozen=True)
class ExpectileIdent(IdentSpec):
    """``V(x, y) = 2 |1{y <= x} - tau| (x - y)``."""

    tau: float

    def values(self, x, y):
        X = _as_rows(x, 1)
        y = np.asarray(y, dtype=float)[..., None]
        return 2.0 * np.abs((y <= X).astype(float) - self.tau) * (X - y)

    def expected(self, d, x):
        X = _as_rows(x, 1)
        return expected_expectile_ident(d, self.tau, X)

    def literal(self):
        return f"expectile({self.tau!r})"


@dataclass(frozen=True)
class SpectralIdent(IdentSpec):
    """Quantile rows ``1{y <= x_m} - q_m`` and ``x_k - sum_m (p_m/q_m) y 1{y <= x_m}``."""

    mu: SpectralMeasure
    asserted_oriented: ClassVar[bool] = False

    def __post_init__(self):
        if any(q >= 1.0 for q in self.mu.points):
            raise ElicitError("spectral identification needs points in (0, 1); decompose mass at 1 first")

    @property
    def k(self):
        return len(self.mu) + 1

    def values(self, x, y):
        X = _as_rows(x, self.k)
        y = np.asarray(y, dtype=float)[..., None]
        q = np.array(self.mu.points)
        p = np.array(self.mu.weights)
        ind = (y <= X[..., :-1]).astype(float)
        head = ind - q
        last = X[..., -1:] - np.sum(p / q * y * ind, axis=-1, keepdims=True)
        return np.concatenate([head, last], axis=-1)

    def expected(self, d, x):
        X = _as_rows(x, self.k)
        q = np.array(self.mu.points)
        p = np.array(self.mu.weights)
        head = np.asarray(d.cdf(X[..., :-1])) - q
        lp = np.asarray(d.lpe(X[..., :-1]))
        last = X[..., -1:] - np.sum(p / q * lp, axis=-1, keepdims=True)
        return np.concatenate([head, last], axis=-1)

    def literal(self):
        return f"spectral({self.mu.literal_args()})"


@dataclass(frozen=True)
class VarEsIdent(SpectralIdent):
    """``V_1 = 1{y <= x_1} - alpha``, ``V_2 = x_2 - y 1{y <= x_1} / alpha``."""

    mu: SpectralMeasure = field(init=False, repr=False)
    alpha: float = 0.05

    def __init__(self, alpha: float):
        object.__setattr__(self, "alpha", float(alpha))
        object.__setattr__(self, "mu", SpectralMeasure.delta(float(alpha)))

    def literal(self):
        return f"var_es({self.alpha!r})"


@dataclass(frozen=True)
class MeanVarianceIdent(IdentSpec):
    """``(x_1 - y, x_2 + x_1^2 - y^2)``: the mean / second-moment pair seen through ``(m, v) -> (m, v + m^2)``."""

    dim: ClassVar[int] = 2

    def values(self, x, y):
        X = _as_rows(x, 2)
        y = np.asarray(y, dtype=float)
        return np.stack([X[..., 0] - y, X[..., 1] + X[..., 0] ** 2 - y * y], axis=-1)

    def expected(self, d, x):
        X = _as_rows(x, 2)
        return np.stack([X[..., 0] - d.mean, X[..., 1] + X[..., 0] ** 2 - d.moment(2)], axis=-1)

    def literal(self):
        return "mean_variance"


@dataclass(frozen=True)
class StackedIdent(IdentSpec):
    parts: tuple[IdentSpec, ...]

    @property
    def k(self):
        return sum(p.k for p in self.parts)

    @property
    def asserted_oriented(self):
        return all(p.asserted_oriented and p.k == 1 for p in self.parts)

    def _split(self, X):
        out, i = [], 0
        for p in self.parts:
            out.append(X[..., i : i + p.k])
            i += p.k
        return out

    def values(self, x, y):
        X = _as_rows(x, self.k)
        return np.concatenate([p.values(xs, y) for p, xs in zip(self.parts, self._split(X))], axis=-1)

    def expected(self, d, x):
        X = _as_rows(x, self.k)
        return np.concatenate([p.expected(d, xs) for p, xs in zip(self.parts, self._split(X))], axis=-1)

    def literal(self):
        return "stack(" + ", ".join(p.literal() for p in self.parts) + ")"


def ident_for(functional: Functional) -> IdentSpec:
    """Strict identification function paired with a functional."""
    f = functional
    if isinstance(f, Mean):
        return RatioIdent("identity", "one")
    if isinstance(f, RatioOfExpectations):
        return RatioIdent(f.p, f.q)
    if isinstance(f, Quantile):
        return QuantileIdent(f.alpha)
    if isinstance(f, Expectile):
        return ExpectileIdent(f.tau)
    if isinstance(f, QuantileVector):
        return StackedIdent(tuple(QuantileIdent(a) for a in f.levels))
    if isinstance(f, ExpectileVector):
        return StackedIdent(tuple(ExpectileIdent(t) for t in f.levels))
    if isinstance(f, VaRES):
        return VarEsIdent(f.alpha)
    if isinstance(f, SpectralWithQuantiles):
        return SpectralIdent(f.mu)
    if isinstance(f, MeanVariance):
        return MeanVarianceIdent()
    if isinstance(f, Stacked):
        return StackedIdent(tuple(ident_for(p) for p in f.parts))
    raise ElicitError(f"no identification function for {f.literal()}")


def identify(spec: IdentSpec, x, y) -> np.ndarray:
    return spec.values(x, y)


def expected_ident(spec: IdentSpec, d: Distribution, x) -> np.ndarray:
    return spec.expected(d, x)


# ---------------------------------------------------------------------------
# orientation
# ---------------------------------------------------------------------------

_STEP_MAGNITUDES = (1e-3, 1e-2, 1e-1, 0.5, 1.0, 2.0, 4.0)


def orientation_steps(n_steps: int, scale: float) -> np.ndarray:
    """Signed step sizes ``+-{1e-3, 1e-2, 1e-1, 1/2, 1, ...} * scale``."""
    n_mag = max(1, n_steps // 2)
    mags = np.array(_STEP_MAGNITUDES[:n_mag]) * scale
    return np.concatenate([-mags[::-1], mags])


def random_unit_vectors(k: int, n: int, rng: np.random.Generator) -> np.ndarray:
    if k == 1:
        return np.ones((1, 1))
    v = rng.standard_normal((n, k))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


@dataclass
class OrientationReport:
    passed: bool
    asserted: bool
    worst_margin: float
    n_checked: int
    failures: list = field(default_factory=list)

    def to_dict(self):
        return {
            "passed": self.passed,
            "asserted": self.asserted,
            "worst_margin": self.worst_margin,
            "n_checked": self.n_checked,
            "failures": self.failures[:10],
        }


def check_orientation(spec: IdentSpec, d: Distribution, t, rays: int = 64, steps: int = 10,
                      seed: int = 0, domain=None, scale: float | None = None) -> OrientationReport:
    """Sign test ``sign(v . Vbar(t + s v)) == sign(s)`` on random rays.

    ``asserted`` records whether orientation is a proven property of ``spec``
    (scalar Table-1 rows and stacks of them) or only observed.
    """
    t = np.asarray(t, dtype=float)
    rng = np.random.default_rng(seed)
    V = random_unit_vectors(spec.k, rays, rng)
    S = orientation_steps(steps, d.scale() if scale is None else scale)
    pts = t[None, None, :] + S[None, :, None] * V[:, None, :]
    flat = pts.reshape(-1, spec.k)
    ok = np.ones(len(flat), bool) if domain is None else domain.contains(flat)
    vbar = spec.expected(d, flat)
    proj = np.einsum("ij,ij->i", vbar, np.repeat(V, len(S), axis=0))
    signed = np.sign(np.tile(S, len(V))) * proj
    signed = np.where(ok, signed, np.inf)
    bad = np.flatnonzero(signed <= 0)
    failures = [{"x": flat[i].tolist(), "margin": float(signed[i])} for i in bad]
    return OrientationReport(
        passed=not failures,
        asserted=bool(spec.asserted_oriented),
        worst_margin=float(np.min(signed)) if np.isfinite(signed).any() else float("nan"),
        n_checked=int(ok.sum()),
        failures=failures,
    )
