"""Parametric laws on the real line.

Every distribution exposes the primitives the rest of the library is built
on: ``cdf``, ``pdf``, ``quantile`` (lower generalized inverse), ``lpe`` (the
lower partial expectation ``E[Y 1{Y <= x}]``) and ``partial(g, x)``, the
lower partial expectation of a catalog shape function.  Closed forms are
used where they exist; otherwise adaptive quadrature on the density.

Instances are frozen dataclasses and therefore hashable and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate, special

from .errors import ElicitError, MomentError
from .shapes import ShapeFunction

__all__ = [
    "Distribution",
    "Normal",
    "StudentT",
    "Lognormal",
    "Uniform",
    "Exponential",
    "Mixture",
    "TwoPoint",
    "Shifted",
    "mix",
    "cdf",
    "quantile",
    "lpe",
]

QUAD_EPSABS = 1e-13
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 200
QUANTILE_XTOL = 1e-12


def _out(a):
    a = np.asarray(a, dtype=float)
    return a[()] if a.ndim == 0 else a


def _check_level(alpha):
    a = np.asarray(alpha, dtype=float)
    if np.any(~(a > 0)) or np.any(~(a < 1)):
        raise ElicitError(f"probability level must lie in (0, 1), got {alpha!r}")
    return a


class Distribution:
    """Shared machinery; concrete families override what they can do in closed form."""

    # moments of order strictly below this are finite
    max_moment: float = math.inf

    # -- primitives every family defines ----------------------------------

    def cdf(self, x):
        raise NotImplementedError

    def pdf(self, x):
        raise NotImplementedError

    @property
    def mean(self) -> float:
        raise NotImplementedError

    def support(self) -> tuple[float, float]:
        return (-math.inf, math.inf)

    def atoms(self) -> tuple[tuple[float, float], ...]:
        """Point masses as ``(location, mass)`` pairs."""
        return ()

    @property
    def continuous(self) -> bool:
        return not self.atoms()

    def literal(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.literal()

    # -- derived quantities ---------------------------------------------------

    def require_moment(self, k: int) -> None:
        if not k < self.max_moment:
            raise MomentError(f"{self.literal()} has no finite moment of order {k}")

    @property
    def second_moment(self) -> float:
        self.require_moment(2)
        return self.expect(ShapeFunction("square"))

    @property
    def variance(self) -> float:
        return self.second_moment - self.mean**2

    def moment(self, k: int) -> float:
        self.require_moment(k)
        if k == 1:
            return self.mean
        if k == 2:
            return self.second_moment
        return self._quad_expect(lambda y: y**k)

    def scale(self) -> float:
        """Natural length scale: the standard deviation, or IQR/1.349 when it is infinite."""
        if self.max_moment > 2:
            return math.sqrt(self.variance)
        q1, q3 = self.quantile(0.25), self.quantile(0.75)
        return (q3 - q1) / 1.349

    def location(self) -> float:
        return float(self.quantile(0.5))

    def quantile(self, alpha):
        a = _check_level(alpha)
        if a.ndim == 0:
            return self._bisect_quantile(float(a))
        return np.array([self._bisect_quantile(float(v)) for v in a.ravel()]).reshape(a.shape)

    def _bisect_quantile(self, alpha: float) -> float:
        """Smallest x with cdf(x) >= alpha, by bracketed bisection."""
        loc = self.location_hint()
        sc = self.scale_hint()
        lo, hi = loc - 40.0 * sc, loc + 40.0 * sc
        step = 40.0 * sc
        while self.cdf(lo) >= alpha:
            step *= 2.0
            lo = loc - step
        step = 40.0 * sc
        while self.cdf(hi) < alpha:
            step *= 2.0
            hi = loc + step
        # invariant: cdf(lo) < alpha <= cdf(hi)
        while hi - lo > QUANTILE_XTOL * max(1.0, abs(hi)):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if self.cdf(mid) >= alpha:
                hi = mid
            else:
                lo = mid
        for y, _ in self.atoms():
            if lo < y <= hi or abs(y - hi) <= 4 * QUANTILE_XTOL * max(1.0, abs(y)):
                if self.cdf(y) >= alpha and self.cdf(np.nextafter(y, -math.inf)) < alpha:
                    return float(y)
        return float(hi)

    def location_hint(self) -> float:
        return 0.0

    def scale_hint(self) -> float:
        return 1.0

    def has_unique_quantile(self, alpha: float) -> bool:
        q = float(self.quantile(alpha))
        h = 1e-7 * max(1.0, abs(q), self.scale_hint())
        return bool(self.cdf(q + h) > alpha)

    def lpe(self, x):
        """Lower partial expectation ``E[Y 1{Y <= x}]``."""
        self.require_moment(1)
        return self._lpe(x)

    def _lpe(self, x):
        return self._quad_partial(lambda y: y, x)

    def partial(self, g: ShapeFunction, x):
        """``E[g(Y) 1{Y <= x}]`` for a catalog shape ``g``."""
        closed = self._partial_closed(g, x)
        if closed is not None:
            return closed
        return self._quad_partial(g.value, x)

    def expect(self, g: ShapeFunction) -> float:
        """``E[g(Y)]``."""
        if g.tag == "identity":
            self.require_moment(1)
            return self.mean
        if g.tag in ("square", "negsquare", "alpha_half_square", "phi"):
            self.require_moment(2 if g.tag != "phi" else 1)
        return float(self.partial(g, math.inf))

    def _partial_closed(self, g: ShapeFunction, x):
        t = g.tag
        if t == "zero":
            return _out(np.zeros_like(np.asarray(x, dtype=float)))
        if t == "const":
            return _out(g.param * np.asarray(self.cdf(x)))
        if t == "identity":
            return self.lpe(x)
        if t in ("square", "negsquare", "alpha_half_square"):
            self.require_moment(2)
            lp2 = self._lp2(x)
            if lp2 is None:
                return None
            factor = {"square": 1.0, "negsquare": -0.5 * (g.param or 0.0), "alpha_half_square": 0.5 * (g.param or 0.0)}[t]
            return _out(factor * np.asarray(lp2))
        if t == "exp":
            return self._lpexp(x)
        return None

    def _lp2(self, x):
        """Closed form of ``E[Y^2 1{Y <= x}]`` or None."""
        return None

    def _lpexp(self, x):
        """Closed form of ``E[exp(Y) 1{Y <= x}]`` or None."""
        return None

    # -- quadrature ----------------------------------------------------------

    def _quad_partial(self, func, x):
        xs = np.asarray(x, dtype=float)
        vals = np.array([self._quad_partial_scalar(func, float(v)) for v in xs.ravel()])
        return _out(vals.reshape(xs.shape))

    def _quad_partial_scalar(self, func, x: float) -> float:
        lo, hi = self.support()
        total = 0.0
        for y, m in self.atoms():
            if y <= x:
                total += m * float(func(y))
        if self.continuous or self._has_density():
            upper = min(x, hi)
            if upper > lo:
                total += quad_piecewise(lambda y: func(y) * self.pdf(y), lo, upper, self._breaks())
        return total

    def _has_density(self) -> bool:
        return False

    def _breaks(self) -> tuple[float, ...]:
        return ()

    def _quad_expect(self, func) -> float:
        return self._quad_partial_scalar(func, math.inf)

    def shift(self, c: float) -> Distribution:
        return Shifted(self, float(c))


def quad_piecewise(func, lo: float, hi: float, breaks=(), epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL) -> float:
    """Adaptive quadrature of ``func`` over ``[lo, hi]`` split at ``breaks``.

    Infinite end points are handled by scipy's variable transformation; every
    finite break inside the range becomes a subinterval boundary so kinks and
    jumps are never straddled.
    """
    if not hi > lo:
        return 0.0
    pts = sorted({float(b) for b in breaks if lo < b < hi and math.isfinite(b)})
    edges = [lo, *pts, hi]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if math.isinf(a) and math.isinf(b):
            left, _ = integrate.quad(func, -math.inf, 0.0, epsabs=epsabs, epsrel=epsrel, limit=QUAD_LIMIT)
            right, _ = integrate.quad(func, 0.0, math.inf, epsabs=epsabs, epsrel=epsrel, limit=QUAD_LIMIT)
            total += left + right
        else:
            val, _ = integrate.quad(func, a, b, epsabs=epsabs, epsrel=epsrel, limit=QUAD_LIMIT)
            total += val
    return total


# ---------------------------------------------------------------------------
# continuous families
# ---------------------------------------------------------------------------


class _Continuous(Distribution):
    def _has_density(self) -> bool:
        return True

    def has_unique_quantile(self, alpha: float) -> bool:
        _check_level(alpha)
        return True


@dataclass(frozen=True)
class Normal(_Continuous):
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ElicitError("normal needs sigma > 0")

    def literal(self):
        return f"normal({self.mu!r}, {self.sigma!r})"

    def _z(self, x):
        return (np.asarray(x, dtype=float) - self.mu) / self.sigma

    def cdf(self, x):
        return _out(special.ndtr(self._z(x)))

    def pdf(self, x):
        z = self._z(x)
        return _out(np.exp(-0.5 * z * z) / (self.sigma * math.sqrt(2 * math.pi)))

    def quantile(self, alpha):
        a = _check_level(alpha)
        return _out(self.mu + self.sigma * special.ndtri(a))

    @property
    def mean(self):
        return float(self.mu)

    @property
    def second_moment(self):
        return self.mu**2 + self.sigma**2

    @property
    def variance(self):
        return self.sigma**2

    def location_hint(self):
        return self.mu

    def scale_hint(self):
        return self.sigma

    def _lpe(self, x):
        z = self._z(x)
        phi = np.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
        phi = np.where(np.isfinite(z), phi, 0.0)
        return _out(self.mu * special.ndtr(z) - self.sigma * phi)

    def _lp2(self, x):
        z = self._z(x)
        phi = np.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
        xs = np.asarray(x, dtype=float)
        with np.errstate(invalid="ignore"):
            tail = np.where(np.isfinite(z), self.sigma * phi * (self.mu + xs), 0.0)
        return _out((self.mu**2 + self.sigma**2) * special.ndtr(z) - tail)

    def _lpexp(self, x):
        z = self._z(x)
        return _out(math.exp(self.mu + 0.5 * self.sigma**2) * special.ndtr(z - self.sigma))

    def shift(self, c):
        return Normal(self.mu + c, self.sigma)


@dataclass(frozen=True)
class StudentT(_Continuous):
    nu: float
    loc: float = 0.0
    scale_: float = 1.0

    def __post_init__(self):
        if not self.nu > 1:
            raise ElicitError("student_t needs nu > 1 (finite mean)")
        if not self.scale_ > 0:
            raise ElicitError("student_t needs scale > 0")

    @property
    def max_moment(self):
        return float(self.nu)

    def literal(self):
        return f"student_t({self.nu!r}, {self.loc!r}, {self.scale_!r})"

    def _z(self, x):
        return (np.asarray(x, dtype=float) - self.loc) / self.scale_

    def _std_pdf(self, z, nu):
        logc = special.gammaln((nu + 1) / 2) - special.gammaln(nu / 2) - 0.5 * math.log(nu * math.pi)
        return np.exp(logc - (nu + 1) / 2 * np.log1p(z * z / nu))

    def cdf(self, x):
        return _out(special.stdtr(self.nu, self._z(x)))

    def pdf(self, x):
        return _out(self._std_pdf(self._z(x), self.nu) / self.scale_)

    def quantile(self, alpha):
        a = _check_level(alpha)
        z = special.stdtrit(self.nu, a)
        # stdtrit is only good to ~1e-11 in probability; polish with Newton
        for _ in range(2):
            z = z - (special.stdtr(self.nu, z) - a) / self._std_pdf(z, self.nu)
        return _out(self.loc + self.scale_ * z)

    @property
    def mean(self):
        return float(self.loc)

    @property
    def second_moment(self):
        self.require_moment(2)
        return self.loc**2 + self.scale_**2 * self.nu / (self.nu - 2)

    @property
    def variance(self):
        self.require_moment(2)
        return self.scale_**2 * self.nu / (self.nu - 2)

    def location_hint(self):
        return self.loc

    def scale_hint(self):
        return self.scale_

    def _std_lpe(self, z):
        # E[T 1{T <= z}] = -(nu + z^2)/(nu - 1) f_nu(z)
        nu = self.nu
        with np.errstate(invalid="ignore"):
            return np.where(np.isfinite(z), -(nu + z * z) / (nu - 1) * self._std_pdf(z, nu), 0.0)

    def _lpe(self, x):
        z = self._z(x)
        return _out(self.loc * special.stdtr(self.nu, z) + self.scale_ * self._std_lpe(z))

    def _lp2(self, x):
        # E[T^2 1{T <= z}] = nu(nu-1)/(nu-2) F_{nu-2}(z sqrt((nu-2)/nu)) - nu F_nu(z)
        nu = self.nu
        z = self._z(x)
        if nu > 3:
            m2 = nu * (nu - 1) / (nu - 2) * special.stdtr(nu - 2, z * math.sqrt((nu - 2) / nu)) - nu * special.stdtr(nu, z)
        else:
            return None
        m1 = self._std_lpe(z)
        m0 = special.stdtr(nu, z)
        s, c = self.scale_, self.loc
        return _out(c * c * m0 + 2 * c * s * m1 + s * s * m2)

    def shift(self, c):
        return StudentT(self.nu, self.loc + c, self.scale_)


@dataclass(frozen=True)
class Lognormal(_Continuous):
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ElicitError("lognormal needs sigma > 0")

    def literal(self):
        return f"lognormal({self.mu!r}, {self.sigma!r})"

    def support(self):
        return (0.0, math.inf)

    def _z(self, x):
        xs = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(xs > 0, (np.log(np.where(xs > 0, xs, 1.0)) - self.mu) / self.sigma, -np.inf)

    def cdf(self, x):
        return _out(special.ndtr(self._z(x)))

    def pdf(self, x):
        xs = np.asarray(x, dtype=float)
        z = self._z(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.exp(-0.5 * z * z) / (np.where(xs > 0, xs, 1.0) * self.sigma * math.sqrt(2 * math.pi))
        return _out(np.where(xs > 0, val, 0.0))

    def quantile(self, alpha):
        a = _check_level(alpha)
        return _out(np.exp(self.mu + self.sigma * special.ndtri(a)))

    @property
    def mean(self):
        return math.exp(self.mu + 0.5 * self.sigma**2)

    @property
    def second_moment(self):
        return math.exp(2 * self.mu + 2 * self.sigma**2)

    @property
    def variance(self):
        return (math.exp(self.sigma**2) - 1) * math.exp(2 * self.mu + self.sigma**2)

    def location_hint(self):
        return math.exp(self.mu)

    def scale_hint(self):
        return math.sqrt(self.variance)

    def _lpe(self, x):
        return _out(self.mean * special.ndtr(self._z(x) - self.sigma))

    def _lp2(self, x):
        return _out(self.second_moment * special.ndtr(self._z(x) - 2 * self.sigma))

    def _breaks(self):
        return (math.exp(self.mu),)


@dataclass(frozen=True)
class Uniform(_Continuous):
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not self.b > self.a:
            raise ElicitError("uniform needs b > a")

    def literal(self):
        return f"uniform({self.a!r}, {self.b!r})"

    def support(self):
        return (self.a, self.b)

    def _clip(self, x):
        return np.clip(np.asarray(x, dtype=float), self.a, self.b)

    def cdf(self, x):
        return _out((self._clip(x) - self.a) / (self.b - self.a))

    def pdf(self, x):
        xs = np.asarray(x, dtype=float)
        return _out(np.where((xs >= self.a) & (xs <= self.b), 1.0 / (self.b - self.a), 0.0))

    def quantile(self, alpha):
        a = _check_level(alpha)
        return _out(self.a + a * (self.b - self.a))

    @property
    def mean(self):
        return 0.5 * (self.a + self.b)

    @property
    def second_moment(self):
        return (self.a**2 + self.a * self.b + self.b**2) / 3.0

    @property
    def variance(self):
        return (self.b - self.a) ** 2 / 12.0

    def location_hint(self):
        return self.mean

    def scale_hint(self):
        return self.b - self.a

    def _lpe(self, x):
        c = self._clip(x)
        return _out((c * c - self.a**2) / (2 * (self.b - self.a)))

    def _lp2(self, x):
        c = self._clip(x)
        return _out((c**3 - self.a**3) / (3 * (self.b - self.a)))

    def _lpexp(self, x):
        c = self._clip(x)
        return _out((np.exp(c) - math.exp(self.a)) / (self.b - self.a))

    def shift(self, c):
        return Uniform(self.a + c, self.b + c)


@dataclass(frozen=True)
class Exponential(_Continuous):
    rate: float = 1.0

    def __post_init__(self):
        if not self.rate > 0:
            raise ElicitError("exponential needs rate > 0")

    def literal(self):
        return f"exponential({self.rate!r})"

    def support(self):
        return (0.0, math.inf)

    def _pos(self, x):
        return np.maximum(np.asarray(x, dtype=float), 0.0)

    def cdf(self, x):
        return _out(-np.expm1(-self.rate * self._pos(x)))

    def pdf(self, x):
        xs = np.asarray(x, dtype=float)
        return _out(np.where(xs >= 0, self.rate * np.exp(-self.rate * self._pos(xs)), 0.0))

    def quantile(self, alpha):
        a = _check_level(alpha)
        return _out(-np.log1p(-a) / self.rate)

    @property
    def mean(self):
        return 1.0 / self.rate

    @property
    def second_moment(self):
        return 2.0 / self.rate**2

    @property
    def variance(self):
        return 1.0 / self.rate**2

    def location_hint(self):
        return 1.0 / self.rate

    def scale_hint(self):
        return 1.0 / self.rate

    def _lpe(self, x):
        lx = self.rate * self._pos(x)
        with np.errstate(invalid="ignore"):
            val = (-np.expm1(-lx) - lx * np.exp(-lx)) / self.rate
        return _out(np.where(np.isinf(lx), 1.0 / self.rate, val))

    def _lp2(self, x):
        lx = self.rate * self._pos(x)
        with np.errstate(invalid="ignore"):
            val = (2.0 - np.exp(-lx) * (lx * lx + 2 * lx + 2)) / self.rate**2
        return _out(np.where(np.isinf(lx), 2.0 / self.rate**2, val))

    def _lpexp(self, x):
        lam = self.rate
        xp = self._pos(x)
        if np.any(np.isinf(xp)) and lam <= 1:
            return None
        if lam == 1.0:
            return _out(xp)
        return _out(lam * np.expm1((1 - lam) * xp) / (1 - lam))


# ---------------------------------------------------------------------------
# discrete and composite
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoPoint(Distribution):
    """Mass ``p`` at ``y1`` and ``1 - p`` at ``y2``."""

    y1: float
    y2: float
    p: float

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise ElicitError("two_point needs 0 < p < 1")
        if not self.y1 < self.y2:
            raise ElicitError("two_point needs y1 < y2")

    def literal(self):
        return f"two_point({self.y1!r}, {self.y2!r}, {self.p!r})"

    def atoms(self):
        return ((float(self.y1), float(self.p)), (float(self.y2), float(1 - self.p)))

    def support(self):
        return (self.y1, self.y2)

    def cdf(self, x):
        xs = np.asarray(x, dtype=float)
        return _out(np.where(xs >= self.y2, 1.0, np.where(xs >= self.y1, self.p, 0.0)))

    def pdf(self, x):
        raise ElicitError("two_point has no density")

    def quantile(self, alpha):
        a = _check_level(alpha)
        return _out(np.where(a <= self.p, float(self.y1), float(self.y2)))

    @property
    def mean(self):
        return self.p * self.y1 + (1 - self.p) * self.y2

    @property
    def second_moment(self):
        return self.p * self.y1**2 + (1 - self.p) * self.y2**2

    def location_hint(self):
        return self.mean

    def scale_hint(self):
        return self.y2 - self.y1

    def _lpe(self, x):
        xs = np.asarray(x, dtype=float)
        return _out(np.where(xs >= self.y1, self.p * self.y1, 0.0) + np.where(xs >= self.y2, (1 - self.p) * self.y2, 0.0))

    def partial(self, g, x):
        xs = np.asarray(x, dtype=float)
        v1, v2 = float(g.value(self.y1)), float(g.value(self.y2))
        return _out(np.where(xs >= self.y1, self.p * v1, 0.0) + np.where(xs >= self.y2, (1 - self.p) * v2, 0.0))

    def scale(self):
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class Mixture(Distribution):
    components: tuple[tuple[float, Distribution], ...]

    def __post_init__(self):
        comps = tuple((float(w), d) for w, d in self.components)
        if not comps:
            raise ElicitError("mixture needs at least one component")
        ws = np.array([w for w, _ in comps])
        if np.any(ws <= 0):
            raise ElicitError("mixture weights must be positive")
        if abs(ws.sum() - 1.0) > 1e-12:
            raise ElicitError(f"mixture weights must sum to 1, got {float(ws.sum()):.12g}")
        object.__setattr__(self, "components", comps)

    @property
    def max_moment(self):
        return min(d.max_moment for _, d in self.components)

    def literal(self):
        inner = ", ".join(f"{w!r}*{d.literal()}" for w, d in self.components)
        return f"mixture({inner})"

    def _sum(self, fn):
        return _out(sum(w * np.asarray(fn(d), dtype=float) for w, d in self.components))

    def cdf(self, x):
        return self._sum(lambda d: d.cdf(x))

    def pdf(self, x):
        return self._sum(lambda d: d.pdf(x) if d._has_density() else np.zeros_like(np.asarray(x, dtype=float)))

    def _has_density(self):
        return any(d._has_density() for _, d in self.components)

    def atoms(self):
        out = []
        for w, d in self.components:
            out.extend((y, w * m) for y, m in d.atoms())
        return tuple(out)

    def support(self):
        sup = [d.support() for _, d in self.components]
        return (min(s[0] for s in sup), max(s[1] for s in sup))

    @property
    def mean(self):
        return float(sum(w * d.mean for w, d in self.components))

    @property
    def second_moment(self):
        self.require_moment(2)
        return float(sum(w * d.second_moment for w, d in self.components))

    def location_hint(self):
        return float(sum(w * d.location_hint() for w, d in self.components))

    def scale_hint(self):
        loc = self.location_hint()
        return float(max(d.scale_hint() + abs(d.location_hint() - loc) for _, d in self.components))

    def _lpe(self, x):
        return self._sum(lambda d: d.lpe(x))

    def partial(self, g, x):
        return self._sum(lambda d: d.partial(g, x))

    def moment(self, k):
        self.require_moment(k)
        return float(sum(w * d.moment(k) for w, d in self.components))


@dataclass(frozen=True)
class Shifted(Distribution):
    """Law of ``Y + c`` for ``Y ~ base``."""

    base: Distribution
    c: float

    @property
    def max_moment(self):
        return self.base.max_moment

    def literal(self):
        return f"shift({self.base.literal()}, {self.c!r})"

    def support(self):
        lo, hi = self.base.support()
        return (lo + self.c, hi + self.c)

    def atoms(self):
        return tuple((y + self.c, m) for y, m in self.base.atoms())

    def _has_density(self):
        return self.base._has_density()

    def cdf(self, x):
        return self.base.cdf(np.asarray(x, dtype=float) - self.c)

    def pdf(self, x):
        return self.base.pdf(np.asarray(x, dtype=float) - self.c)

    def quantile(self, alpha):
        return _out(np.asarray(self.base.quantile(alpha)) + self.c)

    def has_unique_quantile(self, alpha):
        return self.base.has_unique_quantile(alpha)

    @property
    def mean(self):
        return self.base.mean + self.c

    @property
    def second_moment(self):
        return self.base.second_moment + 2 * self.c * self.base.mean + self.c**2

    def location_hint(self):
        return self.base.location_hint() + self.c

    def scale_hint(self):
        return self.base.scale_hint()

    def _lpe(self, x):
        u = np.asarray(x, dtype=float) - self.c
        return _out(np.asarray(self.base.lpe(u)) + self.c * np.asarray(self.base.cdf(u)))

    def _breaks(self):
        return tuple(b + self.c for b in self.base._breaks())

    def shift(self, c):
        return Shifted(self.base, self.c + c)


def mix(parts: Sequence[tuple[float, Distribution]]) -> Distribution:
    """Finite mixture ``sum_i w_i F_i``; a single unit-weight part is returned as is."""
    parts = tuple((float(w), d) for w, d in parts)
    if len(parts) == 1 and parts[0][0] == 1.0:
        return parts[0][1]
    return Mixture(parts)


def cdf(d: Distribution, x):
    return d.cdf(x)


def quantile(d: Distribution, alpha):
    return d.quantile(alpha)


def lpe(d: Distribution, x):
    return d.lpe(x)
