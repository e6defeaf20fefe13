"""Catalog of one-dimensional shape functions.

Score families are assembled from a small closed set of scalar functions:
quantile shapes ``G``, the risk-measure shape and the Bregman ``phi``.  Each
entry knows its value, first and second derivatives and, where it is
expressible inside the catalog, its antiderivative.  Global monotonicity / convexity flags let score
constructors reject unusable combinations early.

All evaluation methods accept scalars or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError

__all__ = ["ShapeFunction", "SHAPE_TAGS", "shape", "MOMENT_TAGS", "moment_function"]

# integer codes shared with the compiled kernels
CODES = {
    "identity": 0,
    "zero": 1,
    "exp": 2,
    "softplus": 3,
    "square": 4,
    "negsquare": 5,
    "atan": 6,
    "phi": 7,
    "alpha_half_square": 8,
    "const": 9,
    "exp_clip": 10,
}

SHAPE_TAGS = tuple(CODES)

# tags that carry a numeric parameter, with the default used when omitted
_PARAM_DEFAULT = {"negsquare": 1.0, "alpha_half_square": None, "const": 1.0, "exp_clip": 10.0}

# (increasing, strictly increasing, convex, strictly convex, bounded)
_FLAGS = {
    "identity": (True, True, True, False, False),
    "zero": (True, False, True, False, True),
    "exp": (True, True, True, True, False),
    "softplus": (True, True, True, True, False),
    "square": (False, False, True, True, False),
    "negsquare": (False, False, False, False, False),
    "atan": (True, True, False, False, True),
    "phi": (False, False, True, True, False),
    "alpha_half_square": (False, False, True, True, False),
    "const": (True, False, True, False, True),
    "exp_clip": (True, False, False, False, True),
}


@dataclass(frozen=True)
class ShapeFunction:
    """A catalog entry ``tag`` with an optional scalar parameter.

    ``negsquare(c)`` is ``-c z^2 / 2``, ``alpha_half_square(a)`` is
    ``(a/2) z^2``, ``const(c)`` is the constant ``c``, ``phi`` is
    ``z^2 / (1 + |z|)`` and ``exp_clip(c)`` is ``exp(clip(z, -c, c))``.
    """

    tag: str
    param: float | None = field(default=None)

    def __post_init__(self):
        if self.tag not in CODES:
            raise ShapeError(f"unknown shape function {self.tag!r}; known: {', '.join(SHAPE_TAGS)}")
        if self.tag in _PARAM_DEFAULT:
            if self.param is None:
                if _PARAM_DEFAULT[self.tag] is None:
                    raise ShapeError(f"shape {self.tag!r} needs a parameter")
                object.__setattr__(self, "param", float(_PARAM_DEFAULT[self.tag]))
            else:
                object.__setattr__(self, "param", float(self.param))
        elif self.param is not None:
            raise ShapeError(f"shape {self.tag!r} takes no parameter")
        if self.tag == "exp_clip" and self.param <= 0:
            raise ShapeError("exp_clip needs a positive clip level")

    # -- metadata -----------------------------------------------------------

    @property
    def code(self) -> int:
        return CODES[self.tag]

    @property
    def kernel_param(self) -> float:
        return 0.0 if self.param is None else self.param

    def _flags(self):
        inc, sinc, cvx, scvx, bnd = _FLAGS[self.tag]
        p = self.param
        if self.tag == "negsquare":
            if p == 0:
                return (True, False, True, False, True)
            if p < 0:
                return (False, False, True, True, False)
        if self.tag == "alpha_half_square" and p <= 0:
            return (False, False, p == 0, False, p == 0)
        if self.tag == "const":
            return (True, False, True, False, True)
        return inc, sinc, cvx, scvx, bnd

    @property
    def increasing(self) -> bool:
        return self._flags()[0]

    @property
    def strictly_increasing(self) -> bool:
        return self._flags()[1]

    @property
    def convex(self) -> bool:
        return self._flags()[2]

    @property
    def strictly_convex(self) -> bool:
        return self._flags()[3]

    @property
    def bounded(self) -> bool:
        return self._flags()[4]

    @property
    def positive(self) -> bool:
        """True when the function is strictly positive on all of R."""
        if self.tag in ("exp", "softplus", "exp_clip"):
            return True
        return self.tag == "const" and self.param > 0

    def literal(self) -> str:
        if self.param is None:
            return self.tag
        return f"{self.tag}({self.param!r})"

    __str__ = literal

    # -- evaluation ---------------------------------------------------------

    def value(self, z):
        z = np.asarray(z, dtype=float)
        t, p = self.tag, self.param
        if t == "identity":
            out = z.copy()
        elif t == "zero":
            out = np.zeros_like(z)
        elif t == "exp":
            out = np.exp(z)
        elif t == "softplus":
            out = np.logaddexp(0.0, z)
        elif t == "square":
            out = z * z
        elif t == "negsquare":
            out = -0.5 * p * z * z
        elif t == "atan":
            out = np.arctan(z)
        elif t == "phi":
            out = z * z / (1.0 + np.abs(z))
        elif t == "alpha_half_square":
            out = 0.5 * p * z * z
        elif t == "const":
            out = np.full_like(z, p)
        else:  # exp_clip
            out = np.exp(np.clip(z, -p, p))
        return out[()] if out.ndim == 0 else out

    __call__ = value

    def deriv(self, z):
        z = np.asarray(z, dtype=float)
        t, p = self.tag, self.param
        if t == "identity":
            out = np.ones_like(z)
        elif t in ("zero", "const"):
            out = np.zeros_like(z)
        elif t == "exp":
            out = np.exp(z)
        elif t == "softplus":
            out = 0.5 * (1.0 + np.tanh(0.5 * z))
        elif t == "square":
            out = 2.0 * z
        elif t == "negsquare":
            out = -p * z
        elif t == "atan":
            out = 1.0 / (1.0 + z * z)
        elif t == "phi":
            a = np.abs(z)
            out = np.sign(z) * (z * z + 2.0 * a) / (1.0 + a) ** 2
        elif t == "alpha_half_square":
            out = p * z
        else:  # exp_clip
            out = np.where(np.abs(z) < p, np.exp(np.clip(z, -p, p)), 0.0)
        return out[()] if out.ndim == 0 else out

    def second(self, z):
        z = np.asarray(z, dtype=float)
        t, p = self.tag, self.param
        if t in ("identity", "zero", "const"):
            out = np.zeros_like(z)
        elif t == "exp":
            out = np.exp(z)
        elif t == "softplus":
            s = 0.5 * (1.0 + np.tanh(0.5 * z))
            out = s * (1.0 - s)
        elif t == "square":
            out = np.full_like(z, 2.0)
        elif t == "negsquare":
            out = np.full_like(z, -p)
        elif t == "atan":
            out = -2.0 * z / (1.0 + z * z) ** 2
        elif t == "phi":
            out = 2.0 / (1.0 + np.abs(z)) ** 3
        elif t == "alpha_half_square":
            out = np.full_like(z, p)
        else:
            out = np.where(np.abs(z) < p, np.exp(np.clip(z, -p, p)), 0.0)
        return out[()] if out.ndim == 0 else out

    def antiderivative(self) -> ShapeFunction | None:
        """Catalog entry whose derivative is this one (up to a constant), if any."""
        if self.tag == "exp":
            return self
        if self.tag == "zero":
            return self
        if self.tag == "const" and self.param == 1.0:
            return ShapeFunction("identity")
        if self.tag == "identity":
            return ShapeFunction("alpha_half_square", 1.0)
        return None


def shape(tag: str, param: float | None = None) -> ShapeFunction:
    return ShapeFunction(tag, param)


# numerator / denominator catalog for ratios of expectations
MOMENT_TAGS = {
    "identity": ShapeFunction("identity"),
    "square": ShapeFunction("square"),
    "one": ShapeFunction("const", 1.0),
    "exp-clip": ShapeFunction("exp_clip", 10.0),
}


def moment_function(tag: str) -> ShapeFunction:
    try:
        return MOMENT_TAGS[tag]
    except KeyError:
        raise ShapeError(f"unknown moment function {tag!r}; known: {', '.join(MOMENT_TAGS)}") from None
