"""Row-wise realized-score kernels.

Each kernel comes in two flavours: a vectorized numpy implementation that
accepts any broadcastable shapes, and a numba ``@njit`` loop over aligned
rows ``(X[i], y[i])``.  The numba path is used when numba imports and the
environment variable ``ELICITLAB_DISABLE_NUMBA`` is unset (or ``0``);
otherwise everything runs on numpy.  Both are always importable for the
benchmark.

Shape functions are passed to the compiled kernels as ``(code, param)``
pairs using the integer codes of :mod:`elicitlab.shapes`.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .shapes import ShapeFunction

__all__ = [
    "USE_NUMBA",
    "HAVE_NUMBA",
    "spectral_rows",
    "spectral_rows_numpy",
    "spectral_rows_numba",
    "pinball_rows",
    "pinball_rows_numpy",
    "pinball_rows_numba",
    "expectile_rows",
    "expectile_rows_numpy",
    "expectile_rows_numba",
]

_DISABLED = os.environ.get("ELICITLAB_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------


def spectral_rows_numpy(X, y, q, p, gs: tuple[ShapeFunction, ...], risk_shape: ShapeFunction):
    """Spectral score with ``a(y) = 0``; ``X[..., :-1]`` are quantile forecasts."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    xq = X[..., :-1]
    xk = X[..., -1]
    yy = y[..., None]
    ind = (yy <= xq).astype(float)
    quant = np.zeros(np.broadcast_shapes(xq.shape, yy.shape)[:-1])
    for r, g in enumerate(gs):
        if g.tag == "zero":
            continue
        gx = g.value(xq[..., r])
        gy = np.where(ind[..., r] > 0, g.value(np.broadcast_to(y, ind[..., r].shape)), 0.0)
        quant = quant + (ind[..., r] - q[r]) * gx - ind[..., r] * gy
    inner = xk + np.sum(p / q * (ind * (xq - yy) - q * xq), axis=-1)
    return quant + risk_shape.deriv(xk) * inner - risk_shape.value(xk)


def pinball_rows_numpy(x, y, alpha: float, g: ShapeFunction):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ind = (y <= x).astype(float)
    gy = np.where(ind > 0, g.value(np.broadcast_to(y, ind.shape)), 0.0)
    return (ind - alpha) * g.value(x) - ind * gy


def expectile_rows_numpy(x, y, tau: float):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.abs((y <= x).astype(float) - tau) * (x - y) ** 2


# ---------------------------------------------------------------------------
# compiled kernels
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _shape_value(code, param, z):
        if code == 0:
            return z
        if code == 1:
            return 0.0
        if code == 2:
            return math.exp(z)
        if code == 3:
            if z > 0:
                return z + math.log1p(math.exp(-z))
            return math.log1p(math.exp(z))
        if code == 4:
            return z * z
        if code == 5:
            return -0.5 * param * z * z
        if code == 6:
            return math.atan(z)
        if code == 7:
            return z * z / (1.0 + abs(z))
        if code == 8:
            return 0.5 * param * z * z
        if code == 9:
            return param
        # exp_clip
        return math.exp(min(max(z, -param), param))

    @njit(cache=True)
    def _shape_deriv(code, param, z):
        if code == 0:
            return 1.0
        if code == 1 or code == 9:
            return 0.0
        if code == 2:
            return math.exp(z)
        if code == 3:
            return 0.5 * (1.0 + math.tanh(0.5 * z))
        if code == 4:
            return 2.0 * z
        if code == 5:
            return -param * z
        if code == 6:
            return 1.0 / (1.0 + z * z)
        if code == 7:
            a = abs(z)
            s = 1.0 if z > 0 else (-1.0 if z < 0 else 0.0)
            return s * (z * z + 2.0 * a) / ((1.0 + a) * (1.0 + a))
        if code == 8:
            return param * z
        if abs(z) < param:
            return math.exp(z)
        return 0.0

    @njit(cache=True)
    def _spectral_rows_jit(X, y, q, p, gcodes, gparams, kcode, kparam):
        n, k = X.shape
        out = np.empty(n)
        for i in range(n):
            yi = y[i]
            xk = X[i, k - 1]
            quant = 0.0
            inner = xk
            for r in range(k - 1):
                xr = X[i, r]
                hit = 1.0 if yi <= xr else 0.0
                if gcodes[r] != 1:
                    gx = _shape_value(gcodes[r], gparams[r], xr)
                    gy = _shape_value(gcodes[r], gparams[r], yi) if hit > 0 else 0.0
                    quant += (hit - q[r]) * gx - hit * gy
                inner += p[r] / q[r] * (hit * (xr - yi) - q[r] * xr)
            out[i] = quant + _shape_deriv(kcode, kparam, xk) * inner - _shape_value(kcode, kparam, xk)
        return out

    @njit(cache=True)
    def _pinball_rows_jit(x, y, alpha, code, param):
        n = x.shape[0]
        out = np.empty(n)
        for i in range(n):
            hit = 1.0 if y[i] <= x[i] else 0.0
            gy = _shape_value(code, param, y[i]) if hit > 0 else 0.0
            out[i] = (hit - alpha) * _shape_value(code, param, x[i]) - hit * gy
        return out

    @njit(cache=True)
    def _expectile_rows_jit(x, y, tau):
        n = x.shape[0]
        out = np.empty(n)
        for i in range(n):
            w = (1.0 - tau) if y[i] <= x[i] else tau
            d = x[i] - y[i]
            out[i] = w * d * d
        return out


def spectral_rows_numba(X, y, q, p, gs, risk_shape):
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    gcodes = np.array([g.code for g in gs], dtype=np.int64)
    gparams = np.array([g.kernel_param for g in gs], dtype=np.float64)
    return _spectral_rows_jit(X, y, np.asarray(q, dtype=np.float64), np.asarray(p, dtype=np.float64),
                              gcodes, gparams, risk_shape.code, risk_shape.kernel_param)


def pinball_rows_numba(x, y, alpha, g):
    return _pinball_rows_jit(np.ascontiguousarray(x, dtype=np.float64), np.ascontiguousarray(y, dtype=np.float64),
                             float(alpha), g.code, g.kernel_param)


def expectile_rows_numba(x, y, tau):
    return _expectile_rows_jit(np.ascontiguousarray(x, dtype=np.float64), np.ascontiguousarray(y, dtype=np.float64),
                               float(tau))


def _aligned(X, y, k):
    X = np.asarray(X)
    y = np.asarray(y)
    if k is None:
        return X.ndim == 1 and y.shape == X.shape
    return X.ndim == 2 and X.shape[1] == k and y.shape == (X.shape[0],)


def spectral_rows(X, y, q, p, gs, risk_shape):
    if USE_NUMBA and _aligned(X, y, len(q) + 1):
        return spectral_rows_numba(X, y, q, p, gs, risk_shape)
    return spectral_rows_numpy(X, y, q, p, gs, risk_shape)


def pinball_rows(x, y, alpha, g):
    if USE_NUMBA and _aligned(x, y, None):
        return pinball_rows_numba(x, y, alpha, g)
    return pinball_rows_numpy(x, y, alpha, g)


def expectile_rows(x, y, tau):
    if USE_NUMBA and _aligned(x, y, None):
        return expectile_rows_numba(x, y, tau)
    return expectile_rows_numpy(x, y, tau)
