"""Brownian kernels: heat kernel, first-hitting-time density, killed kernel.

All evaluators accept scalars or numpy arrays. Scalars go through ``math``
(the quadrature routines call these millions of times); arrays are
broadcast with numpy. Exponentials are formed in log space so extreme
arguments underflow to ``0.0`` instead of producing ``nan``; values beyond
the double range (``h`` at ``t`` near 1e-300 with tiny ``x``) come back as
``inf``.
"""
import math

import numpy as np

from ._quad import quad
from .errors import DomainError

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _exp(v):
    try:
        return math.exp(v)
    except OverflowError:
        return math.inf


def _is_scalar(*args):
    return all(np.ndim(a) == 0 for a in args)


def gauss_kernel(t, x):
    """Heat kernel ``exp(-x**2 / 2t) / sqrt(2 pi t)``; requires ``t > 0``."""
    if _is_scalar(t, x):
        t = float(t)
        x = float(x)
        if not t > 0.0:
            raise DomainError(f"gauss_kernel needs t > 0, got t={t!r}")
        return _exp(-x * x / (2.0 * t) - _LOG_SQRT_2PI - 0.5 * math.log(t))
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(~(t > 0.0)):
        raise DomainError("gauss_kernel needs t > 0 everywhere")
    with np.errstate(over="ignore", divide="ignore"):
        return np.exp(-x * x / (2.0 * t) - _LOG_SQRT_2PI - 0.5 * np.log(t))


def hitting_density(t, x):
    """Density in ``t`` of the first time BM started at ``x`` hits 0.

    Extended by zero for ``t <= 0``; also zero for ``x == 0``.
    """
    if _is_scalar(t, x):
        t = float(t)
        ax = abs(float(x))
        if t <= 0.0 or ax == 0.0:
            return 0.0
        return _exp(math.log(ax) - ax * ax / (2.0 * t) - _LOG_SQRT_2PI
                    - 1.5 * math.log(t))
    t, ax = np.broadcast_arrays(np.asarray(t, dtype=float),
                                np.abs(np.asarray(x, dtype=float)))
    out = np.zeros(t.shape)
    ok = (t > 0.0) & (ax > 0.0)
    tt = t[ok]
    aa = ax[ok]
    with np.errstate(over="ignore", divide="ignore"):
        out[ok] = np.exp(np.log(aa) - aa * aa / (2.0 * tt) - _LOG_SQRT_2PI
                         - 1.5 * np.log(tt))
    return out


def killed_kernel(t, x, y):
    """Transition density of BM killed at 0, for ``x, y >= 0``."""
    if _is_scalar(t, x, y):
        if x < 0 or y < 0:
            raise DomainError(f"killed_kernel needs x, y >= 0, got x={x!r}, y={y!r}")
        if not t > 0:
            raise DomainError(f"killed_kernel needs t > 0, got t={t!r}")
        # g(t, x-y) - g(t, x+y) = g(t, x-y) * (1 - exp(-2xy/t)); expm1 keeps
        # precision when xy/t is small.
        return -gauss_kernel(t, x - y) * math.expm1(-2.0 * x * y / t)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 0) or np.any(y < 0):
        raise DomainError("killed_kernel needs x, y >= 0")
    return -gauss_kernel(t, x - y) * np.expm1(-2.0 * x * y / np.asarray(t, dtype=float))


def _check_s(s):
    if np.any(~(np.asarray(s) > 0)):
        raise DomainError(f"Laplace variable must be > 0, got s={s!r}")


def laplace_G(s, x):
    """``int_0^inf exp(-s t) g(t, x) dt = exp(-sqrt(2s)|x|) / sqrt(2s)``."""
    _check_s(s)
    r = np.sqrt(2.0 * np.asarray(s, dtype=float))
    out = np.exp(-r * np.abs(x)) / r
    return float(out) if out.ndim == 0 else out


def laplace_H(s, x):
    """``int_0^inf exp(-s t) h(t, x) dt = exp(-sqrt(2s)|x|)``; this is ``E_x exp(-s T_0)``."""
    _check_s(s)
    out = np.exp(-np.sqrt(2.0 * np.asarray(s, dtype=float)) * np.abs(x))
    return float(out) if out.ndim == 0 else out


def hitting_peaks(x):
    """Breakpoints around the mode ``x**2/3`` of ``h(., x)`` for quadrature."""
    m = x * x / 3.0
    return [m * f for f in (0.05, 0.3, 1.0, 3.0, 10.0, 40.0)]


def convolve_hitting(a, b, t):
    """Numerical ``int_0^t h(t-s, a) h(s, b) ds``.

    The result should equal ``hitting_density(t, a + b)``; this routine is
    the quadrature side of that check. ``h(., 0)`` is the unit mass at
    ``0+``, so a zero level returns the other kernel unchanged.
    """
    if not t > 0:
        raise DomainError(f"convolve_hitting needs t > 0, got t={t!r}")
    if a < 0 or b < 0:
        raise DomainError("convolve_hitting needs a, b >= 0")
    if a == 0.0:
        return hitting_density(t, b)
    if b == 0.0:
        return hitting_density(t, a)
    pts = hitting_peaks(b) + [t - p for p in hitting_peaks(a)]

    def f(s):
        return hitting_density(t - s, a) * hitting_density(s, b)

    return quad(f, 0.0, t, points=pts)[0]
