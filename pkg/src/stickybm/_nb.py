"""Compiled scalar integrands for the nested quadratures.

QUADPACK drives the outer levels from Python; the innermost
Gaussian-tail integrals in position are smooth after scaling by
``sqrt(s)`` and use a fixed 64-point Gauss-Legendre rule on ``[0, 12]``.
"""
import math

import numpy as np
from numba import njit

_GL_X, _GL_W = np.polynomial.legendre.leggauss(64)
# map [-1, 1] -> [0, 12]
TAIL_Z = 6.0 * (_GL_X + 1.0)
TAIL_W = 6.0 * _GL_W
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@njit(cache=True)
def h(s, a):
    a = abs(a)
    if s <= 0.0 or a == 0.0:
        return 0.0
    return math.exp(math.log(a) - a * a / (2.0 * s) - 0.5 * math.log(2.0 * math.pi)
                    - 1.5 * math.log(s))


@njit(cache=True)
def g(s, a):
    return math.exp(-a * a / (2.0 * s) - 0.5 * math.log(2.0 * math.pi * s))


@njit(cache=True)
def htail(s, c):
    """``int_0^inf h(s, c + y) dy`` for ``c >= 0`` by scaled Gauss-Legendre."""
    if s <= 0.0:
        return 0.0
    rs = math.sqrt(s)
    c0 = c / rs
    if c0 > 40.0:
        return 0.0
    acc = 0.0
    for i in range(TAIL_Z.size):
        u = c0 + TAIL_Z[i]
        acc += TAIL_W[i] * u * math.exp(-0.5 * u * u)
    return acc * _INV_SQRT_2PI / rs


@njit(cache=True)
def htail_weighted(s, c, k):
    """``int_0^inf y**k h(s, c + y) dy`` (``k`` = 0 or 1)."""
    if s <= 0.0:
        return 0.0
    rs = math.sqrt(s)
    c0 = c / rs
    if c0 > 40.0:
        return 0.0
    acc = 0.0
    for i in range(TAIL_Z.size):
        z = TAIL_Z[i]
        u = c0 + z
        acc += TAIL_W[i] * (rs * z) ** k * u * math.exp(-0.5 * u * u)
    return acc * _INV_SQRT_2PI / rs


# Integrands over the support in coordinates (l, s1) with s1 = tau - l/theta
# and s2 = t - tau = T' - s1, T' = t - l/theta.  ``what``: 0 zero atom,
# 1 ac (y integrated), 2 ac weighted by tau, 3 zero atom weighted by tau.

@njit(cache=True)
def support_integrand(s, l, theta, x, t, what, swap):
    # ``swap`` integrates in s2 instead of s1 so a peak near s2 = 0 is not
    # lost to cancellation in tp - s1.
    tp = t - l / theta
    if swap:
        s1 = tp - s
        s2 = s
    else:
        s1 = s
        s2 = tp - s
    if s1 <= 0.0 or s2 <= 0.0:
        return 0.0
    half = 0.5 * l
    if what == 0 or what == 3:
        val = h(s1, half) * h(s2, half + x) / theta
    else:
        val = h(s2, half + x) * htail(s1, half) + h(s1, half) * htail(s2, half + x)
    if what >= 2:
        val *= s1 + l / theta
    return val


@njit(cache=True)
def local_integrand(l, theta, x, t, a):
    """``h(t - l/theta, l + a)``."""
    return h(t - l / theta, l + a)


@njit(cache=True)
def local_moment_integrand(l, theta, x, t):
    """``l * (int_R h(t - l/theta, l + x + |y|) dy + h(t - l/theta, l + x)/theta)``."""
    s = t - l / theta
    if s <= 0.0:
        return 0.0
    return l * (2.0 * htail(s, l + x) + h(s, l + x) / theta)


# Forward Laplace integrands, time variable u with rate r.
# kind 0: exp(-r u) h(u, c)
# kind 1: exp(-r u) int_0^inf h(u, c + y) dy
# kind 2: exp(-r u) int_0^w h(u, c + y) dy   (w = extra)

@njit(cache=True)
def laplace_integrand(u, r, c, kind, extra):
    e = math.exp(-r * u)
    if kind == 0:
        return e * h(u, c)
    if kind == 1:
        return e * htail(u, c)
    return e * (htail(u, c) - htail(u, c + extra))
