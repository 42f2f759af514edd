"""Joint laws of sticky Brownian motion at a fixed horizon.

The laws are mixed measures. Each one is kept as separate components, each
a density against its own reference measure:

``survival``
    density in ``y`` carried on the atom ``(tau = t, l = 0)``: paths that
    never reached the origin (only when started at ``x0 > 0``).
``zero_atom``
    density in ``(tau, l)`` (or ``l``) carried on the atom ``y = 0``: paths
    sitting at the sticky point at time ``t``.
``ac``
    the absolutely continuous part in ``(y, tau, l)`` (or ``(y, l)``).

Callers pick the component they need. Atoms are never folded into a finite
density.

Coordinates: ``y`` terminal position, ``tau`` time spent in ``[0, inf)``,
``l`` local time at 0 (normalised so that ``L_t`` of plain BM has the law of
``|B_t|``). Support is ``0 <= l/theta <= tau <= t``; on its boundary the
hitting-time kernel vanishes, so densities there are 0.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _nb
from ._quad import quad
from .errors import DomainError, SupportError
from .kernels import gauss_kernel, hitting_density as h, hitting_peaks, killed_kernel


@dataclass(frozen=True)
class StickyParams:
    """Stickiness ``theta``, start point ``x0`` and horizon ``t``."""

    theta: float
    x0: float = 0.0
    t: float = 1.0

    def __post_init__(self):
        if not self.theta > 0:
            raise DomainError(f"theta must be > 0, got {self.theta!r}")
        if not self.x0 >= 0:
            raise DomainError(f"x0 must be >= 0, got {self.x0!r}")
        if not self.t > 0:
            raise DomainError(f"t must be > 0, got {self.t!r}")


class MixedDensity(NamedTuple):
    """Component-tagged density values at one query point."""

    ac: float
    zero_atom: float
    survival: float


class AtomMasses(NamedTuple):
    survival_mass: float
    zero_atom_mass: float
    ac_mass: float

    @property
    def total(self):
        return self.survival_mass + self.zero_atom_mass + self.ac_mass


class MarginalValue(NamedTuple):
    """Position marginal: ac density at ``y`` and the mass of the atom at 0."""

    ac: float
    atom: float


def check_support(params, tau, l):
    """Raise SupportError unless ``0 <= l/theta <= tau <= t`` holds everywhere."""
    tau = np.asarray(tau, dtype=float)
    l = np.asarray(l, dtype=float)
    if np.any(l < 0):
        raise SupportError("support violated: need 0 <= l")
    if np.any(l / params.theta > tau):
        raise SupportError("support violated: need l/theta <= tau")
    if np.any(tau > params.t):
        raise SupportError("support violated: need tau <= t")


def check_local_support(params, l):
    l = np.asarray(l, dtype=float)
    if np.any(l < 0):
        raise SupportError("support violated: need 0 <= l")
    if np.any(l / params.theta > params.t):
        raise SupportError("support violated: need l/theta <= t")


def _survival(params, y):
    """``p0_t(x0, y)`` for ``y >= 0``; zero for ``y < 0`` (killed paths stay positive)."""
    if np.ndim(y) == 0:
        if y < 0 or params.x0 == 0.0:
            return 0.0
        return killed_kernel(params.t, params.x0, y)
    y = np.asarray(y, dtype=float)
    out = killed_kernel(params.t, params.x0, np.maximum(y, 0.0))
    return np.where(y < 0, 0.0, out)


class MixedTrivariateLaw:
    """Law of ``(S_t, Gamma_t, L_t)`` for SBM started at ``x0 >= 0``."""

    def __init__(self, params):
        self.params = params

    def survival(self, y):
        return _survival(self.params, y)

    def zero_atom(self, tau, l):
        p = self.params
        check_support(p, tau, l)
        return _mul(h(tau - l / p.theta, l / 2), h(p.t - tau, l / 2 + p.x0)) / p.theta

    def ac(self, y, tau, l):
        p = self.params
        check_support(p, tau, l)
        return _tri_ac(p.theta, p.x0, p.t, y, tau, l)

    def density(self, y, tau, l):
        return MixedDensity(self.ac(y, tau, l), self.zero_atom(tau, l), self.survival(y))


def _mul(a, b):
    """Product of two kernel values where an exact zero beats an overflowed inf."""
    if np.ndim(a) == 0 and np.ndim(b) == 0:
        return 0.0 if a == 0.0 or b == 0.0 else a * b
    with np.errstate(invalid="ignore"):
        return np.where((a == 0.0) | (b == 0.0), 0.0, a * b)


def _tri_ac(theta, x, t, y, tau, l):
    s1 = tau - l / theta
    s2 = t - tau
    half = l / 2
    if np.ndim(y) == 0 and np.ndim(tau) == 0 and np.ndim(l) == 0:
        if y >= 0:
            return _mul(h(s1, half + y), h(s2, half + x))
        return _mul(h(s1, half), h(s2, half + x - y))
    y = np.asarray(y, dtype=float)
    pos = _mul(h(s1, half + np.maximum(y, 0.0)), h(s2, half + x))
    neg = _mul(h(s1, half), h(s2, half + x - np.minimum(y, 0.0)))
    return np.where(y >= 0, pos, neg)


def trivariate_from_x(params, y, tau, l):
    """Trivariate density of SBM started at ``params.x0`` (all components)."""
    return MixedTrivariateLaw(params).density(y, tau, l)


def trivariate_from_zero(params, y, tau, l):
    """Trivariate density of SBM started at the sticky point.

    Same code path as :func:`trivariate_from_x` with ``x0 = 0``; the
    ``survival`` component is identically zero.
    """
    if params.x0 != 0:
        raise DomainError(f"trivariate_from_zero needs x0 = 0, got {params.x0!r}")
    return trivariate_from_x(params, y, tau, l)


class MixedBivariateLaw:
    """Law of ``(S_t, L_t)``; ``reflected=True`` gives ``(|S_t|, L_t)``."""

    def __init__(self, params, reflected=False):
        self.params = params
        self.reflected = reflected

    def survival(self, y):
        self._check_y(y)
        return _survival(self.params, y)

    def zero_atom(self, l):
        p = self.params
        check_local_support(p, l)
        return h(p.t - l / p.theta, l + p.x0) / p.theta

    def ac(self, y, l):
        self._check_y(y)
        p = self.params
        check_local_support(p, l)
        val = h(p.t - l / p.theta, l + p.x0 + np.abs(y))
        return 2 * val if self.reflected else val

    def density(self, y, l):
        return MixedDensity(self.ac(y, l), self.zero_atom(l), self.survival(y))

    def _check_y(self, y):
        if self.reflected and np.any(np.asarray(y) < 0):
            raise DomainError("reflected law is defined for y >= 0 only")


def bivariate_from_x(params, y, l):
    """Law of ``(S_t, L_t)``; ``survival`` is 0 for ``y < 0``."""
    return MixedBivariateLaw(params).density(y, l)


def bivariate_reflected(params, y, l):
    """Law of ``(|S_t|, L_t)`` for ``y >= 0``."""
    return MixedBivariateLaw(params, reflected=True).density(y, l)


def fold_bivariate(params, y, l):
    """Fold the signed bivariate law onto ``y >= 0``: ``ac(y) + ac(-y)``, atoms kept."""
    if np.any(np.asarray(y) < 0):
        raise DomainError("fold is evaluated at y >= 0")
    law = MixedBivariateLaw(params)
    return MixedDensity(law.ac(y, l) + law.ac(-np.asarray(y), l),
                        law.zero_atom(l), law.survival(y))


# -- quadrature over the support --------------------------------------------
#
# Support integrals run with l outside and tau inside. At fixed l the inner
# integrand, written in s1 = tau - l/theta, is a product of hitting kernels
# in s1 and t - tau, peaked at known locations; its integral is smooth in l.

_ZERO_ATOM, _AC, _AC_TAU, _ZERO_ATOM_TAU = 0, 1, 2, 3
_GRADE = (1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.2, 0.5, 0.8, 0.95, 0.99, 0.999, 0.9999)


def hitting_tail_integral(s, a):
    """Numerical ``int_0^inf h(s, a + y) dy`` (equals ``g(s, a)``)."""
    return _nb.htail(float(s), float(a))


def _decades(a, top):
    """Breakpoints resolving ``h(., a)``: its peak near ``a**2/3`` and the
    ``s**-1.5`` tail, one per decade up to ``top``."""
    pts = hitting_peaks(a)
    m = max(a * a, 1e-300)
    k = 10.0 * 40.0 / 3.0 * m
    while k < top:
        pts.append(k)
        k *= 10.0
    return pts


def _inner_tau(params, l, what):
    th, x, t = params.theta, params.x0, params.t
    tp = t - l / th
    if tp <= 0.0:
        return 0.0
    half = 0.5 * l
    mid = 0.5 * tp
    left = quad(_nb.support_integrand, 0.0, mid, points=_decades(half, mid),
                args=(l, th, x, t, what, False))[0]
    right = quad(_nb.support_integrand, 0.0, mid, points=_decades(half + x, mid),
                 args=(l, th, x, t, what, True))[0]
    return left + right


def integrate_support(params, what):
    """Integrate a support integrand over ``0 <= l/theta <= tau <= t``."""
    top = params.theta * params.t
    return quad(lambda l: _inner_tau(params, l, what), 0.0, top,
                points=[top * f for f in _GRADE])[0]


def survival_mass(params):
    if params.x0 == 0.0:
        return 0.0
    x, t = params.x0, params.t
    top = x + 12.0 * math.sqrt(t)
    return quad(lambda y: killed_kernel(t, x, y), 0.0, top, points=[x])[0]


def zero_atom_mass(params):
    """Double quadrature of the ``y = 0`` atom density over the support."""
    return integrate_support(params, _ZERO_ATOM)


def ac_mass(params):
    """Triple quadrature of the absolutely continuous part."""
    return integrate_support(params, _AC)


def atom_masses(params):
    """Masses of the three components, each by its own quadrature."""
    return AtomMasses(survival_mass(params), zero_atom_mass(params), ac_mass(params))


def expected_occupation(params):
    """``E[Gamma_t]`` from the trivariate law by nested quadrature."""
    return (params.t * survival_mass(params)
            + integrate_support(params, _AC_TAU)
            + integrate_support(params, _ZERO_ATOM_TAU))


def expected_local_time(params):
    """``E[L_t]`` from the bivariate law, ``y`` integrated numerically."""
    th, x, t = params.theta, params.x0, params.t
    top = _local_top(params, x)
    return quad(_nb.local_moment_integrand, 0.0, top,
                points=[top * f for f in _GRADE], args=(th, x, t))[0]


# -- position marginal ------------------------------------------------------

def _local_top(params, a):
    # beyond l = a + 40 sqrt(t) the factor exp(-(l + a)^2 / 2s) is below 1e-300
    return min(params.theta * params.t, a + 40.0 * math.sqrt(params.t))


def _local_integral(params, a):
    """``int_0^{theta t} h(t - l/theta, l + a) dl``."""
    top = _local_top(params, a)
    return quad(_nb.local_integrand, 0.0, top, points=[top * f for f in _GRADE],
                args=(params.theta, params.x0, params.t, a))[0]


def position_marginal(params, y):
    """Marginal law of ``S_t``: ac density at ``y`` plus the atom mass at 0."""
    p = params
    ac = _survival(p, y) + _local_integral(p, p.x0 + abs(y))
    atom = _local_integral(p, p.x0) / p.theta
    return MarginalValue(float(ac), float(atom))


def position_ac_density(params, y):
    return position_marginal(params, y).ac


def position_cdf_table(params, grid):
    """CDF of the continuous part of ``S_t`` (not renormalised) on ``grid``.

    ``grid`` must be increasing. Mass below ``grid[0]`` is included: the
    first integral starts ``12 sqrt(t)`` further left. Returns the
    cumulative ac mass at each grid point.
    """
    grid = np.asarray(grid, dtype=float)
    p = params
    lo = min(grid[0], -p.x0) - 12.0 * math.sqrt(p.t)
    dens = lambda z: position_ac_density(p, z)
    out = np.empty(grid.size)
    acc = quad(dens, lo, grid[0], points=[0.0, p.x0])[0]
    out[0] = acc
    for i in range(1, grid.size):
        acc += quad(dens, grid[i - 1], grid[i], points=[0.0, p.x0])[0]
        out[i] = acc
    return out
