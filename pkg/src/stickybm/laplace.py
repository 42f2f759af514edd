"""Triple Laplace transforms in ``(t, tau, l)`` and their forward check.

For fixed ``y`` the quantity transformed is

    E_0 int_0^inf 1{X_t >= y} exp(-lam t - beta Gamma_t - gamma L_t) dt

with ``X`` plain Brownian motion (:func:`bm_transform`) or sticky Brownian
motion (:func:`sbm_transform`). :func:`forward_transform` integrates the
density of :mod:`stickybm.laws` numerically to reproduce the same numbers.

``beta = 0`` and ``gamma = 0`` are accepted as one-sided limits; the
closed forms stay finite there.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _nb
from ._quad import quad
from .errors import DomainError, NumericalError
from .kernels import hitting_peaks


@dataclass(frozen=True)
class DualTriple:
    """Laplace variables dual to ``t`` (``lam``), ``tau`` (``beta``), ``l`` (``gamma``)."""

    lam: float
    beta: float
    gamma: float

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"lam must be > 0, got {self.lam!r}")
        if not (self.beta >= 0 and self.gamma >= 0):
            raise DomainError(
                f"beta and gamma must be >= 0, got beta={self.beta!r}, gamma={self.gamma!r}")

    @property
    def rates(self):
        """``(sqrt(2 lam), sqrt(2 (lam + beta)))``."""
        return math.sqrt(2.0 * self.lam), math.sqrt(2.0 * (self.lam + self.beta))

    def with_gamma(self, gamma):
        return DualTriple(self.lam, self.beta, gamma)


def _as_dual(d):
    return d if isinstance(d, DualTriple) else DualTriple(*d)


def _check_theta(theta):
    if not theta > 0:
        raise DomainError(f"theta must be > 0, got {theta!r}")


def gamma_tilde(d, theta):
    """Effective local-time rate ``gamma + beta/theta + lam/theta``."""
    d = _as_dual(d)
    _check_theta(theta)
    return d.gamma + d.beta / theta + d.lam / theta


def prefactor(d, gamma_eff=None):
    """``2 / (2 gamma_eff + sqrt(2(lam+beta)) + sqrt(2 lam))``."""
    d = _as_dual(d)
    a, b = d.rates
    ge = d.gamma if gamma_eff is None else gamma_eff
    return 2.0 / (2.0 * ge + b + a)


def _bracket(d, y):
    a, b = d.rates
    if y > 0:
        return math.exp(-b * y) / b
    # 1 - exp(a y) without cancellation for y near 0
    return -math.expm1(a * y) / a + 1.0 / b


def bm_transform(d, y):
    """Closed-form transform for Brownian motion started at 0 (continuous in ``y``)."""
    d = _as_dual(d)
    return prefactor(d) * _bracket(d, float(y))


def sbm_transform(d, theta, y):
    """Closed-form transform for sticky BM started at 0.

    Equal to the BM transform with ``gamma`` replaced by
    :func:`gamma_tilde`, plus ``prefactor / theta`` for ``y <= 0``; that
    extra term is the jump at ``y = 0``.
    """
    d = _as_dual(d)
    ge = gamma_tilde(d, theta)
    c = prefactor(d, ge)
    val = c * _bracket(d, float(y))
    if y <= 0:
        val += c / theta
    return val


def sbm_jump(d, theta):
    """``sbm_transform(y=0) - lim_{y->0+} sbm_transform(y)``."""
    d = _as_dual(d)
    _, b = d.rates
    c = prefactor(d, gamma_tilde(d, theta))
    return sbm_transform(d, theta, 0.0) - c / b


# -- the ODE behind the BM transform ---------------------------------------

@dataclass(frozen=True)
class OdeConstants:
    """Piecewise solution of ``[lam + beta 1{x>=0}] u - u''/2 = 1{x>=y}``, ``y < 0``.

    ``u = c1 e^{a x}`` on ``x < y``; ``c2 e^{a x} + c3 e^{-a x} + 1/lam`` on
    ``(y, 0)``; ``c4 e^{-b x} + 1/(lam + beta)`` on ``x > 0``, with
    ``a = sqrt(2 lam)``, ``b = sqrt(2 (lam + beta))``.
    """

    c1: float
    c2: float
    c3: float
    c4: float
    dual: DualTriple
    gamma_eff: float
    y: float

    def _pieces(self, x, order):
        a, b = self.dual.rates
        lam, beta = self.dual.lam, self.dual.beta
        x = np.asarray(x, dtype=float)
        left = self.c1 * a ** order * np.exp(a * x)
        mid = (self.c2 * a ** order * np.exp(a * x)
               + self.c3 * (-a) ** order * np.exp(-a * x)
               + (1.0 / lam if order == 0 else 0.0))
        right = (self.c4 * (-b) ** order * np.exp(-b * x)
                 + (1.0 / (lam + beta) if order == 0 else 0.0))
        return left, mid, right

    def _eval(self, x, order, side):
        left, mid, right = self._pieces(x, order)
        x = np.asarray(x, dtype=float)
        if side == "+":
            out = np.where(x >= 0, right, np.where(x >= self.y, mid, left))
        else:
            out = np.where(x > 0, right, np.where(x > self.y, mid, left))
        return out if out.ndim else float(out)

    def u(self, x, side="+"):
        """``u(x)``; ``side`` picks the one-sided value at the joints 0 and ``y``."""
        return self._eval(x, 0, side)

    def du(self, x, side="+"):
        return self._eval(x, 1, side)

    def d2u(self, x, side="+"):
        return self._eval(x, 2, side)

    def residual(self, x):
        """ODE residual off the joints ``{0, y}``."""
        d = self.dual
        x = np.asarray(x, dtype=float)
        pot = d.lam + d.beta * (x >= 0)
        return pot * self.u(x) - 0.5 * self.d2u(x) - (x >= self.y)

    @property
    def u0(self):
        return self.c4 + 1.0 / (self.dual.lam + self.dual.beta)


def solve_ode_constants(d, gamma_eff, y, max_cond=1e12):
    """Solve the 4x4 joint conditions for :class:`OdeConstants`.

    Conditions: ``u`` continuous at ``y`` and at 0, ``u'`` continuous at
    ``y``, and ``(u'(0+) - u'(0-))/2 = gamma_eff u(0)``. ``u(0)`` then
    equals :func:`bm_transform` with ``gamma = gamma_eff``.
    """
    d = _as_dual(d)
    if not y < 0:
        raise DomainError(f"solve_ode_constants needs y < 0, got {y!r}")
    if not gamma_eff >= 0:
        raise DomainError(f"gamma_eff must be >= 0, got {gamma_eff!r}")
    a, b = d.rates
    lam, beta = d.lam, d.beta
    ea, ei = math.exp(a * y), math.exp(-a * y)
    # unknowns (c1, c2, c3, c4)
    m = np.array([
        [ea, -ea, -ei, 0.0],                       # u(y-) = u(y+)
        [a * ea, -a * ea, a * ei, 0.0],            # u'(y-) = u'(y+)
        [0.0, 1.0, 1.0, -1.0],                     # u(0-) = u(0+)
        [0.0, -0.5 * a, 0.5 * a, -0.5 * b - gamma_eff],  # slope condition
    ])
    rhs = np.array([1.0 / lam, 0.0, 1.0 / (lam + beta) - 1.0 / lam,
                    gamma_eff / (lam + beta)])
    cond = np.linalg.cond(m)
    if not cond < max_cond:
        raise NumericalError(f"ODE joint system condition number {cond:.3g} too large",
                             achieved=cond)
    c = np.linalg.solve(m, rhs)
    return OdeConstants(*map(float, c), dual=d, gamma_eff=float(gamma_eff), y=float(y))


# -- J identities -------------------------------------------------------------

class JIdentities(NamedTuple):
    J: float
    J1: float
    J2: float
    gamma_tilde: float


def j_identities(d, theta):
    """Closed forms of ``J``, ``J1``, ``J2`` and ``gamma_tilde``.

    ``J1`` is the ``y -> -inf`` limit of the BM transform, ``J2`` its value
    at ``y = 0``, both with ``gamma_tilde``; they satisfy
    ``J gamma_tilde = J1 - beta J2``.
    """
    d = _as_dual(d)
    gt = gamma_tilde(d, theta)
    a, b = d.rates
    c = prefactor(d, gt)
    j1 = 1.0 - d.lam * c * (1.0 / a + 1.0 / b)
    j2 = c / b
    return JIdentities(J=c, J1=j1, J2=j2, gamma_tilde=gt)


def j_residual(d, theta):
    """``J gamma_tilde - (J1 - beta J2)``."""
    d = _as_dual(d)
    j = j_identities(d, theta)
    return j.J * j.gamma_tilde - (j.J1 - d.beta * j.J2)


# -- forward quadrature -----------------------------------------------------

LAWS = ("sbm", "bm")


def _time_cutoff(rate, tol):
    return (40.0 + abs(math.log(tol))) / rate


def _graded(c, top):
    pts = hitting_peaks(c)
    k = 10.0 * 40.0 / 3.0 * max(c * c, 1e-300)
    while k < top:
        pts.append(k)
        k *= 10.0
    return pts


def _time_transform(rate, c, kind, extra, tol):
    """``int_0^T* exp(-rate u) K(u, c) du`` for the three kernels of ``_nb``."""
    top = _time_cutoff(rate, tol)
    return quad(_nb.laplace_integrand, 0.0, top, points=_graded(c, top),
                args=(rate, c, kind, extra))[0]


def forward_transform(law, d, y, theta=None, tol=1e-10):
    """Numerical triple transform of the law of ``(S_t >= y, Gamma_t, L_t)`` from 0.

    ``law`` is ``"sbm"`` (sticky BM, needs ``theta``) or ``"bm"`` (plain BM:
    the same kernels with no sticky time and no atom at 0).

    The density is written in the independent times ``u = tau - l/theta``
    (spent away from 0 on the positive side) and ``v = t - tau`` (negative
    side), so the ``(t, tau, l)`` integral factors at fixed ``l`` into
    one-dimensional integrals in ``u`` and ``v``. Each of those, and the
    outer ``l`` integral, is done by adaptive quadrature; positions are
    integrated numerically inside the time integrands. No closed-form
    transform is used.
    """
    d = _as_dual(d)
    if law not in LAWS:
        raise DomainError(f"law must be one of {LAWS}, got {law!r}")
    if law == "sbm":
        _check_theta(theta)
        inv_theta = 1.0 / theta
    else:
        inv_theta = 0.0
    y = float(y)
    lam, beta, gamma = d.lam, d.beta, d.gamma
    r_pos = lam + beta
    r_neg = lam
    # exp(-(lam + beta) l / theta) collects the dt dtau weight of sticky time
    g_eff = gamma + r_pos * inv_theta
    y0 = max(y, 0.0)

    def integrand(l):
        half = 0.5 * l
        v0 = _time_transform(r_neg, half, 0, 0.0, tol)
        total = v0 * _time_transform(r_pos, half + y0, 1, 0.0, tol)
        if y <= 0.0:
            u0 = _time_transform(r_pos, half, 0, 0.0, tol)
            total += inv_theta * u0 * v0
            if y < 0.0:
                total += u0 * _time_transform(r_neg, half, 2, -y, tol)
        return math.exp(-g_eff * l) * total

    # every l-integrand factor is bounded by exp(-g_eff l) and the
    # hitting-time factor exp(-sqrt(2 lam) l / 2)
    decay = g_eff + 0.5 * math.sqrt(2.0 * lam)
    top = _time_cutoff(decay, tol)
    pts = [top * f for f in (1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 0.03, 0.1, 0.3)]
    value, err = quad(integrand, 0.0, top, points=pts, accept=1e-7)
    return value


def forward_grid(duals, thetas, ys, law="sbm"):
    """Forward transforms over a product grid, in deterministic order.

    Returns a list of ``(dual, theta, y, forward, closed_form)`` tuples.
    """
    rows = []
    for theta in thetas:
        for d in duals:
            d = _as_dual(d)
            for y in ys:
                fwd = forward_transform(law, d, y, theta=theta)
                ref = sbm_transform(d, theta, y) if law == "sbm" else bm_transform(d, y)
                rows.append((d, theta, y, fwd, ref))
    return rows
