"""Thin wrapper around :func:`scipy.integrate.quad` with a fixed acceptance rule.

Every integral in the package requests ``epsrel=1e-10`` and accepts the
result when the routine's own error estimate is below ``1e-8`` relative
(or below ``ABS_FLOOR`` absolute, for integrals whose value is ~0).
"""
import math

from scipy import integrate as _integrate

from .errors import NumericalError

REQUEST_RTOL = 1e-10
ACCEPT_RTOL = 1e-8
ABS_FLOOR = 1e-13
LIMIT = 400


def quad(f, a, b, points=None, args=(), epsrel=REQUEST_RTOL, accept=ACCEPT_RTOL,
         epsabs=ABS_FLOOR, limit=LIMIT):
    """Integrate ``f`` over ``[a, b]``; raise NumericalError if not accepted.

    ``points`` are interior breakpoints (kinks, narrow peaks); those outside
    ``(a, b)`` are dropped. Returns ``(value, error_estimate)``.
    """
    if b <= a:
        return 0.0, 0.0
    pts = None
    if points is not None:
        pts = sorted({p for p in points if a < p < b})
        if not pts:
            pts = None
    out = _integrate.quad(f, a, b, args=args, points=pts, epsabs=epsabs, epsrel=epsrel,
                          limit=limit, full_output=1)
    value, err = out[0], out[1]
    if not math.isfinite(value) or err > max(accept * abs(value), 10 * epsabs):
        raise NumericalError(
            f"quadrature on [{a:g}, {b:g}] reached error {err:.3g} "
            f"for value {value:.17g}", achieved=err)
    return value, err


def quad_value(f, a, b, **kwargs):
    return quad(f, a, b, **kwargs)[0]


def tail_cutoff(rate, floor=1e-16):
    """Length after which ``exp(-rate * s)`` stays below ``floor``."""
    return -math.log(floor) / rate
