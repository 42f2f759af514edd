"""Empirical-versus-analytic comparisons and verification reports."""
import json
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import DomainError

SE_MULTIPLIER = 3.0


def ks_critical(n, alpha=0.01):
    """Asymptotic two-sided one-sample KS critical value, ``sqrt(-ln(alpha/2)/2)/sqrt(n)``."""
    return math.sqrt(-0.5 * math.log(alpha / 2.0)) / math.sqrt(n)


def ks_statistic(samples, cdf):
    """Sup distance between the empirical CDF of sorted ``samples`` and ``cdf``.

    ``cdf`` is called once on the whole array.
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise DomainError("ks_statistic needs at least one sample")
    if np.any(np.diff(x) < 0):
        raise DomainError("ks_statistic needs sorted samples")
    n = x.size
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    return float(max(d_plus, d_minus, 0.0))


def atom_fraction(samples):
    """Fraction of stuck samples and its standard error ``sqrt(p(1-p)/n)``.

    Accepts a boolean array, a :class:`~stickybm.simulate.SampleBatch` or
    an iterable of :class:`~stickybm.simulate.SbmSample`.
    """
    if hasattr(samples, "stuck"):
        flags = np.asarray(samples.stuck, dtype=bool)
    else:
        seq = list(samples)
        if seq and hasattr(seq[0], "stuck"):
            flags = np.array([s.stuck for s in seq], dtype=bool)
        else:
            flags = np.asarray(seq, dtype=bool)
    n = flags.size
    if n == 0:
        raise DomainError("atom_fraction needs at least one sample")
    p = np.count_nonzero(flags) / n
    return p, math.sqrt(p * (1.0 - p) / n)


def mean_and_se(x):
    x = np.asarray(x, dtype=float)
    n = x.size
    m = float(np.sum(x) / n)
    se = float(np.std(x, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return m, se


@dataclass(frozen=True)
class VerificationReport:
    """One oracle-versus-target comparison.

    ``metric`` is ``"abs"`` or ``"rel"``. For stochastic checks the bound
    is ``tolerance + 3 * standard_error`` on the absolute error.
    """

    name: str
    target: float
    estimate: float
    abs_err: float
    rel_err: float
    tolerance: float
    metric: str = "abs"
    standard_error: Optional[float] = None
    passed: bool = False

    @property
    def bound(self):
        if self.standard_error is None:
            return self.tolerance
        return self.tolerance + SE_MULTIPLIER * self.standard_error

    def to_dict(self):
        d = asdict(self)
        d["bound"] = self.bound
        return d

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        err = self.rel_err if self.metric == "rel" else self.abs_err
        return (f"{tag}  {self.name:<58s} {self.metric}_err={err:.3e}  "
                f"bound={self.bound:.3e}")


def make_report(name, target, estimate, tolerance, metric="abs", standard_error=None):
    target = float(target)
    estimate = float(estimate)
    abs_err = abs(estimate - target)
    rel_err = abs_err / abs(target) if target != 0 else (0.0 if abs_err == 0 else math.inf)
    err = rel_err if metric == "rel" else abs_err
    bound = tolerance + (SE_MULTIPLIER * standard_error if standard_error is not None else 0.0)
    return VerificationReport(name, target, estimate, abs_err, rel_err, float(tolerance),
                              metric, standard_error, bool(err <= bound))


def _fmt(x):
    if isinstance(x, float):
        if math.isfinite(x):
            return float(f"{x:.17g}")
        return str(x)
    return x


def manifest(reports, extra=None):
    """Machine-readable manifest (a dict) for a list of reports."""
    body = {
        "passed": all(r.passed for r in reports),
        "n_reports": len(reports),
        "n_failed": sum(not r.passed for r in reports),
        "reports": [{k: _fmt(v) for k, v in r.to_dict().items()} for r in reports],
    }
    if extra:
        body["config"] = extra
    return body


def manifest_json(reports, extra=None):
    return json.dumps(manifest(reports, extra), indent=2, sort_keys=True) + "\n"
