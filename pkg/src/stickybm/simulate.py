"""Monte Carlo sampling of ``(S_t, Gamma_t, L_t)`` through a time change.

Sticky BM is Brownian motion ``B`` run on the clock ``A_t``, where ``A`` is
the right-continuous inverse of ``K_tau = tau + L_tau(B)/theta``. We
simulate ``B`` on a grid, attach its local time at 0, build ``K`` and
invert it.

Local time on the grid is sampled exactly: given the endpoints ``a, b`` of
one step of length ``dt`` the local time accrued in that step satisfies

    P(dL > z | a, b) = exp(-((|a| + |b| + z)**2 - (b - a)**2) / (2 dt)),

so ``(B, L)`` at grid points has the exact joint law. The band estimator of
:func:`local_time_estimate` is kept as an alternative (``local_time="band"``).

Discrete clock: the local time of step ``k`` enters ``K`` as a jump of size
``dL_k/theta`` at the left end ``tau_k``. If ``t`` falls inside that jump
the SBM is sitting at 0 (``stuck``) and ``S_t = 0`` exactly; otherwise
``A_t`` is inside a step and ``S_t`` interpolates the two grid values.
Since ``K_tau >= tau`` we have ``A_t <= t``, so simulating ``B`` up to the
horizon ``t`` is always enough.

Reproducibility: path ``i`` draws from its own stream
``SeedSequence(seed, spawn_key=(i,))``; batches are cut into blocks that
may run on threads, and results land at fixed indices, so outputs do not
depend on the thread count.
"""
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResourceError

DEFAULT_DT = 1e-4
BLOCK = 256
# a same-sign step with 2ab/dt above this has P(touch 0) < exp(-37) < 2**-53
_TOUCH_CUT = 37.0


def default_threads():
    return max(1, int(os.environ.get("STICKYBM_THREADS", "1")))


@dataclass(frozen=True)
class RngSpec:
    seed: int
    stream_id: int = 0

    def generator(self):
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass
class GridPath:
    """BM on the grid ``k dt`` with running local time and occupation of ``[0, inf)``."""

    dt: float
    values: np.ndarray
    local_time: np.ndarray
    occupation: np.ndarray

    @property
    def x0(self):
        return self.values[0]

    @property
    def horizon(self):
        return self.dt * (self.values.size - 1)


@dataclass(frozen=True)
class SbmSample:
    s_t: float
    gamma_t: float
    l_t: float
    stuck: bool


def n_steps(horizon, dt):
    if not dt > 0:
        raise DomainError(f"dt must be > 0, got {dt!r}")
    if not horizon >= dt:
        raise DomainError(f"horizon must be >= dt, got horizon={horizon!r}, dt={dt!r}")
    r = horizon / dt
    n = round(r)
    return int(n) if abs(r - n) < 1e-9 * max(r, 1.0) else int(math.ceil(r))


def default_epsilon(dt):
    return dt ** 0.25


# -- path generation --------------------------------------------------------

def _fill_increments(gen, n, dt):
    return gen.standard_normal(n) * math.sqrt(dt)


def _bridge_local_time(a, b, dt, gen):
    """Exact local-time increments for steps ``a -> b`` (1-D arrays)."""
    inc = np.zeros(a.size)
    prod = a * b
    live = np.flatnonzero(prod * (2.0 / dt) < _TOUCH_CUT)
    if live.size:
        aa, bb = a[live], b[live]
        u = gen.random(live.size)
        # 1 - u lies in (0, 1], keeping the log finite
        r = np.sqrt((bb - aa) ** 2 - 2.0 * dt * np.log1p(-u))
        inc[live] = np.maximum(r - np.abs(aa) - np.abs(bb), 0.0)
    return inc


def _band_local_time(values, dt, epsilon):
    """Band increments ``dt/(2 eps) 1{|B_k| <= eps}`` per step (left point)."""
    return (np.abs(values[..., :-1]) <= epsilon) * (dt / (2.0 * epsilon))


def _occupation_increments(values, dt):
    pos = values >= 0.0
    return 0.5 * dt * (pos[..., :-1].astype(float) + pos[..., 1:])


def _cumulate(inc):
    out = np.zeros(inc.shape[:-1] + (inc.shape[-1] + 1,))
    np.cumsum(inc, axis=-1, out=out[..., 1:])
    return out


def sample_bm_path(x0, horizon, dt, rng, local_time="bridge", epsilon=None):
    """One BM path on the grid with local time (exact bridge sampling by default)."""
    n = n_steps(horizon, dt)
    gen = rng.generator() if isinstance(rng, RngSpec) else rng
    values = np.empty(n + 1)
    values[0] = x0
    np.cumsum(_fill_increments(gen, n, dt), out=values[1:])
    values[1:] += x0
    if local_time == "bridge":
        dl = _bridge_local_time(values[:-1], values[1:], dt, gen)
    elif local_time == "band":
        dl = _band_local_time(values, dt, epsilon or default_epsilon(dt))
    else:
        raise DomainError(f"unknown local-time scheme {local_time!r}")
    return GridPath(dt, values, _cumulate(dl), _cumulate(_occupation_increments(values, dt)))


def local_time_estimate(path, epsilon=None):
    """Band estimate ``dt/(2 eps) #{k < n : |B_k| <= eps}`` of ``L(B)`` at the horizon.

    Default ``eps = dt**0.25``. The bias is of order ``eps`` (for ``x0 = 0``
    and horizon 1 the leading term is about ``-eps/2``), plus a sampling
    term of order ``sqrt(dt)/eps``.
    """
    eps = default_epsilon(path.dt) if epsilon is None else epsilon
    if not eps > 0:
        raise DomainError(f"epsilon must be > 0, got {eps!r}")
    return float(np.count_nonzero(np.abs(path.values[:-1]) <= eps) * path.dt / (2.0 * eps))


def sample_bm_local_times(x0, horizon, dt, n, seed=0, epsilon=None):
    """Local time at the horizon for ``n`` BM paths, two ways.

    Returns ``(bridge, band, terminal)``: the exact grid-sampled local time,
    the band estimate with ``epsilon`` (default ``dt**0.25``) on the same
    paths, and ``B`` at the horizon. Path ``i`` is
    ``sample_bm_path(x0, horizon, dt, RngSpec(seed, i))``.
    """
    eps = default_epsilon(dt) if epsilon is None else epsilon
    bridge, band, term = np.empty(n), np.empty(n), np.empty(n)
    for i in range(n):
        path = sample_bm_path(x0, horizon, dt, RngSpec(seed, i))
        bridge[i] = path.local_time[-1]
        band[i] = local_time_estimate(path, eps)
        term[i] = path.values[-1]
    return bridge, band, term


# -- time change ------------------------------------------------------------

def _time_change(values, ltime, occ, dt, theta, t):
    """Vectorised inversion of ``K``; rows are paths. Returns four arrays."""
    m, npts = values.shape
    n = npts - 1
    taus = dt * np.arange(npts)
    k_minus = taus + ltime / theta
    if np.any(k_minus[:, -1] < t):
        raise ResourceError("BM path too short: K at the last grid point is below t")
    dl = np.zeros((m, npts))
    dl[:, :-1] = np.diff(ltime, axis=1)
    k = np.count_nonzero(k_minus <= t, axis=1) - 1
    rows = np.arange(m)
    km = k_minus[rows, k]
    jump = dl[rows, k] / theta
    stuck = (k < n) & (t < km + jump)

    l_t = np.where(stuck, ltime[rows, k] + theta * (t - km), ltime[rows, np.minimum(k + 1, n)])
    a_t = np.where(stuck, taus[k], t - l_t / theta)
    frac = np.clip((a_t - taus[k]) / dt, 0.0, 1.0)
    k1 = np.minimum(k + 1, n)
    v0, v1 = values[rows, k], values[rows, k1]
    s_t = np.where(stuck, 0.0, v0 + frac * (v1 - v0))
    occ_a = occ[rows, k] + frac * (occ[rows, k1] - occ[rows, k])
    sticky = l_t / theta
    gamma_t = np.minimum(np.maximum(occ_a + sticky, sticky), t)
    return s_t, gamma_t, l_t, stuck


def time_change_to_sbm(path, theta, t):
    """Read ``(S_t, Gamma_t, L_t)`` off one grid path of the driving BM."""
    if not theta > 0:
        raise DomainError(f"theta must be > 0, got {theta!r}")
    s, g, l, st = _time_change(path.values[None, :], path.local_time[None, :],
                               path.occupation[None, :], path.dt, theta, t)
    return SbmSample(float(s[0]), float(g[0]), float(l[0]), bool(st[0]))


# -- batches ----------------------------------------------------------------

@dataclass
class SampleBatch:
    """Arrays of samples plus the settings that produced them."""

    s_t: np.ndarray
    gamma_t: np.ndarray
    l_t: np.ndarray
    stuck: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return self.s_t.size

    def __getitem__(self, i):
        return SbmSample(float(self.s_t[i]), float(self.gamma_t[i]),
                         float(self.l_t[i]), bool(self.stuck[i]))

    def __iter__(self):
        return (self[i] for i in range(len(self)))


def _run_block(params, dt, seed, start, stop, local_time, epsilon):
    n = n_steps(params.t, dt)
    m = stop - start
    values = np.empty((m, n + 1))
    dl = np.empty((m, n))
    for i in range(m):
        gen = RngSpec(seed, start + i).generator()
        row = values[i]
        row[0] = params.x0
        np.cumsum(_fill_increments(gen, n, dt), out=row[1:])
        row[1:] += params.x0
        if local_time == "bridge":
            dl[i] = _bridge_local_time(row[:-1], row[1:], dt, gen)
    if local_time == "band":
        dl = _band_local_time(values, dt, epsilon)
    occ = _cumulate(_occupation_increments(values, dt))
    return _time_change(values, _cumulate(dl), occ, dt, params.theta, params.t)


def sample_sbm_batch(params, n, dt=DEFAULT_DT, seed=0, threads=None,
                     local_time="bridge", epsilon=None):
    """``n`` independent samples; path ``i`` uses stream ``(seed, i)``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")
    if local_time not in ("bridge", "band"):
        raise DomainError(f"unknown local-time scheme {local_time!r}")
    eps = (epsilon or default_epsilon(dt)) if local_time == "band" else None
    threads = threads or default_threads()
    out = [np.empty(n) for _ in range(3)] + [np.empty(n, dtype=bool)]
    blocks = [(a, min(a + BLOCK, n)) for a in range(0, n, BLOCK)]

    def work(block):
        a, b = block
        for dst, src in zip(out, _run_block(params, dt, seed, a, b, local_time, eps)):
            dst[a:b] = src

    if threads == 1:
        for blk in blocks:
            work(blk)
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(work, blocks))
    meta = {"theta": params.theta, "x0": params.x0, "t": params.t, "n": n, "dt": dt,
            "seed": seed, "local_time": local_time, "epsilon": eps}
    return SampleBatch(*out, meta=meta)
