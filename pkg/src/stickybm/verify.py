"""Verification suites shared by the ``verify`` command and the test suite.

Each suite returns a list of :class:`~stickybm.stats.VerificationReport`.
Nothing here depends on wall-clock time, so manifests are reproducible.
"""
import itertools
import math

import numpy as np
from scipy.special import ndtr

from . import kernels, laplace, laws, simulate
from ._quad import quad
from .kernels import gauss_kernel, hitting_density
from .laws import StickyParams
from .stats import atom_fraction, ks_critical, ks_statistic, make_report, mean_and_se

DUAL_VALUES = (0.5, 1.0, 2.0)
FORWARD_YS = (-1.0, -0.1, 0.1, 1.0)
FORWARD_THETAS = (0.5, 1.0, 4.0)

# Monte Carlo allowances for discretisation bias (absolute)
ATOM_ALLOWANCE = 0.01
MOMENT_ALLOWANCE = 0.01
HALVING_ALLOWANCE = 0.01


def ks_allowance(dt):
    return 0.5 * math.sqrt(dt)


def dual_grid(values=DUAL_VALUES):
    return [laplace.DualTriple(*v) for v in itertools.product(values, repeat=3)]


# -- 1. algebraic identities -------------------------------------------------

def suite_identities():
    reports = []
    rng = np.random.default_rng(20240101)

    worst = 0.0
    for theta, x0, t in [(0.5, 0.0, 1.0), (1.0, 0.7, 1.0), (4.0, 2.0, 0.5), (2.0, 0.3, 2.0)]:
        p = StickyParams(theta, x0, t)
        ys = rng.uniform(0.0, 3.0, 25)
        ls = rng.uniform(0.0, theta * t, 25)
        folded = laws.fold_bivariate(p, ys, ls)
        refl = laws.bivariate_reflected(p, ys, ls)
        for a, b in zip(folded, refl):
            worst = max(worst, float(np.max(np.abs(np.asarray(a) - np.asarray(b)))))
    reports.append(make_report("fold(signed bivariate) == reflected bivariate, 100 pts",
                               0.0, worst, 1e-12))

    worst = 0.0
    for theta in (0.5, 1.0, 4.0):
        for d in dual_grid():
            gt = laplace.gamma_tilde(d, theta)
            c = laplace.prefactor(d, gt)
            for y in (-1.0, -0.1, 0.0, 0.1, 1.0):
                lhs = laplace.sbm_transform(d, theta, y)
                rhs = laplace.bm_transform(d.with_gamma(gt), y) + (c / theta if y <= 0 else 0.0)
                worst = max(worst, abs(lhs - rhs) / abs(lhs))
    reports.append(make_report("sbm_transform == bm_transform(gamma~) + jump term",
                               0.0, worst, 1e-14))

    worst = 0.0
    for d in dual_grid():
        worst = max(worst, abs(laplace.j_residual(d, 1.0)))
    reports.append(make_report("J gamma~ == J1 - beta J2 on 27 duals", 0.0, worst, 1e-12))

    worst = 0.0
    for theta, t in [(0.5, 1.0), (1.0, 1.0), (4.0, 0.5)]:
        p0 = StickyParams(theta, 0.0, t)
        for _ in range(30):
            tau = rng.uniform(0.0, t)
            l = rng.uniform(0.0, theta * tau)
            y = rng.uniform(-2.0, 2.0)
            a = laws.trivariate_from_x(p0, y, tau, l)
            b = laws.trivariate_from_zero(p0, y, tau, l)
            worst = max(worst, max(abs(u - v) for u, v in zip(a, b)))
    reports.append(make_report("trivariate_from_x(x0=0) == trivariate_from_zero",
                               0.0, worst, 1e-15))
    return reports


# -- 2. kernels ---------------------------------------------------------------

def suite_kernels():
    reports = []
    d = 1e-4
    worst_heat = 0.0
    worst_link = 0.0
    for t in (0.5, 1.0, 2.0):
        for x in (-2.0, -1.0, -0.3, 0.3, 1.0, 2.0):
            dt_ = (gauss_kernel(t + d, x) - gauss_kernel(t - d, x)) / (2 * d)
            dxx = (gauss_kernel(t, x + d) - 2 * gauss_kernel(t, x) + gauss_kernel(t, x - d)) / d ** 2
            worst_heat = max(worst_heat, abs(dt_ - 0.5 * dxx))
            if x > 0:
                dx = (gauss_kernel(t, x + d) - gauss_kernel(t, x - d)) / (2 * d)
                worst_link = max(worst_link, abs(dx + hitting_density(t, x)))
    reports.append(make_report("heat equation residual (finite differences)", 0.0, worst_heat, 1e-6))
    reports.append(make_report("d/dx g = -h for x > 0", 0.0, worst_link, 1e-6))

    worst = 0.0
    triples = [(a, b, t) for a in (0.1, 0.5, 1.5, 3.0) for b, t in
               [(0.2, 0.5), (1.0, 1.0), (0.05, 2.0), (2.0, 3.0), (0.7, 0.1)]]
    for a, b, t in triples:
        ref = hitting_density(t, a + b)
        worst = max(worst, abs(kernels.convolve_hitting(a, b, t) - ref) / ref)
    reports.append(make_report(f"h(.,a) * h(.,b) == h(., a+b), {len(triples)} triples",
                               0.0, worst, 1e-8))

    worst = 0.0
    for s in (0.1, 0.5, 2.0, 5.0):
        for x in (0.0, 0.4, -1.0, 2.5):
            top = (40.0 + abs(math.log(1e-10))) / s
            pts = [top * f for f in (1e-6, 1e-4, 1e-2)] + kernels.hitting_peaks(x)
            qg = quad(lambda t: math.exp(-s * t) * gauss_kernel(t, x), 0.0, top, points=pts)[0]
            worst = max(worst, abs(qg / kernels.laplace_G(s, x) - 1))
            if x != 0.0:
                qh = quad(lambda t: math.exp(-s * t) * hitting_density(t, x), 0.0, top,
                          points=pts)[0]
                worst = max(worst, abs(qh / kernels.laplace_H(s, x) - 1))
    reports.append(make_report("laplace_G / laplace_H vs quadrature", 0.0, worst, 1e-7))

    worst = 0.0
    for t in (0.3, 1.0, 4.0):
        top = 40.0 * math.sqrt(t)
        mass = quad(lambda x: gauss_kernel(t, x), -top, top, points=[0.0])[0]
        worst = max(worst, abs(mass - 1))
    for x in (0.3, 1.0, 2.0):
        mass = _hitting_mass(x)
        worst = max(worst, abs(mass - 1))
    reports.append(make_report("normalisation of g in x and h in t", 0.0, worst, 1e-8))
    return reports


def _hitting_mass(x):
    """``int_0^inf h(s, x) ds`` via ``s = x**2 / w**2`` (Jacobian makes it a Gaussian in ``w``)."""
    # h(x^2/w^2, x) * 2 x^2 / w^3 = 2 phi(w), so the integral over w in (0, inf) is 1
    def f(w):
        if w == 0.0:
            return 0.0
        s = x * x / (w * w)
        return hitting_density(s, x) * 2.0 * x * x / w ** 3
    return quad(f, 0.0, 40.0, points=[0.5, 1.0, 2.0, 5.0])[0]


# -- 3. ODE -------------------------------------------------------------------

def suite_ode(n_cases=10, seed=7):
    rng = np.random.default_rng(seed)
    worst_res = worst_joint = worst_u0 = 0.0
    for _ in range(n_cases):
        lam, beta, gamma = rng.uniform(0.2, 3.0, 3)
        y = -rng.uniform(0.05, 3.0)
        d = laplace.DualTriple(lam, beta, gamma)
        c = laplace.solve_ode_constants(d, gamma, y)
        xs = np.concatenate([np.linspace(y - 3, y, 40, endpoint=False)[1:],
                             np.linspace(y, 0, 40, endpoint=False)[1:],
                             np.linspace(0, 3, 40)[1:]])
        worst_res = max(worst_res, float(np.max(np.abs(c.residual(xs)))))
        joints = [
            c.u(y, "-") - c.u(y, "+"),
            c.du(y, "-") - c.du(y, "+"),
            c.u(0.0, "-") - c.u(0.0, "+"),
            0.5 * (c.du(0.0, "+") - c.du(0.0, "-")) - gamma * c.u(0.0),
        ]
        worst_joint = max(worst_joint, max(abs(j) for j in joints))
        worst_u0 = max(worst_u0, abs(c.u0 - laplace.bm_transform(d, y)))
    return [
        make_report(f"ODE residual off {{0, y}}, {n_cases} cases", 0.0, worst_res, 1e-8),
        make_report("continuity / C1 / slope conditions", 0.0, worst_joint, 1e-10),
        make_report("u(0) == closed-form BM transform", 0.0, worst_u0, 1e-10),
    ]


# -- 4. forward Laplace -------------------------------------------------------

def suite_laplace_forward(values=DUAL_VALUES, ys=FORWARD_YS, thetas=FORWARD_THETAS,
                          tolerance=1e-4):
    reports = []
    rows = laplace.forward_grid(dual_grid(values), thetas, ys)
    for theta in thetas:
        sub = [r for r in rows if r[1] == theta]
        worst = max(abs(f / ref - 1) for _, _, _, f, ref in sub)
        reports.append(make_report(
            f"forward transform == closed form, theta={theta:g}, {len(sub)} pts",
            0.0, worst, tolerance))
    worst = 0.0
    for theta in thetas:
        for d in dual_grid(values):
            c = laplace.prefactor(d, laplace.gamma_tilde(d, theta))
            worst = max(worst, abs(laplace.sbm_jump(d, theta) - c / theta))
    reports.append(make_report("jump at y=0 == prefactor/theta", 0.0, worst, 1e-10))
    return reports


# -- 5. normalisation ---------------------------------------------------------

NORMALIZATION_GRID = list(itertools.product((0.5, 1.0, 4.0), (0.0, 0.5, 2.0), (0.5, 1.0)))


def suite_normalization(grid=NORMALIZATION_GRID, n_points=50, seed=11):
    worst = 0.0
    for theta, x0, t in grid:
        m = laws.atom_masses(StickyParams(theta, x0, t))
        worst = max(worst, abs(m.total - 1.0))
    reports = [make_report(f"total mass of trivariate law, {len(grid)} parameter sets",
                           1.0, 1.0 + worst, 1e-5)]
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        theta, x0, t = grid[rng.integers(len(grid))]
        p = StickyParams(theta, x0, t)
        l = rng.uniform(0.0, theta * t)
        y = rng.uniform(-2.0, 2.0)
        worst = max(worst, _tau_marginal_error(p, y, l))
    reports.append(make_report(f"tau-integral of trivariate == bivariate, {n_points} pts",
                               0.0, worst, 1e-6))
    return reports


def _tau_marginal_error(p, y, l):
    law = laws.MixedTrivariateLaw(p)
    lo, hi = l / p.theta, p.t
    pts = [lo + (hi - lo) * f for f in (1e-6, 1e-4, 1e-2, 0.5, 1 - 1e-2, 1 - 1e-4, 1 - 1e-6)]
    ac = quad(lambda tau: law.ac(y, tau, l), lo, hi, points=pts)[0]
    atom = quad(lambda tau: law.zero_atom(tau, l), lo, hi, points=pts)[0]
    ref = laws.bivariate_from_x(p, y, l)
    return max(abs(ac - ref.ac), abs(atom - ref.zero_atom))


# -- 6. Monte Carlo -------------------------------------------------------------

def continuous_position_cdf(params, half_width=8.0, points=801):
    """Renormalised CDF of the continuous part of ``S_t`` (tabulated + interpolated)."""
    grid = np.linspace(-half_width, half_width + params.x0, points)
    tab = laws.position_cdf_table(params, grid)
    mass = 1.0 - laws.position_marginal(params, 0.0).atom
    return lambda z: np.interp(z, grid, tab, left=0.0, right=tab[-1]) / mass


def _mc_estimates(batch):
    p_atom, se_atom = atom_fraction(batch)
    ml, sel = mean_and_se(batch.l_t)
    mg, seg = mean_and_se(batch.gamma_t)
    return {"atom": (p_atom, se_atom), "local_time": (ml, sel), "occupation": (mg, seg)}


def suite_montecarlo(n=100_000, dt=1e-4, seed=2024, threads=None, theta=1.0, x0=0.0, t=1.0,
                     halving=True):
    p = StickyParams(theta, x0, t)
    reports = []
    batch = simulate.sample_sbm_batch(p, n, dt, seed=seed, threads=threads)
    est = _mc_estimates(batch)
    targets = {
        "atom": laws.zero_atom_mass(p),
        "local_time": laws.expected_local_time(p),
        "occupation": laws.expected_occupation(p),
    }
    allow = {"atom": ATOM_ALLOWANCE, "local_time": MOMENT_ALLOWANCE,
             "occupation": MOMENT_ALLOWANCE}
    labels = {"atom": "P(S_t = 0)", "local_time": "E[L_t]", "occupation": "E[Gamma_t]"}
    for key in ("atom", "local_time", "occupation"):
        m, se = est[key]
        reports.append(make_report(f"MC {labels[key]} vs quadrature (n={n}, dt={dt:g})",
                                   targets[key], m, allow[key], standard_error=se))

    cont = np.sort(batch.s_t[~batch.stuck])
    d = ks_statistic(cont, continuous_position_cdf(p))
    reports.append(make_report(f"MC KS on continuous S_t (n_cont={cont.size})",
                               0.0, d, ks_critical(cont.size) + ks_allowance(dt)))

    if halving:
        half = simulate.sample_sbm_batch(p, n, dt / 2, seed=seed, threads=threads)
        est_h = _mc_estimates(half)
        for key in ("atom", "local_time", "occupation"):
            reports.append(make_report(
                f"dt-halving shift of {labels[key]}", est[key][0], est_h[key][0],
                HALVING_ALLOWANCE))
    return reports


# -- 7. Brownian limit -----------------------------------------------------------

def suite_bm_limit(n=20_000, dt=1e-4, seed=99, threads=None, theta=1e9, x0=0.0, t=1.0):
    p = StickyParams(theta, x0, t)
    batch = simulate.sample_sbm_batch(p, n, dt, seed=seed, threads=threads)
    p_atom, _ = atom_fraction(batch)
    reports = [make_report(f"BM limit: stuck fraction at theta={theta:g}", 0.0, p_atom, 0.0)]
    x = np.sort(batch.s_t)
    d = ks_statistic(x, lambda z: ndtr((z - x0) / math.sqrt(t)))
    reports.append(make_report(f"BM limit: KS vs Gaussian CDF (n={n})", 0.0, d,
                               ks_critical(n) + ks_allowance(dt)))
    worst = 0.0
    for dual in dual_grid():
        for y in (-1.0, -0.1, 0.1, 1.0):
            ref = laplace.bm_transform(dual, y)
            worst = max(worst, abs(laplace.sbm_transform(dual, theta, y) - ref))
    reports.append(make_report(f"sbm_transform(theta={theta:g}) == bm_transform", 0.0,
                               worst, 1e-6))
    return reports


SUITES = {
    "identities": suite_identities,
    "kernels": suite_kernels,
    "ode": suite_ode,
    "laplace-forward": suite_laplace_forward,
    "normalization": suite_normalization,
    "montecarlo": suite_montecarlo,
    "bm-limit": suite_bm_limit,
}
