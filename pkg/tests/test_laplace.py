import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stickybm.errors import DomainError, NumericalError
from stickybm.laplace import (DualTriple, bm_transform, forward_transform, gamma_tilde,
                              j_identities, j_residual, prefactor, sbm_jump, sbm_transform,
                              solve_ode_constants)

duals = st.builds(DualTriple, st.floats(0.05, 5), st.floats(0.05, 5), st.floats(0.05, 5))


def test_dual_validation():
    with pytest.raises(DomainError):
        DualTriple(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        DualTriple(1.0, -1.0, 1.0)
    DualTriple(1.0, 0.0, 0.0)  # one-sided limit admitted


def test_bm_symmetric_half():
    assert bm_transform(DualTriple(1.0, 0.0, 0.0), 0.0) == pytest.approx(0.5, abs=1e-15)


def test_bm_total_mass_limit():
    assert bm_transform(DualTriple(1.0, 0.0, 0.0), -60.0) == pytest.approx(1.0, abs=1e-14)


@settings(max_examples=60)
@given(duals)
def test_bm_continuous_at_zero(d):
    assert bm_transform(d, 1e-300) == pytest.approx(bm_transform(d, -1e-300), abs=1e-14)
    assert bm_transform(d, 0.0) == pytest.approx(bm_transform(d, 1e-300), abs=1e-14)


def test_bm_continuity_example():
    d = DualTriple(1.0, 2.0, 0.7)
    assert abs(bm_transform(d, 1e-15) - bm_transform(d, -1e-15)) < 1e-14


def test_bm_transform_against_mpmath():
    mpmath.mp.dps = 30
    lam, beta, gamma, y = map(mpmath.mpf, ("1.3", "0.4", "0.9", "-0.6"))
    a, b = mpmath.sqrt(2 * lam), mpmath.sqrt(2 * (lam + beta))
    ref = 2 / (2 * gamma + a + b) * ((1 - mpmath.exp(a * y)) / a + 1 / b)
    assert bm_transform(DualTriple(1.3, 0.4, 0.9), -0.6) == pytest.approx(float(ref), rel=1e-14)


def test_sbm_example():
    v = sbm_transform(DualTriple(1.0, 1.0, 1.0), 1.0, 0.0)
    assert v == pytest.approx(3.0 / (6.0 + 2.0 + math.sqrt(2.0)), rel=1e-15)
    assert v == pytest.approx(0.318667, abs=1e-6)


@settings(max_examples=60)
@given(duals, st.floats(0.1, 10))
def test_sbm_jump_is_prefactor_over_theta(d, theta):
    c = prefactor(d, gamma_tilde(d, theta))
    assert abs(sbm_jump(d, theta) - c / theta) < 1e-12
    assert abs(sbm_transform(d, theta, -1e-300) - sbm_transform(d, theta, 1e-300) - c / theta) < 1e-12


@settings(max_examples=100)
@given(duals, st.floats(0.1, 10), st.floats(-5, 5))
def test_sbm_decomposes_into_bm(d, theta, y):
    gt = gamma_tilde(d, theta)
    ref = bm_transform(d.with_gamma(gt), y) + (y <= 0) * prefactor(d, gt) / theta
    assert abs(sbm_transform(d, theta, y) - ref) <= 1e-14


@pytest.mark.parametrize("y", [-2.0, -0.3, 0.2, 1.5])
def test_sbm_bm_limit(y):
    d = DualTriple(1.0, 0.5, 0.3)
    assert sbm_transform(d, 1e9, y) == pytest.approx(bm_transform(d, y), abs=1e-6)


def test_transforms_decrease_in_each_dual():
    vals = (0.3, 1.0, 3.0)
    for y in (-1.0, 0.0, 0.5):
        for i in range(3):
            for base in itertools.product(vals, repeat=3):
                lo = list(base)
                hi = list(base)
                hi[i] = lo[i] * 1.5
                assert bm_transform(DualTriple(*hi), y) < bm_transform(DualTriple(*lo), y)
                assert sbm_transform(DualTriple(*hi), 2.0, y) < sbm_transform(DualTriple(*lo), 2.0, y)


def test_theta_must_be_positive():
    with pytest.raises(DomainError):
        sbm_transform(DualTriple(1, 1, 1), 0.0, 0.1)


# -- ODE ---------------------------------------------------------------------

def test_ode_reproduces_closed_form():
    d = DualTriple(1.0, 0.5, 0.3)
    c = solve_ode_constants(d, 0.3, -0.7)
    assert c.u0 == pytest.approx(bm_transform(d, -0.7), abs=1e-10)


@settings(max_examples=40)
@given(duals, st.floats(-4, -0.01))
def test_ode_conditions(d, y):
    c = solve_ode_constants(d, d.gamma, y)
    assert abs(c.u(y, "-") - c.u(y, "+")) < 1e-10
    assert abs(c.du(y, "-") - c.du(y, "+")) < 1e-10
    assert abs(c.u(0.0, "-") - c.u(0.0, "+")) < 1e-10
    assert abs(0.5 * (c.du(0.0, "+") - c.du(0.0, "-")) - d.gamma * c.u0) < 1e-10
    assert abs(c.u0 - bm_transform(d, y)) < 1e-10
    grid = np.linspace(y - 3, 3, 301)
    grid = grid[(np.abs(grid) > 1e-9) & (np.abs(grid - y) > 1e-9)]
    assert np.max(np.abs(c.residual(grid))) < 1e-8


def test_ode_rejects_nonnegative_y():
    with pytest.raises(DomainError):
        solve_ode_constants(DualTriple(1, 1, 1), 1.0, 0.0)


def test_ode_conditioning_guard():
    with pytest.raises(NumericalError):
        solve_ode_constants(DualTriple(1, 1, 1), 1.0, -30.0)


# -- J identities --------------------------------------------------------------

@pytest.mark.parametrize("d,theta", [((1, 1, 1), 1.0), ((2, 0.5, 0.1), 4.0)])
def test_j_identity_examples(d, theta):
    assert abs(j_residual(d, theta)) < 1e-12


def test_j_identity_grid():
    for d in itertools.product((0.5, 1.0, 2.0), repeat=3):
        for theta in (0.5, 1.0, 4.0):
            assert abs(j_residual(d, theta)) < 1e-12


def test_j2_at_zero_beta():
    d = DualTriple(1.5, 0.0, 0.4)
    j = j_identities(d, 2.0)
    assert j.J2 == pytest.approx(j.J / math.sqrt(2 * 1.5), rel=1e-15)


def test_j_quantities_are_transform_values():
    d = DualTriple(1.0, 0.7, 0.2)
    j = j_identities(d, 3.0)
    bm = d.with_gamma(j.gamma_tilde)
    assert j.J2 == pytest.approx(bm_transform(bm, 1e-300), rel=1e-14)
    # J1 = 1 - lam * (BM transform at y -> -inf)
    assert j.J1 == pytest.approx(1 - d.lam * bm_transform(bm, -100.0), rel=1e-13)


# -- forward quadrature ------------------------------------------------------

def test_forward_central_example():
    d = DualTriple(1.0, 1.0, 1.0)
    assert forward_transform("sbm", d, 0.5, theta=1.0) == pytest.approx(
        sbm_transform(d, 1.0, 0.5), rel=1e-4)


def test_forward_far_left():
    d = DualTriple(1.0, 1.0, 1.0)
    c = prefactor(d, gamma_tilde(d, 1.0))
    a, b = d.rates
    assert forward_transform("sbm", d, -8.0, theta=1.0) == pytest.approx(
        c * (1 / a + 1 / b + 1.0), rel=1e-4)


def test_forward_total_mass():
    d = DualTriple(1.0, 0.0, 0.0)
    assert forward_transform("sbm", d, -40.0, theta=2.0) == pytest.approx(1.0, rel=1e-4)
    assert forward_transform("bm", d, -40.0) == pytest.approx(1.0, rel=1e-4)


@pytest.mark.parametrize("y", [-1.0, 0.0, 0.7])
def test_forward_bm(y):
    d = DualTriple(0.5, 2.0, 1.0)
    assert forward_transform("bm", d, y) == pytest.approx(bm_transform(d, y), rel=1e-4)


def test_forward_rejects_unknown_law():
    with pytest.raises(DomainError):
        forward_transform("skew", DualTriple(1, 1, 1), 0.0)
