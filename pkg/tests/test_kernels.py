import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import ndtr

from conftest import mp_g, mp_h
from stickybm import kernels
from stickybm._quad import quad
from stickybm.errors import DomainError
from stickybm.kernels import (convolve_hitting, gauss_kernel, hitting_density, killed_kernel,
                              laplace_G, laplace_H)


def test_gauss_at_origin():
    assert gauss_kernel(1.0, 0.0) == pytest.approx(0.3989422804, abs=1e-10)


def test_gauss_symmetric():
    assert gauss_kernel(1.0, 1.0) == gauss_kernel(1.0, -1.0)


def test_gauss_matches_high_precision():
    assert gauss_kernel(0.5, 0.3) == pytest.approx(float(mp_g(0.5, 0.3)), rel=1e-14)


@pytest.mark.parametrize("t", [0.0, -1.0])
def test_gauss_rejects_nonpositive_time(t):
    with pytest.raises(DomainError):
        gauss_kernel(t, 0.5)
    with pytest.raises(DomainError):
        gauss_kernel(np.array([1.0, t]), 0.5)


def test_hitting_examples():
    assert hitting_density(1.0, 1.0) == pytest.approx(math.exp(-0.5) / math.sqrt(2 * math.pi),
                                                      rel=1e-14)
    assert hitting_density(1.0, 1.0) == pytest.approx(0.2419707245, abs=1e-10)
    assert hitting_density(-0.3, 2.0) == 0.0
    assert hitting_density(1.0, 0.0) == 0.0


def test_kernels_vectorise_like_scalars():
    t = np.array([0.2, 1.0, 3.0, -1.0])
    x = np.array([0.5, -1.0, 0.0, 2.0])
    vec = hitting_density(t, x)
    assert vec.tolist() == [hitting_density(a, b) for a, b in zip(t, x)]
    assert gauss_kernel(t[:3], x[:3]).tolist() == [gauss_kernel(a, b) for a, b in zip(t[:3], x[:3])]


def test_extreme_arguments_underflow_to_zero():
    assert hitting_density(1e-300, 1e3) == 0.0
    assert gauss_kernel(1e-10, 1e5) == 0.0
    out = hitting_density(np.array([1e-300, 1e-200]), np.array([1e3, 1e150]))
    assert np.all(out == 0.0)


def test_killed_kernel_examples():
    assert killed_kernel(1.0, 0.0, 2.0) == 0.0
    ref = float(mp_g(1, 0) - mp_g(1, 2))
    assert killed_kernel(1.0, 1.0, 1.0) == pytest.approx(ref, rel=1e-14)
    assert ref == pytest.approx(0.3449, abs=1e-4)


def test_killed_kernel_mass_is_survival_probability():
    mass = quad(lambda y: killed_kernel(1.0, 1.0, y), 0.0, 15.0, points=[1.0])[0]
    survival = 1.0 - quad(lambda s: hitting_density(s, 1.0), 0.0, 1.0)[0]
    assert mass == pytest.approx(survival, abs=1e-9)
    assert mass == pytest.approx(2 * ndtr(1.0) - 1, abs=1e-9)


def test_killed_kernel_domain():
    with pytest.raises(DomainError):
        killed_kernel(1.0, -0.1, 1.0)
    with pytest.raises(DomainError):
        killed_kernel(1.0, 1.0, np.array([0.5, -1.0]))


@given(st.floats(0.01, 5.0), st.floats(0.0, 4.0), st.floats(0.0, 4.0))
def test_killed_kernel_symmetric_and_nonnegative(t, x, y):
    a = killed_kernel(t, x, y)
    assert a >= 0.0
    assert a == pytest.approx(killed_kernel(t, y, x), rel=1e-12, abs=1e-300)


def test_laplace_G_examples():
    assert laplace_G(0.5, 0.0) == 1.0
    assert laplace_G(0.5, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    q = quad(lambda t: math.exp(-0.5 * t) * gauss_kernel(t, 1.0), 0.0, 130.0,
             points=[0.01, 0.3, 3.0])[0]
    assert q == pytest.approx(math.exp(-1.0), rel=1e-9)
    assert laplace_G(2.0, -3.0) == laplace_G(2.0, 3.0)
    with pytest.raises(DomainError):
        laplace_G(0.0, 1.0)


def test_laplace_H_examples():
    for s in (0.1, 1.0, 7.0):
        assert laplace_H(s, 0.0) == 1.0
    assert laplace_H(0.5, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert laplace_H(2.0, 0.5) == pytest.approx(math.exp(-1.0), rel=1e-15)
    q = quad(lambda t: math.exp(-0.5 * t) * hitting_density(t, 1.0), 0.0, 130.0,
             points=[0.01, 0.3, 3.0])[0]
    assert q == pytest.approx(math.exp(-1.0), rel=1e-9)
    with pytest.raises(DomainError):
        laplace_H(-1.0, 1.0)


@pytest.mark.parametrize("a,b,t", [(1.0, 1.0, 2.0), (0.5, 1.5, 3.0), (0.05, 2.0, 0.7)])
def test_convolution_rule(a, b, t):
    assert convolve_hitting(a, b, t) == pytest.approx(hitting_density(t, a + b), rel=1e-8)


def test_convolution_identity_element():
    assert convolve_hitting(0.0, 1.0, 1.0) == hitting_density(1.0, 1.0)
    assert convolve_hitting(1.0, 0.0, 1.0) == hitting_density(1.0, 1.0)


@settings(max_examples=60)
@given(st.floats(0.2, 4.0), st.floats(0.1, 3.0).flatmap(lambda v: st.sampled_from([v, -v])))
def test_heat_equation(t, x):
    d = 1e-4
    dt_ = (gauss_kernel(t + d, x) - gauss_kernel(t - d, x)) / (2 * d)
    dxx = (gauss_kernel(t, x + d) - 2 * gauss_kernel(t, x) + gauss_kernel(t, x - d)) / d ** 2
    assert abs(dt_ - 0.5 * dxx) < 1e-6


@settings(max_examples=60)
@given(st.floats(0.2, 4.0), st.floats(0.05, 3.0))
def test_derivative_link_positive_x(t, x):
    d = 1e-5
    dx = (gauss_kernel(t, x + d) - gauss_kernel(t, x - d)) / (2 * d)
    assert abs(dx + hitting_density(t, x)) < 1e-6


def test_derivative_link_flips_sign_for_negative_x():
    d = 1e-5
    dx = (gauss_kernel(1.0, -0.7 + d) - gauss_kernel(1.0, -0.7 - d)) / (2 * d)
    assert dx == pytest.approx(hitting_density(1.0, -0.7), abs=1e-8)


@pytest.mark.parametrize("t", [0.1, 1.0, 5.0])
def test_gauss_normalised(t):
    assert quad(lambda x: gauss_kernel(t, x), -60, 60, points=[0.0])[0] == pytest.approx(1, abs=1e-8)


@pytest.mark.parametrize("x", [0.2, 1.0, 3.0])
def test_hitting_density_normalised(x):
    # substitute s = x^2 / w^2; tail beyond w = 40 is zero in double precision
    def f(w):
        return 0.0 if w == 0 else hitting_density(x * x / w ** 2, x) * 2 * x * x / w ** 3
    assert quad(f, 0.0, 40.0, points=[0.5, 1, 2, 5])[0] == pytest.approx(1.0, abs=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 5.0), st.floats(0.05, 3.0))
def test_transform_agreement(s, x):
    top = (40 + abs(math.log(1e-10))) / s
    pts = kernels.hitting_peaks(x) + [top * 1e-4, top * 1e-2]
    qg = quad(lambda t: math.exp(-s * t) * gauss_kernel(t, x), 0, top, points=pts)[0]
    qh = quad(lambda t: math.exp(-s * t) * hitting_density(t, x), 0, top, points=pts)[0]
    assert qg == pytest.approx(laplace_G(s, x), rel=1e-7)
    assert qh == pytest.approx(laplace_H(s, x), rel=1e-7)


def test_overflowing_density_is_inf_not_error():
    assert hitting_density(5e-324, 1e-170) == math.inf
    assert np.isinf(hitting_density(np.array([5e-324]), np.array([1e-170])))[0]
