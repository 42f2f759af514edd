import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import ndtr, ndtri

from stickybm.errors import DomainError
from stickybm.simulate import SbmSample
from stickybm.stats import (VerificationReport, atom_fraction, ks_critical, ks_statistic,
                            make_report, manifest, manifest_json, mean_and_se)


def test_critical_value_matches_asymptotic_table():
    assert ks_critical(10_000) * math.sqrt(10_000) == pytest.approx(1.6276, abs=1e-4)


def test_ks_inverse_transform_sample():
    n = 10_000
    rng = np.random.default_rng(0)
    x = np.sort(ndtri(rng.random(n)))
    assert ks_statistic(x, ndtr) < 1.63 / math.sqrt(n)


def test_ks_single_sample_at_median():
    assert ks_statistic([0.0], ndtr) == pytest.approx(0.5)


def test_ks_all_at_zero():
    assert ks_statistic(np.zeros(50), ndtr) == pytest.approx(0.5)


def test_ks_agrees_with_scipy():
    from scipy.stats import kstest
    x = np.sort(np.random.default_rng(1).normal(0.1, 1.0, 500))
    assert ks_statistic(x, ndtr) == pytest.approx(kstest(x, "norm").statistic, abs=1e-15)


def test_ks_input_checks():
    with pytest.raises(DomainError):
        ks_statistic([1.0, 0.0], ndtr)
    with pytest.raises(DomainError):
        ks_statistic([], ndtr)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=60))
def test_ks_invariant_under_increasing_warp(xs):
    x = np.sort(np.array(xs))
    warped = np.exp(x)
    d1 = ks_statistic(x, ndtr)
    d2 = ks_statistic(warped, lambda w: ndtr(np.log(w)))
    assert d1 == pytest.approx(d2, abs=1e-12)
    assert 0.0 <= d1 <= 1.0


def test_atom_fraction_extremes():
    stuck = [SbmSample(0.0, 0.5, 0.5, True)] * 10
    free = [SbmSample(0.3, 0.5, 0.1, False)] * 10
    assert atom_fraction(stuck) == (1.0, 0.0)
    assert atom_fraction(free) == (0.0, 0.0)


def test_atom_fraction_bool_array():
    p, se = atom_fraction(np.array([True, False, False, True]))
    assert p == 0.5 and se == pytest.approx(math.sqrt(0.25 / 4))
    with pytest.raises(DomainError):
        atom_fraction([])


def test_mean_and_se():
    m, se = mean_and_se([1.0, 2.0, 3.0])
    assert m == 2.0 and se == pytest.approx(1.0 / math.sqrt(3))
    assert mean_and_se([4.0]) == (4.0, 0.0)


def test_report_pass_rules():
    r = make_report("a", 1.0, 1.05, 0.01, standard_error=0.02)
    assert r.passed and r.bound == pytest.approx(0.07)
    assert not make_report("b", 1.0, 1.05, 0.01).passed
    rel = make_report("c", 2.0, 2.0001, 1e-4, metric="rel")
    assert rel.passed and rel.rel_err == pytest.approx(5e-5)
    assert make_report("d", 0.0, 0.0, 0.0).passed


@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(0, 1),
       st.one_of(st.none(), st.floats(0, 1)))
def test_report_is_pure_function_of_fields(target, estimate, tol, se):
    a = make_report("x", target, estimate, tol, standard_error=se)
    b = make_report("x", target, estimate, tol, standard_error=se)
    assert a == b
    assert a.passed == (a.abs_err <= a.bound)


def test_manifest_schema_and_stability():
    reps = [make_report("one", 1.0, 1.0 + 1e-13, 1e-12),
            make_report("two", 0.5, 0.6, 0.01)]
    m = manifest(reps, {"seed": 3})
    assert m["passed"] is False and m["n_failed"] == 1 and m["n_reports"] == 2
    assert m["config"] == {"seed": 3}
    text = manifest_json(reps, {"seed": 3})
    assert text == manifest_json(reps, {"seed": 3})
    back = json.loads(text)
    assert back["reports"][0]["name"] == "one"
    assert set(back["reports"][0]) >= {"target", "estimate", "abs_err", "rel_err",
                                       "tolerance", "standard_error", "passed", "bound"}


def test_report_line():
    r = make_report("thing", 1.0, 1.0, 1e-3)
    assert r.line().startswith("PASS  thing")
    assert isinstance(r, VerificationReport)
