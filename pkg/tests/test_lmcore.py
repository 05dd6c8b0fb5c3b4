import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmround import lmcore
from lmround.lmcore import (
    ProcessKind,
    ProcessSpec,
    Series,
    elliptic_theta2,
    farima_autocorrelation,
    fgn_autocorrelation,
    riemann_zeta,
)

mp.mp.dps = 40


def fgn_reference(h, k):
    h, k = mp.mpf(h), mp.mpf(k)
    return (abs(k + 1) ** (2 * h) + abs(k - 1) ** (2 * h) - 2 * abs(k) ** (2 * h)) / 2


def farima_reference(h, k):
    h = mp.mpf(h)
    return mp.exp(mp.loggamma(1.5 - h) + mp.loggamma(h + k - 0.5)
                  - mp.loggamma(h - 0.5) - mp.loggamma(k + 1.5 - h))


def test_fgn_examples():
    assert fgn_autocorrelation(0.7, 0) == 1.0
    assert fgn_autocorrelation(0.7, 1) == pytest.approx((2**1.4 - 2) / 2, rel=1e-14)
    assert fgn_autocorrelation(0.7, 1) == pytest.approx(0.31951, abs=1e-5)


def test_fgn_boundary_limits():
    assert abs(fgn_autocorrelation(0.5 + 1e-9, 3)) < 1e-8
    assert fgn_autocorrelation(1 - 1e-9, 7) == pytest.approx(1.0, abs=1e-7)


@pytest.mark.parametrize("h", [0.55, 0.7, 0.85, 0.95, 0.999])
def test_fgn_matches_extended_precision(h):
    ks = [1, 2, 3, 4, 5, 9, 15, 100, 1234, 10**4, 10**5, 10**6, 10**7]
    got = fgn_autocorrelation(h, np.array(ks))
    for k, g in zip(ks, got):
        ref = float(fgn_reference(h, k))
        assert g == pytest.approx(ref, rel=1e-12), k


@given(h=st.floats(0.501, 0.999), k=st.integers(0, 10**7))
@settings(max_examples=60, deadline=None)
def test_fgn_property_extended_precision(h, k):
    assert fgn_autocorrelation(h, k) == pytest.approx(float(fgn_reference(h, k)), rel=1e-12)


def test_fgn_array_and_scalar_agree():
    ks = np.arange(0, 50)
    arr = fgn_autocorrelation(0.8, ks)
    assert arr.shape == ks.shape
    assert all(arr[k] == fgn_autocorrelation(0.8, int(k)) for k in ks)


def test_farima_examples():
    for h in (0.6, 0.7, 0.9):
        assert farima_autocorrelation(h, 1) == pytest.approx((h - 0.5) / (1.5 - h), rel=1e-14)
    assert farima_autocorrelation(0.7, 1) == pytest.approx(0.25, rel=1e-14)
    assert farima_autocorrelation(0.7, 0) == 1.0


@pytest.mark.parametrize("k", [2, 10, 100, 5000])
def test_farima_matches_log_gamma(k):
    assert farima_autocorrelation(0.7, k) == pytest.approx(float(farima_reference(0.7, k)), rel=1e-12)


@pytest.mark.parametrize("h", [0.6, 0.7, 0.85, 0.95])
@pytest.mark.parametrize("fn", [fgn_autocorrelation, farima_autocorrelation])
def test_autocorrelations_positive_and_nonincreasing(fn, h):
    r = fn(h, np.arange(1, 10**4 + 1))
    assert np.all(r > 0)
    assert np.all(np.diff(r) <= 0)


@pytest.mark.parametrize("kind", ["fgn", "farima"])
@pytest.mark.parametrize("h", [0.6, 0.7, 0.85, 0.95])
def test_power_law_amplitude(kind, h):
    spec = ProcessSpec(kind, h)
    k = 10**6
    scaled = spec.autocorrelation(k) * k ** (2 - 2 * h)
    assert scaled == pytest.approx(spec.asymptotic_acv().amplitude, rel=1e-3)


def test_process_spec_validation():
    with pytest.raises(ValueError):
        ProcessSpec("fgn", 0.5)
    with pytest.raises(ValueError):
        ProcessSpec("fgn", 1.0)
    with pytest.raises(ValueError):
        ProcessSpec("fgn", 0.7, variance=0.0)
    spec = ProcessSpec("farima", 0.8, 2.0)
    assert spec.kind is ProcessKind.FARIMA0D0
    assert spec.d == pytest.approx(0.3)
    assert ProcessSpec.from_dict(spec.to_dict()) == spec
    assert spec.autocovariance(0) == 2.0


def test_asymptotic_acv_exponent_range():
    with pytest.raises(ValueError):
        lmcore.AsymptoticACV(1.0, 0.2, 2.0)
    a = ProcessSpec("fgn", 0.7, 3.0).asymptotic_acv()
    assert a.amplitude == pytest.approx(0.7 * 0.4 * 3.0)
    assert a.exponent == pytest.approx(-0.6)
    assert a(10.0) == pytest.approx(a.amplitude * 10**-0.6)


def test_series_validation():
    with pytest.raises(ValueError):
        Series([1.0])
    with pytest.raises(ValueError):
        Series([1.0, math.nan])
    with pytest.raises(ValueError):
        Series(np.zeros((2, 2)))
    s = Series([1, 2, 3], {"seed": 1})
    assert len(s) == 3 and s.values.dtype == float


def test_theta2_examples():
    assert elliptic_theta2(0.0) == 0.0
    q = math.exp(-5.0)
    brute = 2 * sum(q ** ((k + 0.5) ** 2) for k in range(50))
    assert elliptic_theta2(q) == pytest.approx(brute, rel=1e-15)
    with pytest.raises(ValueError):
        elliptic_theta2(1.0)
    with pytest.raises(ValueError):
        elliptic_theta2(-0.1)


@given(st.floats(0.01, 0.999))
@settings(max_examples=40, deadline=None)
def test_theta2_truncation_against_longer_sum(q):
    value = elliptic_theta2(q)
    # ten times the terms the truncation rule used, in extended precision
    terms = 10 * (int(math.sqrt(37 * math.log(10) / -math.log(q))) + 2)
    ref = 2 * mp.fsum(mp.mpf(q) ** ((k + mp.mpf(0.5)) ** 2) for k in range(terms))
    assert value == pytest.approx(float(ref), rel=1e-14)


def test_theta2_partial_sums_increase():
    q = 0.97
    terms = np.array([q ** ((k + 0.5) ** 2) for k in range(200)])
    parts = np.cumsum(terms)
    assert np.all(np.diff(parts[:12]) > 0)
    assert np.all(np.diff(parts) >= 0)
    assert 2 * parts[-1] == pytest.approx(elliptic_theta2(q), rel=1e-14)


def test_zeta_classical_values():
    assert riemann_zeta(2.0) == pytest.approx(math.pi**2 / 6, rel=1e-14)
    assert riemann_zeta(4.0) == pytest.approx(math.pi**4 / 90, rel=1e-14)
    assert riemann_zeta(0.5) == pytest.approx(-1.4603545088095868, rel=1e-12)
    assert riemann_zeta(0.0) == -0.5
    assert riemann_zeta(-2.0) == 0.0
    with pytest.raises(ValueError):
        riemann_zeta(1.0)


@given(st.floats(-30, 80).filter(lambda s: abs(s - 1) > 1e-6))
@settings(max_examples=100, deadline=None)
def test_zeta_against_mpmath(s):
    ref = float(mp.zeta(s))
    assert riemann_zeta(s) == pytest.approx(ref, rel=1e-12, abs=1e-300)


def test_erf_and_log_gamma():
    assert lmcore.gaussian_error_fn(0.0) == 0.0
    assert lmcore.gaussian_error_fn(40.0) == 1.0
    assert lmcore.log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)
    with pytest.raises(ValueError):
        lmcore.log_gamma(0.0)
