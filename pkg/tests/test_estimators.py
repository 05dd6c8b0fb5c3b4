import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lmround import theory
from lmround.estimators import (
    DegenerateInputError,
    DfaCurve,
    InsufficientDataError,
    bandwidth,
    box_fluctuation,
    dfa_box_sizes,
    dfa_curve,
    dfa_estimate,
    local_whittle,
    periodogram,
    sample_acv,
    select_boxes,
    whittle_objective,
)
from lmround.lmcore import ProcessSpec, fgn_autocorrelation
from lmround.synth import GaussianSampler, SeedSpec, simulate_gaussian

FGN = ProcessSpec("fgn", 0.7)


def fgn_path(n, rep=0, seed=3):
    return simulate_gaussian(FGN, n, SeedSpec(seed, rep)).values


# ---------------------------------------------------------------------------
# periodogram


def test_constant_series_has_zero_periodogram():
    p = periodogram(np.full(64, 3.5))
    assert np.allclose(p.ordinates, 0.0, atol=1e-25)
    assert p.frequencies[0] == pytest.approx(2 * math.pi / 64)
    assert len(p) == 32


def test_cosine_spike():
    n, k = 256, 9
    t = np.arange(1, n + 1)
    p = periodogram(np.cos(2 * math.pi * k / n * t))
    assert p.ordinates[k - 1] == pytest.approx(n / (8 * math.pi), rel=1e-12)
    others = np.delete(p.ordinates, k - 1)
    assert others.max() < 1e-20


def test_against_direct_dft():
    n = 64
    x = np.random.default_rng(0).standard_normal(n)
    t = np.arange(1, n + 1)
    p = periodogram(x)
    for j in range(1, n // 2 + 1):
        w = 2 * math.pi * j / n
        direct = abs(np.sum(x * np.exp(1j * t * w))) ** 2 / (2 * math.pi * n)
        assert p.ordinates[j - 1] == pytest.approx(direct, rel=1e-10)


def test_parseval():
    n = 128
    x = np.random.default_rng(1).standard_normal(n)
    x -= x.mean()
    p = periodogram(x)
    # two-sided sum of ordinates over nonzero Fourier frequencies
    two_sided = 2 * p.ordinates[:-1].sum() + p.ordinates[-1]
    assert 2 * math.pi * two_sided / n == pytest.approx(np.mean(x * x), rel=1e-12)


@given(arrays(np.float64, st.integers(4, 64), elements=st.floats(-100, 100)), st.floats(-1e3, 1e3))
@settings(max_examples=60, deadline=None)
def test_periodogram_shift_invariant(x, c):
    a = periodogram(x).ordinates
    b = periodogram(x + c).ordinates
    assert np.allclose(a, b, rtol=1e-7, atol=1e-7 * (1 + np.abs(x).max() + abs(c)) ** 2)


def test_periodogram_needs_four_points():
    with pytest.raises(InsufficientDataError):
        periodogram(np.ones(3))


# ---------------------------------------------------------------------------
# sample autocovariance


def test_sample_acv_brute_force():
    x = np.random.default_rng(2).standard_normal(50)
    y = x - x.mean()
    brute = [np.dot(y[: 50 - k], y[k:]) / 50 for k in range(20)]
    assert np.allclose(sample_acv(x, 19), brute, atol=1e-14)
    assert sample_acv(x, 0)[0] == pytest.approx(np.var(x), rel=1e-13)


def test_sample_acv_alternating():
    x = np.tile([1.0, -1.0], 500)
    assert sample_acv(x, 1)[1] == pytest.approx(-1.0, abs=2e-3)


def test_sample_acv_lag_range():
    with pytest.raises(ValueError):
        sample_acv(np.ones(5), 5)


@pytest.mark.slow
def test_sample_acv_matches_bias_corrected_theory():
    n, reps, k = 1 << 14, 1000, 10
    sampler = GaussianSampler.for_process(FGN, n)
    est = np.array([sample_acv(sampler.draw(SeedSpec(8, r).rng())[0], k)[k] for r in range(reps)])
    target = fgn_autocorrelation(0.7, k) + theory.hosking_bias(0.28, 0.7, n)
    se = est.std(ddof=1) / math.sqrt(reps)
    assert abs(est.mean() - target) < 3 * se


# ---------------------------------------------------------------------------
# local Whittle


def test_bandwidth():
    assert bandwidth(1024, 0.5) == 32
    assert bandwidth(1 << 14, 0.8) == 2352
    with pytest.raises(ValueError):
        bandwidth(1024, 1.0)


@given(st.floats(1e-3, 1e3))
@settings(max_examples=30, deadline=None)
def test_lw_scale_invariant(a):
    x = fgn_path(1024, 1)
    assert local_whittle(a * x, 64) == pytest.approx(local_whittle(x, 64), abs=2e-6)


def test_lw_objective_shift_under_scaling():
    p = periodogram(fgn_path(512))
    w, i = p.frequencies[:40], p.ordinates[:40]
    h = np.linspace(0.1, 0.9, 9)
    diff = whittle_objective(h, w, 4.0 * i) - whittle_objective(h, w, i)
    assert np.allclose(diff, math.log(4.0), atol=1e-12)


def test_lw_matches_dense_grid():
    x = fgn_path(2048, 2)
    p = periodogram(x)
    w, i = p.frequencies[:100], p.ordinates[:100]
    grid = np.linspace(0, 1, 200001)
    best = grid[np.argmin(whittle_objective(grid, w, i))]
    assert local_whittle(x, 100) == pytest.approx(best, abs=1e-5)


def test_lw_recovers_hurst_on_average():
    est = [local_whittle(fgn_path(4096, r), 300) for r in range(40)]
    assert np.mean(est) == pytest.approx(0.7, abs=0.03)


def test_lw_errors():
    with pytest.raises(DegenerateInputError):
        local_whittle(np.ones(64), 8)
    with pytest.raises(InsufficientDataError):
        local_whittle(np.ones(3), 1)
    with pytest.raises(InsufficientDataError):
        local_whittle(fgn_path(64), 33)


def test_lw_boundary_minimum():
    # a steeply falling periodogram pins the minimum at the upper end of [0, 1]
    n = 256
    p = periodogram(fgn_path(n))
    w = p.frequencies[:20]
    fake = w ** -5.0
    grid = np.linspace(0, 1, 101)
    assert np.argmin(whittle_objective(grid, w, fake)) == 100


# ---------------------------------------------------------------------------
# DFA


def test_box_sizes():
    sizes = dfa_box_sizes(1 << 14)
    assert sizes[0] == 4 and sizes[-1] <= 4096
    assert np.all(np.diff(sizes) > 0)
    raw = 4 * 2 ** (np.arange(sizes.size + 5) / 8)
    assert set(sizes) <= set(np.rint(raw).astype(int))
    with pytest.raises(InsufficientDataError):
        dfa_box_sizes(15)


def brute_box_fluctuation(profile, m):
    boxes = profile.size // m
    t = np.arange(1, m + 1)
    total = 0.0
    for b in range(boxes):
        y = profile[b * m : (b + 1) * m]
        coef = np.polyfit(t, y, 1)
        total += np.sum((y - np.polyval(coef, t)) ** 2)
    return total / (boxes * m)


@pytest.mark.parametrize("m", [4, 5, 17, 64])
def test_box_fluctuation_matches_polyfit(m):
    profile = np.cumsum(np.random.default_rng(m).standard_normal(1000))
    assert box_fluctuation(profile, m) == pytest.approx(brute_box_fluctuation(profile, m), rel=1e-10)


def test_constant_input_has_no_fluctuation():
    curve = dfa_curve(np.full(512, 2.5))
    assert np.all(curve.fluctuations < 1e-9)


@given(st.floats(0.01, 100), st.floats(-100, 100))
@settings(max_examples=30, deadline=None)
def test_dfa_affine_invariant(a, b):
    x = fgn_path(1024, 4)
    h0 = dfa_estimate(dfa_curve(x))
    assert dfa_estimate(dfa_curve(a * x + b)) == pytest.approx(h0, abs=1e-8)


def test_power_law_curve():
    m = dfa_box_sizes(1 << 12)
    curve = DfaCurve(m, m.astype(float) ** 0.7)
    for q in (0.25, 0.5, 0.75, 1.0):
        for by in ("range", "count"):
            assert dfa_estimate(curve, q, by) == pytest.approx(0.7, abs=1e-12)


def test_selection_modes():
    m = dfa_box_sizes(1024)
    curve = DfaCurve(m, np.ones(m.size))
    half = select_boxes(curve, 0.5)
    logm = np.log10(m)
    assert np.all(logm[half] >= (logm[0] + logm[-1]) / 2 - 1e-12)
    assert select_boxes(curve, 0.5, by="count").sum() == math.ceil(m.size / 2)
    assert select_boxes(curve, 1.0).all()
    with pytest.raises(ValueError):
        select_boxes(curve, 0.0)
    with pytest.raises(ValueError):
        select_boxes(curve, 0.5, by="bogus")


def test_too_few_boxes():
    curve = dfa_curve(np.random.default_rng(0).standard_normal(20))
    with pytest.raises(InsufficientDataError):
        dfa_estimate(curve)
    with pytest.raises(InsufficientDataError):
        dfa_curve(np.ones(8))


def test_curve_validation():
    with pytest.raises(ValueError):
        DfaCurve([4, 4, 5], [1, 2, 3])
    with pytest.raises(ValueError):
        DfaCurve([4, 5], [1.0])


@pytest.mark.slow
def test_mean_fluctuation_matches_exact():
    n, reps, m = 1 << 14, 1000, 256
    sampler = GaussianSampler.for_process(FGN, n)
    est = np.array([box_fluctuation(np.cumsum(sampler.draw(SeedSpec(9, r).rng())[0]), m)
                    for r in range(reps)])
    exact = theory.expected_dfa_exact(lambda k: fgn_autocorrelation(0.7, k), 1.0, m)
    se = est.std(ddof=1) / math.sqrt(reps)
    assert abs(est.mean() - exact) < 3 * se
