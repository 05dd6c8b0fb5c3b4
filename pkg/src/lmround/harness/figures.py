"""Columnar data for the autocovariance, periodogram and DFA figures.

Each dataset holds one sample path before and after discretization together
with the theoretical curves it is compared against.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .. import discretize, theory
from ..discretize import DiscretizationSpec
from ..estimators import dfa_curve, periodogram, sample_acv
from ..lmcore import ProcessKind, ProcessSpec
from ..synth import SeedSpec, simulate_gaussian

DEFAULT_MAX_LAG = 1000
# the exact DFA expectation is O(m^2); larger boxes only get the leading term
EXACT_DFA_MAX_BOX = 4096


class FigureKind(str, enum.Enum):
    ACV = "acv"
    PERIODOGRAM = "periodogram"
    DFA = "dfa"


def _transform_theory(process: ProcessSpec, transform: DiscretizationSpec,
                      max_j: int = theory.DEFAULT_MAX_J):
    coeffs = theory.hermite_coefficients(transform, process.variance, max_j)
    cov_scale, _ = theory.scaling_factors(transform, process.variance)
    return coeffs, cov_scale


def _transformed_acv_fn(process: ProcessSpec, coeffs):
    def acv(k):
        k = np.asarray(k)
        rho = process.autocorrelation(k)
        return np.where(k == 0, coeffs.total_variance, theory.transformed_acv(rho, coeffs))
    return acv


def acv_figure(process, seed, n, transform, max_lag=DEFAULT_MAX_LAG) -> dict:
    h = process.hurst
    x = simulate_gaussian(process, n, seed)
    xd = discretize.apply(x, transform)
    lag = np.arange(1, min(max_lag, n - 1) + 1)
    coeffs, cov_scale = _transform_theory(process, transform)
    asym = process.asymptotic_acv()
    lam = asym.amplitude
    gamma = process.autocovariance(lag)
    gamma_d = theory.transformed_acv(process.autocorrelation(lag), coeffs)
    bias = theory.hosking_bias(lam, h, n)
    bias_d = theory.hosking_bias(cov_scale * lam, h, n)
    return {
        "lag": lag,
        "sample": sample_acv(x, lag[-1])[1:],
        "sample_discretized": sample_acv(xd, lag[-1])[1:],
        "asymptotic": asym(lag),
        "asymptotic_discretized": cov_scale * asym(lag),
        "corrected": gamma + bias,
        "corrected_discretized": gamma_d + bias_d,
    }


def periodogram_figure(process, seed, n, transform) -> dict:
    x = simulate_gaussian(process, n, seed)
    xd = discretize.apply(x, transform)
    p = periodogram(x)
    pd = periodogram(xd)
    _, cov_scale = _transform_theory(process, transform)
    b0 = process.asymptotic_acv().amplitude
    lead = theory.leading_spectral_constant(process.hurst) * b0 * p.frequencies ** (1 - 2 * process.hurst)
    return {
        "frequency": p.frequencies,
        "sample": p.ordinates,
        "sample_discretized": pd.ordinates,
        "leading": lead,
        "leading_discretized": cov_scale * lead,
    }


def dfa_figure(process, seed, n, transform, exact_max_box=EXACT_DFA_MAX_BOX) -> dict:
    h = process.hurst
    x = simulate_gaussian(process, n, seed)
    xd = discretize.apply(x, transform)
    c = dfa_curve(x)
    cd = dfa_curve(xd, c.box_sizes)
    coeffs, cov_scale = _transform_theory(process, transform)
    amp = process.asymptotic_acv().amplitude
    m = c.box_sizes
    lead = theory.dfa_asymptote(h, amp, m)
    acv_d = _transformed_acv_fn(process, coeffs)
    exact = np.full(m.size, math.nan)
    exact_d = np.full(m.size, math.nan)
    for i, mi in enumerate(m):
        if mi <= exact_max_box:
            exact[i] = theory.expected_dfa_exact(process.autocovariance, process.variance, int(mi))
            exact_d[i] = theory.expected_dfa_exact(acv_d, coeffs.total_variance, int(mi))
    return {
        "box_size": m,
        "fluctuation": c.fluctuations,
        "fluctuation_discretized": cd.fluctuations,
        "leading": np.sqrt(lead),
        "leading_discretized": np.sqrt(cov_scale * lead),
        "exact": np.sqrt(exact),
        "exact_discretized": np.sqrt(exact_d),
    }


def figure_data(kind, process: ProcessSpec, seed: SeedSpec, n: int = 1 << 14,
                transform: DiscretizationSpec | None = None, **kwargs) -> dict:
    """Empirical curves plus theory overlays; round-off at chi = 0.1 by default."""
    kind = FigureKind(kind)
    if transform is None:
        transform = DiscretizationSpec.from_chi(0.1, process.variance)
    if kind is FigureKind.ACV:
        return acv_figure(process, seed, n, transform, **kwargs)
    if kind is FigureKind.PERIODOGRAM:
        return periodogram_figure(process, seed, n, transform)
    return dfa_figure(process, seed, n, transform, **kwargs)


def default_process(hurst: float) -> ProcessSpec:
    return ProcessSpec(ProcessKind.FGN, hurst, 1.0)
