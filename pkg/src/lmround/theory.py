"""Closed-form and semi-analytic quantities for round-off and sign transforms.

Conventions: the underlying Gaussian has variance ``D`` and correlation
``rho``; the transform acts on ``X = sqrt(D) Z`` with ``Z`` standard normal.
Hermite coefficients use normalized polynomials, so that
``Cov[g(X), g(Y)] = sum_j g_j^2 rho^j``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import special

from .discretize import DiscretizationSpec
from .lmcore import (
    ProcessKind,
    check_hurst,
    elliptic_theta2,
    fgn_autocorrelation,
    riemann_zeta,
)

# bins are dropped once 1.09 exp(-a^2/4) (Cramer's bound) is below 1e-17
BIN_CUTOFF = math.sqrt(4.0 * math.log(1.09e17))
# moment sums stop where erfc(a / sqrt 2) has underflowed well past 1e-17 relative
MOMENT_CUTOFF = 12.0
DEFAULT_MAX_J = 41

C0_REL_TOL = 1e-12
C0_MAX_I = 40
C0_MAX_J = 20

POLYLOG_MAX_TERMS = 80
INTEGER_ORDER_TOL = 1e-9
NUMERIC_CHUNK = 1 << 14
NUMERIC_MAX_LAG = 1 << 24

BOUNDARY_TOL = 1e-12


class UnsupportedRegionError(ValueError):
    """Parameters fall outside every case of the second-order expansion."""


class ConvergenceError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Hermite coefficients


@dataclass(frozen=True)
class HermiteCoefficients:
    """Odd Hermite coefficients ``g_1, g_3, ..., g_J`` of a transform.

    ``chi`` is None for the sign transform. ``total_variance`` is the
    variance of the transformed variable (``D_d``, or 1 for the sign), which
    equals the full series ``sum_j g_j^2``.
    """

    variance: float
    chi: float | None
    coeffs: tuple[tuple[int, float], ...]
    total_variance: float

    @property
    def indices(self) -> np.ndarray:
        return np.array([j for j, _ in self.coeffs], dtype=int)

    @property
    def values(self) -> np.ndarray:
        return np.array([g for _, g in self.coeffs])

    @property
    def max_j(self) -> int:
        return self.coeffs[-1][0]

    def get(self, j: int) -> float:
        """``g_j``, zero for even ``j``; KeyError beyond the stored range."""
        if j % 2 == 0 and 0 < j <= self.max_j:
            return 0.0
        for i, g in self.coeffs:
            if i == j:
                return g
        raise KeyError(j)

    def partial_sums(self) -> np.ndarray:
        return np.cumsum(self.values**2)

    def missing_power(self) -> float:
        """``total_variance - sum_{j<=J} g_j^2``, floored at zero."""
        return max(self.total_variance - float(self.partial_sums()[-1]), 0.0)

    def tail_bound(self, rho) -> np.ndarray | float:
        """Bound on the truncation error of ``sum_j g_j^2 rho^j``."""
        rho = np.abs(np.asarray(rho, dtype=float))
        return self.missing_power() * rho ** (self.max_j + 2)


def _check_chi(chi: float) -> float:
    chi = float(chi)
    if not chi > 0:
        raise ValueError(f"chi must be positive, got {chi}")
    return chi


def _check_variance(variance: float) -> float:
    variance = float(variance)
    if not variance > 0:
        raise ValueError(f"variance must be positive, got {variance}")
    return variance


def _bin_edges(chi: float) -> np.ndarray:
    # standardized upper bin edges a_n = (n - 1/2)/sqrt(chi), n >= 1
    n_max = max(2, math.ceil(BIN_CUTOFF * math.sqrt(chi) + 0.5)) + 1
    return (np.arange(1, n_max + 1) - 0.5) / math.sqrt(chi)


def _round_coefficients(chi: float, variance: float, max_j: int) -> list[tuple[int, float]]:
    # Summation by parts over the bins leaves
    #   g_j = delta / sqrt(j) * sum_{n in Z} h_{j-1}(a_n) phi(a_n),
    # with h the normalized Hermite polynomials; for odd j the summand is even.
    delta = math.sqrt(variance / chi)
    a = _bin_edges(chi)
    weight = np.exp(-0.5 * a * a) / math.sqrt(2.0 * math.pi)
    h_prev = np.zeros_like(a)
    h_cur = np.ones_like(a)
    out = []
    for k in range(max_j):
        # h_cur holds h_k; g_{k+1} is nonzero only for even k
        if k % 2 == 0:
            total = 2.0 * float(np.dot(h_cur, weight))
            out.append((k + 1, delta * total / math.sqrt(k + 1)))
        h_prev, h_cur = h_cur, (a * h_cur - math.sqrt(k) * h_prev) / math.sqrt(k + 1)
    return out


def _sign_coefficients(max_j: int) -> list[tuple[int, float]]:
    # g_j = 2 He_{j-1}(0) phi(0) / sqrt(j!); He_{2m}(0) = (-1)^m (2m-1)!!
    out = []
    for j in range(1, max_j + 1, 2):
        m = (j - 1) // 2
        # log of (2m-1)!! / sqrt(j!) via Gamma functions
        log_mag = (
            math.lgamma(2 * m + 1) - m * math.log(2.0) - math.lgamma(m + 1)
            - 0.5 * math.lgamma(j + 1)
        )
        out.append((j, (-1) ** m * 2.0 / math.sqrt(2.0 * math.pi) * math.exp(log_mag)))
    return out


def hermite_coefficients(
    spec: DiscretizationSpec, variance: float = 1.0, max_j: int = DEFAULT_MAX_J
) -> HermiteCoefficients:
    """Odd Hermite coefficients up to ``max_j`` of a round-off or sign transform."""
    variance = _check_variance(variance)
    if max_j < 1 or max_j % 2 == 0:
        raise ValueError(f"max_j must be a positive odd integer, got {max_j}")
    if spec.is_sign:
        return HermiteCoefficients(variance, None, tuple(_sign_coefficients(max_j)), 1.0)
    chi = spec.chi(variance)
    coeffs = _round_coefficients(chi, variance, max_j)
    return HermiteCoefficients(variance, chi, tuple(coeffs), discretized_variance(chi, variance))


def hermite_coefficients_chi(chi: float, variance: float = 1.0,
                             max_j: int = DEFAULT_MAX_J) -> HermiteCoefficients:
    return hermite_coefficients(DiscretizationSpec.from_chi(_check_chi(chi), variance), variance, max_j)


def _half_theta_sums(chi: float) -> tuple[float, float]:
    # S0 = sum_{k>=0} q^{(k+1/2)^2}, S2 = sum_{k>=0} (k+1/2)^2 q^{(k+1/2)^2}, q = e^{-1/(2 chi)}
    s0 = s2 = 0.0
    k = 0
    while True:
        x2 = (k + 0.5) ** 2
        t = math.exp(-x2 / (2.0 * chi))
        s0 += t
        s2 += x2 * t
        if x2 * t <= 1e-16 * s2 and t <= 1e-16 * s0:
            break
        k += 1
    return s0, s2


def g1(chi: float, variance: float = 1.0) -> float:
    """First Hermite coefficient of round-off, ``sqrt(D) theta_2(e^{-1/2chi}) / sqrt(2 pi chi)``."""
    chi = _check_chi(chi)
    variance = _check_variance(variance)
    theta = elliptic_theta2(math.exp(-0.5 / chi))
    return math.sqrt(variance) * theta / math.sqrt(2.0 * math.pi * chi)


def g3(chi: float, variance: float = 1.0) -> float:
    """Third Hermite coefficient of round-off."""
    chi = _check_chi(chi)
    variance = _check_variance(variance)
    s0, s2 = _half_theta_sums(chi)
    # delta / sqrt 3! * 2 sum_{n>=1} (a_n^2 - 1) phi(a_n)
    return math.sqrt(variance) * (s2 / chi - s0) / math.sqrt(3.0 * math.pi * chi)


SIGN_G1 = math.sqrt(2.0 / math.pi)
SIGN_G3 = -1.0 / math.sqrt(3.0 * math.pi)


# ---------------------------------------------------------------------------
# moments of the rounded variable


def _log_bin_masses(chi: float) -> tuple[np.ndarray, np.ndarray]:
    """Bin indices ``n >= 1`` and log P(X_d = n delta)."""
    n_max = max(2, math.ceil(MOMENT_CUTOFF * math.sqrt(chi) + 0.5)) + 1
    n = np.arange(1, n_max + 1, dtype=float)
    lo = special.log_ndtr(-(n - 0.5) / math.sqrt(chi))
    hi = special.log_ndtr(-(n + 0.5) / math.sqrt(chi))
    # P = Phi(-lo_edge) - Phi(-hi_edge), differenced in log space
    return n, lo + np.log1p(-np.exp(hi - lo))


def discretized_variance(chi: float, variance: float = 1.0) -> float:
    """Variance ``D_d`` of the rounded variable."""
    chi = _check_chi(chi)
    variance = _check_variance(variance)
    n, logp = _log_bin_masses(chi)
    return variance / chi * 2.0 * float(np.sum(n**2 * np.exp(logp)))


def discretized_kurtosis(chi: float) -> float:
    """Kurtosis ``E[X_d^4] / E[X_d^2]^2`` of the rounded variable."""
    chi = _check_chi(chi)
    n, logp = _log_bin_masses(chi)
    # scale by the first bin so tiny chi neither underflows nor loses digits
    w = np.exp(logp - logp[0])
    m2 = float(np.sum(n**2 * w))
    m4 = float(np.sum(n**4 * w))
    return m4 / (2.0 * math.exp(logp[0]) * m2 * m2)


# ---------------------------------------------------------------------------
# autocovariances


def transformed_acv(rho, coeffs: HermiteCoefficients):
    """``sum_j g_j^2 rho^j`` over the stored coefficients.

    The truncation error is at most ``coeffs.tail_bound(rho)``.
    """
    scalar = np.isscalar(rho)
    r = np.asarray(rho, dtype=float)
    if np.any(np.abs(r) > 1.0):
        raise ValueError("correlations must lie in [-1, 1]")
    g2 = coeffs.values**2
    # Horner in rho^2, then one factor of rho
    r2 = r * r
    acc = np.zeros_like(r)
    for c in g2[::-1]:
        acc = acc * r2 + c
    out = acc * r
    return float(out) if scalar else out


def sign_acv(rho):
    """Arcsine law for the autocovariance of the sign process."""
    r = np.asarray(rho, dtype=float)
    if np.any(np.abs(r) > 1.0):
        raise ValueError("correlations must lie in [-1, 1]")
    out = 2.0 / math.pi * np.arcsin(r)
    return float(out) if np.isscalar(rho) else out


def acv_scaling_factor(chi: float, variance: float = 1.0) -> tuple[float, float]:
    """Large-lag ratios ``(gamma_d / gamma, rho_d / rho)`` for round-off.

    These are ``g_1^2 / D`` and ``g_1^2 / D_d``; both are scale free.
    """
    chi = _check_chi(chi)
    g = g1(chi, variance)
    return g * g / variance, g * g / discretized_variance(chi, variance)


def scaling_factors(spec: DiscretizationSpec | None, variance: float = 1.0) -> tuple[float, float]:
    """As :func:`acv_scaling_factor` but for any transform; None means no transform."""
    if spec is None:
        return 1.0, 1.0
    if spec.is_sign:
        return 2.0 / (math.pi * variance), 2.0 / math.pi
    return acv_scaling_factor(spec.chi(variance), variance)


def hosking_bias(lambda_amp: float, h: float, n: int) -> float:
    """Leading finite-sample bias of the divide-by-n sample autocovariance."""
    h = check_hurst(h)
    if n < 2:
        raise ValueError("n must be at least 2")
    return -lambda_amp * n ** (2 * h - 2) / (h * (2 * h - 1))


# ---------------------------------------------------------------------------
# spectral density


def _fgn_binomials(h: float, count: int) -> np.ndarray:
    """``binom(2H, 2i+2)`` for ``i < count``: the 1/k^2 series of the fGn correlation."""
    two_h = 2.0 * h
    out = np.empty(count)
    c = 1.0
    k = 0
    for i in range(count):
        while k < 2 * i + 2:
            c *= (two_h - k) / (k + 1)
            k += 1
        out[i] = c
    return out


def _truncated_power(coef: np.ndarray, power: int) -> np.ndarray:
    out = np.zeros_like(coef)
    out[0] = 1.0
    for _ in range(power):
        out = np.convolve(out, coef)[: coef.size]
    return out


def leading_spectral_constant(h: float) -> float:
    """``c_phi = Gamma(2H-1) sin(pi H) / pi``."""
    h = check_hurst(h)
    return math.gamma(2 * h - 1) * math.sin(math.pi * h) / math.pi


class SecondOrderKind(str, enum.Enum):
    CONSTANT = "constant"
    POWER = "power"
    LOG = "log"


@dataclass(frozen=True)
class SecondOrder:
    kind: SecondOrderKind
    coefficient: float | None
    exponent: float | None = None

    def __call__(self, omega):
        if self.coefficient is None:
            raise ValueError("second-order constant is not available in closed form")
        w = np.asarray(omega, dtype=float)
        if self.kind is SecondOrderKind.CONSTANT:
            return self.coefficient * np.ones_like(w)
        if self.kind is SecondOrderKind.POWER:
            return self.coefficient * w**self.exponent
        return self.coefficient * np.log(1.0 / w)


@dataclass(frozen=True)
class SpectralExpansion:
    """``phi_d(w) ~ leading_amplitude w^leading_exponent + second_order(w)``."""

    leading_amplitude: float
    leading_exponent: float
    second_order: SecondOrder
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.leading_amplitude > 0:
            raise ValueError("leading amplitude must be positive")

    def leading(self, omega):
        return self.leading_amplitude * np.asarray(omega, dtype=float) ** self.leading_exponent

    def __call__(self, omega):
        return self.leading(omega) + self.second_order(omega)


def _transform_coefficients(chi: float | None, variance: float, max_j: int) -> HermiteCoefficients:
    if chi is None:
        return hermite_coefficients(DiscretizationSpec.sign(), variance, max_j)
    return hermite_coefficients_chi(chi, variance, max_j)


def fgn_c0(h: float, coeffs: HermiteCoefficients, max_i: int = C0_MAX_I,
           max_j: int = C0_MAX_J, rel_tol: float = C0_REL_TOL) -> tuple[float, dict]:
    """Constant second-order term of the transformed fGn spectral density.

    ``c0 = D_d/(2 pi) + (1/pi) sum_j g_{2j+1}^2 Z_j``, where
    ``Z_j = sum_i p_{j,i} zeta((2j+1)(2-2H) + 2i)`` and ``p_{j,i}`` are the
    coefficients of the (2j+1)-th power of the binomial series of the fGn
    correlation. ``Z_j`` is split as ``rho(1)^{2j+1} + sum_i p_{j,i}(zeta - 1)``,
    which converges geometrically in ``i``.
    """
    h = check_hurst(h)
    if h >= 5.0 / 6.0:
        raise UnsupportedRegionError("the constant term exists only for H < 5/6")
    base = _fgn_binomials(h, max_i + 1)
    rho1 = fgn_autocorrelation(h, 1)
    s_unit = 2.0 - 2.0 * h
    total = coeffs.total_variance / (2.0 * math.pi)
    used_j = 0
    last = 0.0
    for j in range(0, max_j + 1):
        order = 2 * j + 1
        if order > coeffs.max_j:
            break
        g2 = coeffs.get(order) ** 2
        p = _truncated_power(base, order)
        s = order * s_unit
        zeta_minus_one = np.array([riemann_zeta(s + 2 * i) - 1.0 for i in range(max_i + 1)])
        z = rho1**order + float(np.dot(p, zeta_minus_one))
        last = g2 * z / math.pi
        total += last
        used_j = j
        if j > 0 and abs(last) < rel_tol * abs(total):
            break
    # remaining Hermite power times the largest remaining correlation sum
    tail = coeffs.missing_power() * rho1 ** (2 * used_j + 3) / math.pi
    diag = {"j_terms": used_j + 1, "i_terms": max_i + 1, "last_term": last, "tail_bound": tail}
    return total, diag


def spectral_expansion(
    h: float,
    chi: float | None,
    b0: float,
    beta1: float = 2.0,
    *,
    b1: float | None = None,
    process: ProcessKind | str = ProcessKind.FGN,
    variance: float | None = None,
    max_j: int = DEFAULT_MAX_J,
) -> SpectralExpansion:
    """Small-frequency expansion of the transformed process' spectral density.

    ``b0`` is the amplitude of ``gamma(k) ~ b0 k^(2H-2)`` and ``beta1`` the
    order of the first correction ``b1 k^(2H-2-beta1)``. ``chi=None`` selects
    the sign transform. For the fGn the variance defaults to
    ``b0 / (H(2H-1))``, ``b1`` to ``binom(2H, 4) D`` and the constant term is
    computed exactly; for other processes it is left as None.
    """
    h = check_hurst(h)
    process = ProcessKind(process)
    if not b0 > 0:
        raise ValueError("b0 must be positive")
    if variance is None:
        if process is not ProcessKind.FGN:
            raise ValueError("variance is required for non-fGn processes")
        variance = b0 / (h * (2 * h - 1))
    variance = _check_variance(variance)
    if process is ProcessKind.FGN and b1 is None:
        b1 = float(_fgn_binomials(h, 2)[1]) * variance

    coeffs = _transform_coefficients(chi, variance, max_j)
    g1v = coeffs.get(1)
    g3v = coeffs.get(3)
    cov_scale = g1v * g1v / variance
    amp = cov_scale * leading_spectral_constant(h) * b0
    cubic = g3v * g3v * (b0 / variance) ** 3

    def near(a, b):
        return abs(a - b) < BOUNDARY_TOL

    lin_edge = (1.0 + beta1) / 2.0
    cross_edge = 1.0 - beta1 / 4.0
    five_six = 5.0 / 6.0
    diag: dict = {"cov_scale": cov_scale, "g1": g1v, "g3": g3v}

    def need_b1():
        if b1 is None:
            raise ValueError("b1 is required in this region")
        return b1

    if h < min(five_six, lin_edge) and not (near(h, five_six) or near(h, lin_edge)):
        c0 = None
        if process is ProcessKind.FGN and near(beta1, 2.0):
            c0, c0_diag = fgn_c0(h, coeffs)
            diag.update(c0_diag)
        second = SecondOrder(SecondOrderKind.CONSTANT, c0)
    elif near(h, five_six) and near(h, lin_edge):
        second = SecondOrder(SecondOrderKind.LOG, (cov_scale * need_b1() + cubic) / math.pi)
    elif near(h, lin_edge) and h < five_six:
        second = SecondOrder(SecondOrderKind.LOG, cov_scale * need_b1() / math.pi)
    elif near(h, five_six) and five_six < lin_edge:
        second = SecondOrder(SecondOrderKind.LOG, cubic / math.pi)
    elif h > max(five_six, cross_edge) and not near(h, cross_edge):
        c = cubic * math.gamma(6 * h - 5) * math.sin(3 * h * math.pi) / math.pi
        second = SecondOrder(SecondOrderKind.POWER, c, 5.0 - 6.0 * h)
    elif lin_edge < h < cross_edge and not (near(h, lin_edge) or near(h, cross_edge)):
        c = (cov_scale * need_b1() * math.gamma(2 * h - 1 - beta1)
             * math.sin((2 * h - beta1) * math.pi / 2) / math.pi)
        second = SecondOrder(SecondOrderKind.POWER, c, 1.0 - 2.0 * h + beta1)
    else:
        raise UnsupportedRegionError(
            f"no second-order case covers H={h}, beta1={beta1}"
        )
    return SpectralExpansion(amp, 1.0 - 2.0 * h, second, diag)


def cosine_power_sum(s: float, omega: float) -> float:
    """``sum_{k>=1} k^{-s} cos(k omega)`` for ``0 < omega < 2 pi``.

    Uses the expansion of the polylogarithm around ``e^{i omega} = 1``:
    a singular term ``Gamma(1-s) sin(pi s / 2) omega^(s-1)`` plus the
    power series ``sum_m (-1)^m zeta(s-2m) omega^{2m}/(2m)!``. At odd
    integer ``s`` the singular term and one series term merge into a
    logarithm.
    """
    if not 0 < omega < 2 * math.pi:
        raise ValueError("omega must lie in (0, 2 pi)")
    odd = round(s)
    log_case = abs(s - odd) < INTEGER_ORDER_TOL and odd % 2 == 1 and odd >= 1
    total = 0.0
    if log_case:
        n = (odd - 1) // 2
        harmonic = sum(1.0 / k for k in range(1, 2 * n + 1))
        total += (-1) ** n * omega ** (2 * n) / math.factorial(2 * n) * (harmonic - math.log(omega))
        s = float(odd)
    elif abs(s - odd) < INTEGER_ORDER_TOL and odd % 2 == 0 and odd >= 2:
        # Gamma(1-s) sin(pi s/2) -> pi (-1)^(s/2) / (2 Gamma(s))
        total += math.pi * (-1) ** (odd // 2) / (2.0 * math.gamma(odd)) * omega ** (odd - 1)
        s = float(odd)
    else:
        total += math.pi / (2.0 * math.gamma(s) * math.cos(math.pi * s / 2)) * omega ** (s - 1)
    w2 = omega * omega
    term_scale = 1.0
    for m in range(POLYLOG_MAX_TERMS):
        if log_case and 2 * m == odd - 1:
            term_scale *= w2 / ((2 * m + 1) * (2 * m + 2))
            continue
        z = riemann_zeta(s - 2 * m) if s - 2 * m != 1.0 else 0.0
        t = (-1) ** m * z * term_scale
        total += t
        if m > 2 and abs(t) < 1e-17 * max(abs(total), 1e-300):
            break
        term_scale *= w2 / ((2 * m + 1) * (2 * m + 2))
    return total


@dataclass(frozen=True)
class NumericSpectrum:
    value: float
    lags: int
    tail_bound: float


def spectral_density_numeric(
    acv: Callable,
    omega: float,
    tolerance: float = 1e-10,
    power_terms: Sequence[tuple[float, float]] = (),
    max_lag: int = NUMERIC_MAX_LAG,
    chunk: int = NUMERIC_CHUNK,
    full: bool = False,
):
    """Spectral density ``gamma(0)/(2 pi) + (1/pi) sum_k gamma(k) cos(k omega)``.

    ``acv`` maps an integer lag array to autocovariances. Each
    ``(c, s)`` in ``power_terms`` is a term ``c k^{-s}`` of the large-lag
    expansion; its cosine sum is taken exactly and only the residual is
    summed directly, in chunks, until the tail bound drops below
    ``tolerance`` (absolute).
    """
    omega = float(omega)
    if not 0 < omega <= math.pi:
        raise ValueError("omega must lie in (0, pi]")
    exact = sum(c * cosine_power_sum(s, omega) for c, s in power_terms)
    gamma0 = float(np.asarray(acv(np.array([0])), dtype=float)[0])
    sin_half = math.sin(0.5 * omega)

    direct = 0.0
    start = 1
    tail = math.inf
    while start <= max_lag:
        k = np.arange(start, start + chunk)
        kf = k.astype(float)
        r = np.asarray(acv(k), dtype=float)
        for c, s in power_terms:
            r = r - c * kf**-s
        direct += float(np.dot(r, np.cos(kf * omega)))
        start += chunk
        # tail estimates from the end of this chunk; residuals decay monotonically
        r_end = abs(r[-1])
        abel = 2.0 * r_end / (2.0 * sin_half)
        half = r.size // 2
        a, b = abs(r[half]), r_end
        fit = math.inf
        if a > 0 and b > 0 and b < a:
            p = math.log(a / b) / math.log(kf[-1] / kf[half])
            if p > 1:
                fit = b * kf[-1] / (p - 1)
        elif b == 0 and a == 0:
            fit = 0.0
        tail = min(abel, fit) / math.pi
        if tail < tolerance:
            break
    else:
        raise ConvergenceError(
            f"residual tail {tail:.3g} above tolerance {tolerance:.3g} after {max_lag} lags"
        )
    value = gamma0 / (2 * math.pi) + (exact + direct) / math.pi
    if full:
        return NumericSpectrum(value, start - 1, tail)
    return value


def fgn_power_terms(h: float, variance: float = 1.0, count: int = 4) -> list[tuple[float, float]]:
    """Large-lag terms ``(c, s)`` of the fGn autocovariance."""
    h = check_hurst(h)
    base = _fgn_binomials(h, count) * variance
    return [(float(b), 2.0 - 2.0 * h + 2 * i) for i, b in enumerate(base)]


def transformed_fgn_power_terms(h: float, coeffs: HermiteCoefficients,
                                max_order: float = 6.0) -> list[tuple[float, float]]:
    """Large-lag terms ``(c, s)`` of ``sum_j g_j^2 rho(k)^j`` with ``s <= max_order``."""
    h = check_hurst(h)
    s_unit = 2.0 - 2.0 * h
    n_i = int(max_order // 2) + 1
    base = _fgn_binomials(h, n_i)
    terms = []
    for j, g in coeffs.coeffs:
        if j * s_unit > max_order:
            break
        p = _truncated_power(base, j)
        for i in range(n_i):
            s = j * s_unit + 2 * i
            if s <= max_order:
                terms.append((g * g * float(p[i]), s))
    return terms


def transformed_fgn_acv(h: float, coeffs: HermiteCoefficients) -> Callable:
    """Lag function of the autocovariance of a transformed fGn with variance ``coeffs.variance``."""
    def acv(k):
        k = np.asarray(k)
        out = transformed_acv(fgn_autocorrelation(h, k), coeffs)
        return np.where(k == 0, coeffs.total_variance, out)
    return acv


def fgn_spectral_density(h: float, omega, variance: float = 1.0, terms: int = 200):
    """Exact fGn spectral density ``2 c* (1 - cos w) sum_j |2 pi j + w|^{-2H-1}``.

    The two-sided sum is closed with Hurwitz zeta functions.
    """
    h = check_hurst(h)
    w = np.asarray(omega, dtype=float)
    c_star = variance * math.sin(math.pi * h) * math.gamma(2 * h + 1) / (2 * math.pi)
    a = 2 * h + 1
    two_pi = 2 * math.pi
    total = (np.abs(w) ** -a + two_pi**-a * (special.zeta(a, 1 + w / two_pi)
                                              + special.zeta(a, 1 - w / two_pi)))
    return 4 * c_star * np.sin(0.5 * w) ** 2 * total


# ---------------------------------------------------------------------------
# detrended fluctuation analysis


def dfa_shape(h: float) -> float:
    """``f(H) = (1-H) / ((1+H)(2+H)(1+2H))``."""
    return (1 - h) / ((1 + h) * (2 + h) * (1 + 2 * h))


def dfa_asymptote(h: float, amplitude: float, m) -> float:
    """Leading term ``A/(H(2H-1)) f(H) m^{2H}`` of the expected squared fluctuation."""
    h = check_hurst(h)
    m = np.asarray(m, dtype=float)
    if np.any(m < 1):
        raise ValueError("box size must be at least 1")
    out = amplitude / (h * (2 * h - 1)) * dfa_shape(h) * m ** (2 * h)
    return float(out) if out.ndim == 0 else out


def dfa_projection(m: int) -> np.ndarray:
    """Projection onto the span of ``{1, k}``, ``k = 1..m``, as a dense matrix."""
    i = np.arange(1, m + 1, dtype=float)
    return 2.0 / (m * (m - 1)) * (
        (2 * m + 1) - 3 * (i[:, None] + i[None, :]) + 6 * np.outer(i, i) / (m + 1)
    )


def expected_dfa_exact(acv: Callable, variance: float, m: int, chunk: int = 512) -> float:
    """Exact ``E[F_1^2(m)]`` for a stationary input with the given autocovariance.

    ``Cov(Y_i, Y_j) = D min(i,j) + S(i) + S(j) - S(|i-j|)`` with
    ``S(i) = sum_{k<i} (i-k) gamma(k)``, and the expectation is
    ``(Tr Sigma - Tr(P Sigma)) / m`` with ``P`` the projection onto linear
    trends. Rows are processed in blocks to bound memory.
    """
    m = int(m)
    if m < 4:
        raise ValueError("box size must be at least 4")
    gam = np.asarray(acv(np.arange(1, m)), dtype=float)
    k = np.arange(1, m, dtype=float)
    # S(i) = i * sum_{k<i} gamma(k) - sum_{k<i} k gamma(k)
    c0 = np.concatenate(([0.0], np.cumsum(gam)))
    c1 = np.concatenate(([0.0], np.cumsum(k * gam)))
    s = np.empty(m + 1)
    s[0] = 0.0
    s[1:] = np.arange(1, m + 1) * c0[:m] - c1[:m]

    i = np.arange(1, m + 1)
    trace = float(np.sum(variance * i + 2 * s[1:]))
    scale = 2.0 / (m * (m - 1))
    proj_trace = 0.0
    for lo in range(0, m, chunk):
        ii = i[lo : lo + chunk, None]
        sigma = variance * np.minimum(ii, i[None, :]) + s[ii] + s[i][None, :] - s[np.abs(ii - i[None, :])]
        p = scale * ((2 * m + 1) - 3 * (ii + i[None, :]) + 6.0 * ii * i[None, :] / (m + 1))
        proj_trace += float(np.sum(p * sigma))
    return (trace - proj_trace) / m
