"""Domain types, reference autocorrelations and special functions.

Everything here is a pure function of its arguments. Autocorrelation
functions accept scalar or array lags and return the same shape.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

# lag above which the fGn autocorrelation switches to its 1/k series
FGN_SERIES_CROSSOVER = 4
_FGN_SERIES_TERMS = 24

THETA_REL_TOL = 1e-16
ZETA_BORWEIN_TERMS = 60


class ProcessKind(str, enum.Enum):
    FGN = "fgn"
    FARIMA0D0 = "farima"


def check_hurst(h: float) -> float:
    h = float(h)
    if not 0.5 < h < 1.0:
        raise ValueError(f"Hurst exponent must lie in (0.5, 1), got {h}")
    return h


@dataclass(frozen=True)
class ProcessSpec:
    """A zero-mean stationary Gaussian long-memory process."""

    kind: ProcessKind
    hurst: float
    variance: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ProcessKind(self.kind))
        check_hurst(self.hurst)
        if not self.variance > 0:
            raise ValueError(f"variance must be positive, got {self.variance}")

    @property
    def d(self) -> float:
        """Fractional differencing order d = H - 1/2."""
        return self.hurst - 0.5

    def autocorrelation(self, k):
        if self.kind is ProcessKind.FGN:
            return fgn_autocorrelation(self.hurst, k)
        return farima_autocorrelation(self.hurst, k)

    def autocovariance(self, k):
        return self.variance * self.autocorrelation(k)

    def asymptotic_acv(self) -> "AsymptoticACV":
        """Leading power law of the autocovariance, gamma(k) ~ A k^(2H-2)."""
        h = self.hurst
        if self.kind is ProcessKind.FGN:
            amp = h * (2 * h - 1) * self.variance
        else:
            amp = math.gamma(1.5 - h) / math.gamma(h - 0.5) * self.variance
        # both reference processes have an even expansion in 1/k
        return AsymptoticACV(amplitude=amp, exponent=2 * h - 2, correction_order=2.0)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "hurst": self.hurst, "variance": self.variance}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ProcessSpec":
        return cls(ProcessKind(d["kind"]), float(d["hurst"]), float(d.get("variance", 1.0)))


@dataclass(frozen=True)
class AsymptoticACV:
    amplitude: float
    exponent: float
    correction_order: float

    def __post_init__(self):
        if not -1.0 < self.exponent < 0.0:
            raise ValueError(f"exponent must lie in (-1, 0), got {self.exponent}")

    def __call__(self, k):
        return self.amplitude * np.asarray(k, dtype=float) ** self.exponent


@dataclass
class Series:
    """A finite sample path plus whatever produced it."""

    values: np.ndarray
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise ValueError("series values must be one-dimensional")
        if self.values.size < 2:
            raise ValueError(f"series needs at least 2 values, got {self.values.size}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("series values must be finite")

    def __len__(self):
        return self.values.size


def as_values(series) -> np.ndarray:
    if isinstance(series, Series):
        return series.values
    return Series(series).values


# ---------------------------------------------------------------------------
# autocorrelations


def _generalized_binomial(a: float, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= (a - i) / (i + 1)
    return out


def fgn_autocorrelation(h: float, k):
    """Autocorrelation of fractional Gaussian noise.

    ``rho(k) = ((k+1)^2H + (k-1)^2H - 2 k^2H) / 2`` for ``k >= 1`` and 1 at
    ``k = 0``. For lags beyond ``FGN_SERIES_CROSSOVER`` the even binomial
    series in ``1/k`` is used, which avoids the cancellation of the three
    large powers.
    """
    scalar = np.isscalar(k)
    k = np.abs(np.asarray(k, dtype=float))
    out = np.empty_like(k)
    two_h = 2.0 * h

    small = k < FGN_SERIES_CROSSOVER
    ks = k[small]
    out[small] = 0.5 * ((ks + 1) ** two_h + np.abs(ks - 1) ** two_h - 2 * ks**two_h)

    kl = k[~small]
    if kl.size:
        x2 = kl**-2.0
        acc = np.zeros_like(kl)
        for i in range(_FGN_SERIES_TERMS, 0, -1):
            acc = acc * x2 + _generalized_binomial(two_h, 2 * i)
        out[~small] = kl ** (two_h - 2.0) * acc
    return float(out) if scalar else out


def farima_autocorrelation(h: float, k):
    """Autocorrelation of fARIMA(0, H-1/2, 0).

    Uses the ratio recursion ``rho(k+1) = rho(k) (H - 1/2 + k) / (k + 3/2 - H)``
    so no Gamma function is ever evaluated at large arguments.
    """
    scalar = np.isscalar(k)
    k = np.abs(np.asarray(k, dtype=np.int64))
    kmax = int(k.max()) if k.size else 0
    j = np.arange(kmax, dtype=float)
    ratios = (h - 0.5 + j) / (j + 1.5 - h)
    table = np.concatenate(([1.0], np.cumprod(ratios)))
    out = table[k]
    return float(out) if scalar else out


# ---------------------------------------------------------------------------
# special functions


def gaussian_error_fn(x: float) -> float:
    return math.erf(x)


def log_gamma(x: float) -> float:
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def elliptic_theta2(q: float) -> float:
    """Jacobi theta function at zero argument, ``2 sum_k q^((k+1/2)^2)``.

    Summation stops once a term drops below ``THETA_REL_TOL`` times the
    running sum; the terms decrease monotonically so that is a valid tail
    cut.
    """
    if not 0.0 <= q < 1.0:
        raise ValueError(f"elliptic_theta2 requires 0 <= q < 1, got {q}")
    if q == 0.0:
        return 0.0
    log_q = math.log(q)
    total = 0.0
    k = 0
    while True:
        term = math.exp((k + 0.5) ** 2 * log_q)
        total += term
        if term <= THETA_REL_TOL * total:
            break
        k += 1
    return 2.0 * total


def _borwein_weights(n: int) -> np.ndarray:
    d = np.empty(n + 1)
    acc = 0.0
    for i in range(n + 1):
        acc += math.factorial(n + i - 1) * 4**i / (math.factorial(n - i) * math.factorial(2 * i))
        d[i] = n * acc
    return d


_BORWEIN_D = _borwein_weights(ZETA_BORWEIN_TERMS)
_BORWEIN_SIGNS = (-1.0) ** np.arange(ZETA_BORWEIN_TERMS)


def _eta_borwein(s: float) -> float:
    # Borwein's accelerated alternating series for the Dirichlet eta function;
    # truncation error is below 3 / (3 + sqrt 8)^n, i.e. ~1e-45 for n = 60
    d = _BORWEIN_D
    k = np.arange(1, ZETA_BORWEIN_TERMS + 1, dtype=float)
    terms = _BORWEIN_SIGNS * (d[:-1] - d[-1]) * k**-s
    return -float(np.sum(terms)) / d[-1]


def _sin_half_pi(s: float) -> float:
    # sin(pi s / 2) with exact reduction so values near the zeros keep full precision
    r = s - 4.0 * round(s / 4.0)
    if r > 1.0:
        return math.sin(0.5 * math.pi * (2.0 - r))
    if r < -1.0:
        return -math.sin(0.5 * math.pi * (2.0 + r))
    return math.sin(0.5 * math.pi * r)


def riemann_zeta(s: float) -> float:
    """Riemann zeta on the real line, analytically continued below 1."""
    s = float(s)
    if s == 1.0:
        raise ValueError("riemann_zeta has a pole at s = 1")
    if s >= 0.5:
        if s > 60:
            return 1.0 + 2.0**-s + 3.0**-s
        return _eta_borwein(s) / -math.expm1((1.0 - s) * math.log(2.0))
    # reflection: zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s)
    if abs(s) < 1e-8:
        # 1 - s rounds to 1 here; zeta(s) = -1/2 - s log(2 pi) / 2 + O(s^2)
        return -0.5 - 0.5 * math.log(2.0 * math.pi) * s
    sin_term = _sin_half_pi(s)
    if s == math.floor(s) and int(s) % 2 == 0:
        return 0.0
    log_mag = s * math.log(2.0) + (s - 1.0) * math.log(math.pi) + math.lgamma(1.0 - s)
    t = 1.0 - s
    # t is rounded; swap the pole term 1/(t-1) for the exact -1/s
    zeta_t = riemann_zeta(t) + (-1.0 / s - 1.0 / (t - 1.0))
    return sin_term * math.exp(log_mag) * zeta_t
