"""Periodogram, sample autocovariance, local Whittle and DFA estimators."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lmcore import as_values

LW_GRID_POINTS = 101
LW_XTOL = 1e-6
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

DFA_RATIO = 2.0 ** 0.125
DFA_MIN_BOX = 4


class DegenerateInputError(ValueError):
    pass


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class Periodogram:
    frequencies: np.ndarray
    ordinates: np.ndarray

    def __len__(self):
        return self.frequencies.size


def periodogram(series) -> Periodogram:
    """``|sum_t X_t e^{i t w_j}|^2 / (2 pi n)`` at ``w_j = 2 pi j / n``, ``j = 1..n//2``."""
    x = as_values(series)
    n = x.size
    if n < 4:
        raise InsufficientDataError(f"periodogram needs at least 4 points, got {n}")
    f = np.fft.rfft(x)
    j = np.arange(1, n // 2 + 1)
    ordinates = np.abs(f[j]) ** 2 / (2.0 * math.pi * n)
    return Periodogram(2.0 * math.pi * j / n, ordinates)


def sample_acv(series, max_lag: int) -> np.ndarray:
    """Mean-corrected autocovariances divided by ``n``, lags ``0..max_lag``."""
    x = as_values(series)
    n = x.size
    if not 0 <= max_lag < n:
        raise ValueError(f"max_lag must lie in [0, {n - 1}], got {max_lag}")
    y = x - x.mean()
    size = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(y, size)
    return np.fft.irfft(f * np.conj(f), size)[: max_lag + 1] / n


# ---------------------------------------------------------------------------
# local Whittle


def whittle_objective(h, freqs: np.ndarray, ordinates: np.ndarray) -> np.ndarray:
    """``log(mean(w^(2h-1) I)) - 2h mean(log w)`` for scalar or array ``h``."""
    h = np.asarray(h, dtype=float)
    log_w = np.log(freqs)
    # factor out the largest exponent so nothing overflows for tiny frequencies
    e = (2.0 * h[..., None] - 1.0) * log_w + np.log(ordinates)
    top = e.max(axis=-1)
    lse = top + np.log(np.mean(np.exp(e - top[..., None]), axis=-1))
    return lse - 2.0 * h * log_w.mean()


def _golden(fun, a: float, b: float, tol: float) -> float:
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def local_whittle(series, m: int, pgram: Periodogram | None = None) -> float:
    """Local Whittle estimate of H from the first ``m`` Fourier frequencies.

    Minimizes over ``[0, 1]``: a 101-point grid brackets the minimum, then
    golden-section search refines it to ``LW_XTOL``.
    """
    x = as_values(series)
    n = x.size
    if n < 4:
        raise InsufficientDataError(f"local Whittle needs at least 4 points, got {n}")
    m = int(m)
    if not 2 <= m <= n // 2:
        raise InsufficientDataError(f"bandwidth m must lie in [2, {n // 2}], got {m}")
    if pgram is None:
        pgram = periodogram(x)
    w = pgram.frequencies[:m]
    ordinates = pgram.ordinates[:m]
    if not np.any(ordinates > 0):
        raise DegenerateInputError("all periodogram ordinates are zero")
    positive = ordinates > 0
    w, ordinates = w[positive], ordinates[positive]

    grid = np.linspace(0.0, 1.0, LW_GRID_POINTS)
    values = whittle_objective(grid, w, ordinates)
    k = int(np.argmin(values))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid.size - 1)]

    def fun(h):
        return float(whittle_objective(h, w, ordinates))

    h = _golden(fun, lo, hi, LW_XTOL)
    # the grid point itself may beat the interior search at the boundary
    best = min((h, fun(h)), (grid[k], values[k]), key=lambda t: t[1])
    return float(best[0])


def bandwidth(n: int, exponent: float) -> int:
    """``floor(n^exponent)``, guarded against ``2^10^0.5 = 31.999...``."""
    if not 0 < exponent < 1:
        raise ValueError(f"bandwidth exponent must lie in (0, 1), got {exponent}")
    return int(math.floor(n**exponent + 1e-9))


# ---------------------------------------------------------------------------
# detrended fluctuation analysis


@dataclass(frozen=True)
class DfaCurve:
    box_sizes: np.ndarray
    fluctuations: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "box_sizes", np.asarray(self.box_sizes, dtype=int))
        object.__setattr__(self, "fluctuations", np.asarray(self.fluctuations, dtype=float))
        if self.box_sizes.size != self.fluctuations.size:
            raise ValueError("box sizes and fluctuations differ in length")
        if np.any(np.diff(self.box_sizes) <= 0):
            raise ValueError("box sizes must be strictly increasing")


def dfa_box_sizes(n: int, ratio: float = DFA_RATIO, smallest: int = DFA_MIN_BOX) -> np.ndarray:
    """Geometric grid from ``smallest`` to ``n/4``, rounded, duplicates removed."""
    largest = n / 4.0
    if largest < smallest:
        raise InsufficientDataError(f"series of length {n} is too short for DFA")
    count = int(math.floor(math.log(largest / smallest) / math.log(ratio) + 1e-9)) + 1
    sizes = np.rint(smallest * ratio ** np.arange(count)).astype(int)
    return np.unique(sizes[sizes <= largest])


def box_fluctuation(profile: np.ndarray, m: int) -> float:
    """Squared fluctuation for box size ``m``: mean squared residual of per-box OLS lines."""
    boxes = profile.size // m
    y = profile[: boxes * m].reshape(boxes, m)
    t = np.arange(1, m + 1, dtype=float)
    tc = t - t.mean()
    yc = y - y.mean(axis=1, keepdims=True)
    slope = yc @ tc / (tc @ tc)
    resid = yc - slope[:, None] * tc
    return float(np.mean(resid * resid))


def dfa_curve(series, box_sizes=None) -> DfaCurve:
    """RMS fluctuation ``F(m)`` of the linearly detrended profile over a box-size grid."""
    x = as_values(series)
    n = x.size
    if n < 16:
        raise InsufficientDataError(f"DFA needs at least 16 points, got {n}")
    sizes = dfa_box_sizes(n) if box_sizes is None else np.asarray(box_sizes, dtype=int)
    profile = np.cumsum(x)
    f2 = np.array([box_fluctuation(profile, int(m)) for m in sizes])
    return DfaCurve(sizes, np.sqrt(f2))


def select_boxes(curve: DfaCurve, q: float, by: str = "range") -> np.ndarray:
    """Mask of box sizes in the top fraction ``q``, by log range or by count."""
    if not 0 < q <= 1:
        raise ValueError(f"q must lie in (0, 1], got {q}")
    logm = np.log10(curve.box_sizes)
    if by == "range":
        cut = logm[-1] - q * (logm[-1] - logm[0])
        return logm >= cut - 1e-12
    if by == "count":
        keep = int(math.ceil(q * logm.size - 1e-9))
        mask = np.zeros(logm.size, dtype=bool)
        mask[logm.size - keep :] = True
        return mask
    raise ValueError(f"selection must be 'range' or 'count', got {by!r}")


def dfa_estimate(curve: DfaCurve, q: float = 1.0, by: str = "range") -> float:
    """OLS slope of ``log10 F`` on ``log10 m`` over the selected box sizes."""
    mask = select_boxes(curve, q, by) & (curve.fluctuations > 0)
    if mask.sum() < 3:
        raise InsufficientDataError(f"only {int(mask.sum())} box sizes selected; need 3")
    x = np.log10(curve.box_sizes[mask])
    y = np.log10(curve.fluctuations[mask])
    xc = x - x.mean()
    return float(xc @ (y - y.mean()) / (xc @ xc))
