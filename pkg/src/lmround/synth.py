"""Exact simulation of stationary Gaussian paths.

Paths are drawn by circulant embedding of the exact autocovariance
(Davies-Harte). If the embedding has materially negative eigenvalues the
sampler falls back to the Durbin-Levinson recursion, which is exact for
any positive definite autocovariance but costs O(n^2).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .lmcore import ProcessSpec, Series

log = logging.getLogger(__name__)

NEGATIVE_EIGEN_TOL = 1e-9


class EmbeddingError(RuntimeError):
    pass


@dataclass(frozen=True)
class SeedSpec:
    """Master seed plus replicate index; each pair owns one random stream."""

    master_seed: int
    replicate_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.replicate_index < 0:
            raise ValueError("replicate_index must be nonnegative")

    def rng(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.replicate_index,))
        return np.random.Generator(np.random.PCG64(seq))


def _acv_values(source, n: int) -> np.ndarray:
    if isinstance(source, ProcessSpec):
        return source.autocovariance(np.arange(n))
    acv = np.asarray(source, dtype=float)
    if acv.size < n:
        raise ValueError(f"need {n} autocovariances, got {acv.size}")
    return acv[:n]


def embedding_spectrum(source, n: int) -> np.ndarray:
    """Eigenvalues of the size ``2(n-1)`` circulant embedding.

    ``source`` is a :class:`ProcessSpec` or an explicit autocovariance
    sequence ``gamma(0), ..., gamma(n-1)``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    acv = _acv_values(source, n)
    row = np.concatenate((acv, acv[-2:0:-1]))
    return np.fft.rfft(row).real


def _full_spectrum(eig_half: np.ndarray, size: int) -> np.ndarray:
    # rfft returns size//2 + 1 entries; the circulant spectrum is symmetric
    return np.concatenate((eig_half, eig_half[1 : size - eig_half.size + 1][::-1]))


def _checked_spectrum(acv: np.ndarray) -> np.ndarray | None:
    n = acv.size
    size = 2 * (n - 1)
    eig = _full_spectrum(embedding_spectrum(acv, n), size)
    floor = -NEGATIVE_EIGEN_TOL * eig.max()
    if eig.min() < floor:
        return None
    if eig.min() < 0:
        log.warning("clamping %d tiny negative embedding eigenvalues", int((eig < 0).sum()))
        eig = np.clip(eig, 0.0, None)
    return eig


def _levinson(acv: np.ndarray):
    """Prediction coefficients and innovation variances, row by row."""
    n = acv.size
    phis = [np.empty(0)]
    v = np.empty(n)
    v[0] = acv[0]
    phi = np.empty(0)
    for t in range(1, n):
        k = (acv[t] - phi @ acv[1:t][::-1]) / v[t - 1]
        phi = np.concatenate((phi - k * phi[::-1], [k]))
        v[t] = v[t - 1] * (1 - k * k)
        if not v[t] > 0:
            raise EmbeddingError("autocovariance is not positive definite")
        phis.append(phi)
    return phis, v


def _levinson_paths(acv: np.ndarray, z: np.ndarray) -> np.ndarray:
    phis, v = _levinson(acv)
    n = acv.size
    x = np.empty_like(z)
    sd = np.sqrt(v)
    for t in range(n):
        x[:, t] = sd[t] * z[:, t]
        if t:
            x[:, t] += x[:, :t][:, ::-1] @ phis[t]
    return x


class GaussianSampler:
    """Draws exact paths for one autocovariance; the embedding is computed once."""

    def __init__(self, acv):
        self.acv = np.asarray(acv, dtype=float)
        if self.acv.size < 2:
            raise ValueError("n must be at least 2")
        self.eig = _checked_spectrum(self.acv)
        if self.eig is None:
            log.warning("circulant embedding not nonnegative; using Durbin-Levinson")
            self._scale = None
        else:
            self._scale = np.sqrt(self.eig / self.eig.size)

    @classmethod
    def for_process(cls, spec: ProcessSpec, n: int) -> "GaussianSampler":
        return cls(spec.autocovariance(np.arange(n)))

    @property
    def n(self) -> int:
        return self.acv.size

    def draw(self, rng: np.random.Generator, count: int = 1) -> np.ndarray:
        """Shape ``(count, n)``."""
        if self._scale is None:
            return _levinson_paths(self.acv, rng.standard_normal((count, self.n)))
        size = self._scale.size
        w = rng.standard_normal((count, size)) + 1j * rng.standard_normal((count, size))
        return np.fft.fft(self._scale * w, axis=-1).real[:, : self.n]


def sample_paths(acv, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent paths with autocovariance ``acv``, shape (count, n)."""
    return GaussianSampler(acv).draw(rng, count)


def simulate_gaussian(spec: ProcessSpec, n: int, seed: SeedSpec,
                      sampler: GaussianSampler | None = None) -> Series:
    """One exact sample path of length ``n``; deterministic given ``seed``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    sampler = sampler or GaussianSampler.for_process(spec, n)
    values = sampler.draw(seed.rng())[0]
    meta = {
        "spec": spec.to_dict(),
        "seed": seed.master_seed,
        "replicate": seed.replicate_index,
    }
    return Series(values, meta)


def simulate_many(spec: ProcessSpec, n: int, count: int, seed: SeedSpec) -> np.ndarray:
    """Many paths from a single stream; for Monte Carlo checks, not the harness."""
    return GaussianSampler.for_process(spec, n).draw(seed.rng(), count)
