"""Round-off and sign transforms."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .lmcore import Series


class TransformKind(str, enum.Enum):
    ROUND = "round"
    SIGN = "sign"


@dataclass(frozen=True)
class DiscretizationSpec:
    kind: TransformKind
    delta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", TransformKind(self.kind))
        if self.kind is TransformKind.ROUND:
            if self.delta is None or not self.delta > 0:
                raise ValueError(f"round-off grid step must be positive, got {self.delta}")
        elif self.delta is not None:
            raise ValueError("the sign transform takes no grid step")

    @classmethod
    def round(cls, delta: float) -> "DiscretizationSpec":
        return cls(TransformKind.ROUND, float(delta))

    @classmethod
    def sign(cls) -> "DiscretizationSpec":
        return cls(TransformKind.SIGN)

    @classmethod
    def from_chi(cls, chi_value: float, variance: float = 1.0) -> "DiscretizationSpec":
        """Grid step giving ``chi = variance / delta^2``."""
        if not chi_value > 0:
            raise ValueError(f"chi must be positive, got {chi_value}")
        return cls.round(math.sqrt(variance / chi_value))

    @property
    def is_sign(self) -> bool:
        return self.kind is TransformKind.SIGN

    def chi(self, variance: float) -> float:
        if self.is_sign:
            raise ValueError("chi is undefined for the sign transform")
        return chi(variance, self.delta)

    def label(self) -> str:
        return "sign" if self.is_sign else f"delta={self.delta!r}"

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "delta": self.delta}

    @classmethod
    def from_dict(cls, d: dict) -> "DiscretizationSpec":
        return cls(TransformKind(d["kind"]), d.get("delta"))


def round_to_grid(x, delta: float) -> np.ndarray:
    """Nearest multiple of ``delta``; exact halves go away from zero."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.floor(np.abs(x) / delta + 0.5) * delta


def sign_transform(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.where(x >= 0, 1.0, -1.0)


def apply(series, spec: DiscretizationSpec):
    """Discretize a series.

    Accepts a :class:`Series` (returns a new Series with ``transform`` added
    to its metadata) or a plain array (returns an array of the same shape,
    which is what the batch simulation path uses).
    """
    values = series.values if isinstance(series, Series) else series
    if spec.is_sign:
        out = sign_transform(values)
    else:
        out = round_to_grid(values, spec.delta)
    if isinstance(series, Series):
        return Series(out, {**series.meta, "transform": spec.to_dict()})
    return out


def chi(variance: float, delta: float) -> float:
    """Adimensional grid fineness ``D / delta^2``."""
    if not (variance > 0 and delta > 0):
        raise ValueError("variance and delta must both be positive")
    return variance / delta**2


def zero_fraction(chi_value: float) -> float:
    """Probability that a Gaussian sample rounds to zero."""
    if not chi_value > 0:
        raise ValueError(f"chi must be positive, got {chi_value}")
    return math.erf(1.0 / (2.0 * math.sqrt(2.0 * chi_value)))
