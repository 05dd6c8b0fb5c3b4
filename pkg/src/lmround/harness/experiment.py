"""Monte Carlo orchestration: configs, replicate loop and summary statistics."""

from __future__ import annotations

import functools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import discretize
from ..discretize import DiscretizationSpec
from ..estimators import bandwidth, dfa_curve, dfa_estimate, local_whittle, periodogram
from ..lmcore import ProcessSpec
from ..synth import GaussianSampler, SeedSpec

WORKERS_ENV = "LMROUND_WORKERS"
CONTINUOUS = "continuous"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


class ReplicateError(RuntimeError):
    """An estimator failed on one replicate; carries the replicate index."""

    def __init__(self, index: int, cause: Exception):
        super().__init__(f"replicate {index}: {type(cause).__name__}: {cause}")
        self.index = index
        self.cause = cause

    def __reduce__(self):
        return (ReplicateError, (self.index, self.cause))


def parse_transform(label: str, variance: float = 1.0) -> DiscretizationSpec | None:
    """``continuous``, ``sign``, ``chi=<x>`` or ``delta=<x>``; None means untouched."""
    label = label.strip().lower()
    if label == CONTINUOUS:
        return None
    if label == "sign":
        return DiscretizationSpec.sign()
    key, _, value = label.partition("=")
    try:
        x = float(value)
    except ValueError:
        x = math.nan
    if key == "chi" and x > 0:
        return DiscretizationSpec.from_chi(x, variance)
    if key == "delta" and x > 0:
        return DiscretizationSpec.round(x)
    raise ValueError(
        f"unknown transform {label!r}; use continuous, sign, chi=<x> or delta=<x> with x > 0"
    )


@dataclass(frozen=True)
class EstimatorSetting:
    """``lw`` with a bandwidth exponent in (0, 1), or ``dfa`` with a fit fraction in (0, 1]."""

    kind: str
    value: float

    def __post_init__(self):
        if self.kind == "lw":
            if not 0 < self.value < 1:
                raise ValueError(f"lw bandwidth exponent must lie in (0, 1), got {self.value}")
        elif self.kind == "dfa":
            if not 0 < self.value <= 1:
                raise ValueError(f"dfa fraction q must lie in (0, 1], got {self.value}")
        else:
            raise ValueError(f"estimator must be lw or dfa, got {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "EstimatorSetting":
        kind, _, value = text.strip().lower().partition(":")
        try:
            return cls(kind, float(value))
        except ValueError as exc:
            raise ValueError(f"bad estimator {text!r} (expected lw:<gamma> or dfa:<q>): {exc}")

    @property
    def label(self) -> str:
        return self.kind

    @property
    def setting(self) -> str:
        return repr(self.value)

    def __str__(self):
        return f"{self.kind}:{self.value!r}"


@dataclass(frozen=True)
class ExperimentConfig:
    process: ProcessSpec
    lengths: tuple[int, ...]
    transforms: tuple[str, ...] = (CONTINUOUS,)
    estimators: tuple[str, ...] = ("lw:0.5",)
    replicates: int = 1000
    master_seed: int = 42
    workers: int = field(default_factory=default_workers)
    dfa_selection: str = "range"

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(int(n) for n in self.lengths))
        object.__setattr__(self, "transforms", tuple(self.transforms))
        object.__setattr__(self, "estimators", tuple(str(e) for e in self.estimators))
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if not self.lengths or min(self.lengths) < 16:
            raise ValueError("every length must be at least 16")
        if self.dfa_selection not in ("range", "count"):
            raise ValueError("dfa_selection must be 'range' or 'count'")
        SeedSpec(self.master_seed)
        # parse eagerly so bad labels fail before any work starts
        self.transform_specs()
        self.estimator_settings()

    def transform_specs(self) -> list[DiscretizationSpec | None]:
        return [parse_transform(t, self.process.variance) for t in self.transforms]

    def estimator_settings(self) -> list[EstimatorSetting]:
        return [EstimatorSetting.parse(e) for e in self.estimators]

    @property
    def shape(self) -> tuple[int, int, int]:
        return len(self.lengths), len(self.transforms), len(self.estimators)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["process"] = self.process.to_dict()
        d["lengths"] = list(self.lengths)
        d["transforms"] = list(self.transforms)
        d["estimators"] = list(self.estimators)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        """Accepts nested ``process`` or the flat keys ``kind``, ``hurst``, ``variance``."""
        d = dict(d)
        if "process" in d:
            process = ProcessSpec.from_dict(d.pop("process"))
        else:
            process = ProcessSpec.from_dict(
                {"kind": d.pop("kind", "fgn"), "hurst": d.pop("hurst"),
                 "variance": d.pop("variance", 1.0)}
            )
        for key in ("lengths", "transforms", "estimators"):
            if key in d and isinstance(d[key], (str, int)):
                d[key] = [x for x in str(d[key]).replace(",", " ").split()]
        known = {f for f in cls.__dataclass_fields__ if f != "process"}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(process=process, **d)


@dataclass(frozen=True)
class ResultRow:
    transform: str
    n: int
    estimator: str
    setting: str
    mean: float
    se: float
    q025: float
    q50: float
    q975: float
    replicates: int

    def __post_init__(self):
        if not self.q025 <= self.q50 <= self.q975:
            raise ValueError("quantiles out of order")

    @property
    def se_defined(self) -> bool:
        return self.replicates >= 2


@functools.lru_cache(maxsize=16)
def _sampler(process: ProcessSpec, n: int) -> GaussianSampler:
    return GaussianSampler.for_process(process, n)


def replicate_estimates(config: ExperimentConfig, index: int) -> np.ndarray:
    """All estimates of one replicate, shape ``(lengths, transforms, estimators)``."""
    rng = SeedSpec(config.master_seed, index).rng()
    specs = config.transform_specs()
    settings = config.estimator_settings()
    out = np.empty(config.shape)
    try:
        for a, n in enumerate(config.lengths):
            x = _sampler(config.process, n).draw(rng)[0]
            for b, spec in enumerate(specs):
                xd = x if spec is None else discretize.apply(x, spec)
                pgram = curve = None
                for c, est in enumerate(settings):
                    if est.kind == "lw":
                        if pgram is None:
                            pgram = periodogram(xd)
                        out[a, b, c] = local_whittle(xd, bandwidth(n, est.value), pgram)
                    else:
                        if curve is None:
                            curve = dfa_curve(xd)
                        out[a, b, c] = dfa_estimate(curve, est.value, config.dfa_selection)
    except Exception as exc:
        raise ReplicateError(index, exc) from exc
    return out


def _replicate_block(config: ExperimentConfig, indices: range) -> np.ndarray:
    return np.stack([replicate_estimates(config, i) for i in indices])


def run_replicates(config: ExperimentConfig) -> np.ndarray:
    """Raw estimates, shape ``(replicates, lengths, transforms, estimators)``.

    Replicates are split into contiguous blocks and reassembled in order, so
    the result does not depend on the worker count.
    """
    total = config.replicates
    if config.workers == 1 or total < 2:
        return _replicate_block(config, range(total))
    nblocks = min(total, 4 * config.workers)
    edges = np.linspace(0, total, nblocks + 1).astype(int)
    blocks = [range(lo, hi) for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        parts = list(pool.map(_replicate_block, [config] * len(blocks), blocks))
    return np.concatenate(parts)


def summarize_sample(values) -> tuple[float, float, float, float, float]:
    """Mean, standard error and the 2.5/50/97.5% type-7 quantiles."""
    v = np.asarray(values, dtype=float)
    mean = float(v.mean())
    se = float(v.std(ddof=1) / math.sqrt(v.size)) if v.size >= 2 else math.nan
    q = np.quantile(v, [0.025, 0.5, 0.975], method="linear")
    return mean, se, float(q[0]), float(q[1]), float(q[2])


def summarize(config: ExperimentConfig, estimates: np.ndarray) -> list[ResultRow]:
    rows = []
    settings = config.estimator_settings()
    for a, n in enumerate(config.lengths):
        for b, label in enumerate(config.transforms):
            for c, est in enumerate(settings):
                stats = summarize_sample(estimates[:, a, b, c])
                rows.append(ResultRow(label, n, est.label, est.setting, *stats, estimates.shape[0]))
    return rows


def run_experiment(config: ExperimentConfig) -> list[ResultRow]:
    return summarize(config, run_replicates(config))


def find_row(rows, transform: str, n: int, estimator: str, setting: float) -> ResultRow:
    for r in rows:
        if (r.transform == transform and r.n == n and r.estimator == estimator
                and float(r.setting) == float(setting)):
            return r
    raise KeyError((transform, n, estimator, setting))
