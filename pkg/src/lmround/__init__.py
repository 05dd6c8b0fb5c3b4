"""Long-memory Gaussian processes under round-off and sign discretization."""

from .discretize import DiscretizationSpec, TransformKind, apply, chi, zero_fraction
from .lmcore import AsymptoticACV, ProcessKind, ProcessSpec, Series
from .synth import GaussianSampler, SeedSpec, simulate_gaussian

__all__ = [
    "AsymptoticACV",
    "DiscretizationSpec",
    "GaussianSampler",
    "ProcessKind",
    "ProcessSpec",
    "SeedSpec",
    "Series",
    "TransformKind",
    "apply",
    "chi",
    "simulate_gaussian",
    "zero_fraction",
]
