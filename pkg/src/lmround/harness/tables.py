"""Presets that mirror the four estimation tables."""

from __future__ import annotations

from ..lmcore import ProcessKind, ProcessSpec
from .experiment import ExperimentConfig, default_workers

TABLE_TRANSFORMS = ("sign", "chi=0.1", "chi=0.25", "chi=0.5", "continuous")
LW_EXPONENTS = (0.5, 0.6, 0.7, 0.8)
DFA_FRACTIONS = (0.25, 0.5, 0.75, 1.0)
TABLE_LENGTHS = (1 << 10, 1 << 14)

TABLES = {
    "table1": (0.7, "lw", LW_EXPONENTS),
    "table2": (0.85, "lw", LW_EXPONENTS),
    "table3": (0.7, "dfa", DFA_FRACTIONS),
    "table4": (0.85, "dfa", DFA_FRACTIONS),
}


def table_config(name: str, lengths=(1 << 10,), replicates: int = 1000,
                 master_seed: int = 42, workers: int | None = None) -> ExperimentConfig:
    """One table's experiment; the default single length gives one 20-row panel."""
    if name not in TABLES:
        raise ValueError(f"unknown table {name!r}; choose from {sorted(TABLES)}")
    hurst, kind, values = TABLES[name]
    return ExperimentConfig(
        process=ProcessSpec(ProcessKind.FGN, hurst, 1.0),
        lengths=tuple(lengths),
        transforms=TABLE_TRANSFORMS,
        estimators=tuple(f"{kind}:{v!r}" for v in values),
        replicates=replicates,
        master_seed=master_seed,
        workers=default_workers() if workers is None else workers,
    )
