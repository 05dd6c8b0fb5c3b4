"""Shared fixtures and the acceptance summary printed at the end of a run."""

import os

import pytest

# criterion number -> list of (part, passed, detail)
ACCEPTANCE = {}
TITLES = {
    1: "zero fractions",
    2: "kurtosis dip",
    3: "large-chi moments",
    4: "Hermite identity and low coefficients",
    5: "arcsine law",
    6: "autocovariance scaling",
    7: "spectral expansion vs numeric",
    8: "exact DFA vs Monte Carlo",
    9: "DFA asymptote decay",
    10: "table spot rows",
    11: "local Whittle normality",
    12: "bias ordering",
}


def record(criterion, part, passed, detail=""):
    ACCEPTANCE.setdefault(criterion, []).append((part, bool(passed), detail))
    return bool(passed)


def accept_replicates():
    return int(os.environ.get("LMROUND_ACCEPT_REPLICATES", "1000"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[num]
        ok = all(p for _, p, _ in parts)
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] #{num} {TITLES.get(num, '')}")
        for part, passed, detail in parts:
            tr.write_line(f"    {'ok  ' if passed else 'FAIL'} {part}: {detail}")


@pytest.fixture(scope="session")
def replicates():
    return accept_replicates()
