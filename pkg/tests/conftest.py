import math

import numpy as np
import pytest

from abring.ring import RingConfig

_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance line: report(criterion, passed, detail)."""

    def _report(criterion: str, passed: bool, detail: str):
        line = f"{'PASS' if passed else 'FAIL'}  {criterion}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_config(rng, kind="general", Gamma=0.1):
    """kind: 'hermitian', 'pt' or 'general'."""
    eu, ed = rng.uniform(-1, 1, 2)
    if kind == "hermitian":
        gu = gd = 0.0
    elif kind == "pt":
        gu = rng.uniform(-0.5, 0.5)
        gd = -gu
        ed = eu
    else:
        gu, gd = rng.uniform(-0.5, 0.5, 2)
    phi = rng.uniform(0, 2 * math.pi)
    return RingConfig.from_gamma(Gamma, complex(eu, gu), complex(ed, gd), phi)
