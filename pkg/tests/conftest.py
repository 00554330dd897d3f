import math

import numpy as np
import pytest

from convpow import catalog
from convpow.engine import build_plan

ACCEPTANCE_LINES: list[str] = []


def fd_weights(order: int, offsets) -> np.ndarray:
    """Finite-difference weights for the ``order``-th derivative at 0 on integer offsets."""
    offsets = np.asarray(offsets, dtype=float)
    k = offsets.size
    A = np.array([[o**j / math.factorial(j) for o in offsets] for j in range(k)])
    b = np.zeros(k)
    b[order] = 1.0
    return np.linalg.solve(A, b)


@pytest.fixture(scope="session")
def o3_half():
    return catalog.o3(0.5)


@pytest.fixture(scope="session")
def o3_plan():
    return build_plan(catalog.o3(0.5), 3)


@pytest.fixture(scope="session")
def o3_plan_m0():
    return build_plan(catalog.o3(0.5), 0)


@pytest.fixture
def record_criterion():
    def record(number, name, passed, detail=""):
        ACCEPTANCE_LINES.append(f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {name}  {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
