"""Shared fixtures: corpus quartics, prime tables, isolated cache dir."""
import os
import tempfile

import pytest

# isolate the census cache before anything can touch the real one
os.environ["QTWIST_CACHE_DIR"] = tempfile.mkdtemp(prefix="qtwist-test-cache-")

from quartic_twists import PrimeTable, Quartic  # noqa: E402


@pytest.fixture(scope="session")
def corpus() -> dict[str, Quartic]:
    """One quartic per Galois group (keys are the group names)."""
    return {
        "S4": Quartic(0, 0, -1, 1),  # x^4 - x + 1
        "A4": Quartic(0, 0, 8, 12),  # x^4 + 8x + 12
        "D4": Quartic(0, 0, 0, -2),  # x^4 - 2
        "C4": Quartic(1, 1, 1, 1),   # x^4 + x^3 + x^2 + x + 1
        "V4": Quartic(0, 0, 0, 1),   # x^4 + 1
    }


@pytest.fixture(scope="session")
def f_s4(corpus) -> Quartic:
    return corpus["S4"]


@pytest.fixture(scope="session")
def table_1e5() -> PrimeTable:
    return PrimeTable(10**5)


@pytest.fixture(scope="session")
def table_1e6() -> PrimeTable:
    return PrimeTable(10**6)
