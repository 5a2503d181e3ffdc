import math
import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from conley import Carrier, Relation
from conley.discretization import GridSpec, SystemSpec, build_grid

GOLDEN = (math.sqrt(5) - 1) / 2

# one representative parameter set per built-in map, plus a few variants
BUILTIN_CASES = [
    ("logistic", {"r": 3.2}),
    ("logistic", {"r": 4.0}),
    ("tent", {"mu": 2.0}),
    ("tent", {"mu": 1.5}),
    ("rotation", {"alpha": GOLDEN}),
    ("rotation", {"alpha": 0.25}),
    ("doubling", {}),
    ("north_south", {"delta": 0.05}),
    ("north_south", {"delta": 0.3}),
]

_CARRIERS = {n: Carrier.abstract(n) for n in range(1, 13)}


def carrier_of(n: int) -> Carrier:
    return _CARRIERS[n]


def rel(n, pairs):
    return Relation.from_pairs(carrier_of(n), pairs)


def random_relation(rng: np.random.Generator, n: int, p: float | None = None) -> Relation:
    if p is None:
        p = rng.uniform(0.05, 0.6)
    return Relation.from_dense(carrier_of(n), rng.random((n, n)) < p)


def relations(n: int):
    """Hypothesis strategy for relations on the shared ``n``-cell carrier."""
    return st.lists(st.booleans(), min_size=n * n, max_size=n * n).map(
        lambda bits: Relation.from_dense(carrier_of(n), np.array(bits, dtype=bool).reshape(n, n))
    )


sizes = st.integers(min_value=1, max_value=8)


def system_and_grid(name, params, cells):
    sys = SystemSpec(name, params)
    return sys, build_grid(GridSpec(sys.domain, cells))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
