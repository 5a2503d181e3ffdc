"""Brute-force reference implementations.

Nothing here shares algorithmic code with :mod:`conley.limits` or the
pipeline.  Relations are read once into tuples of ``int`` row bitmasks and
everything downstream is computed from the literal definitions:

* the limit relation by running the power sequence until it repeats and
  taking the union over the detected cycle,
* pseudo-orbits by breadth-first search in the graph whose edge ``x -> y``
  means cell ``y`` meets the closed ``eps``-neighbourhood of some cell in
  the image of ``x`` (for ``eps = 0``, simply ``y`` in the image).
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from .relation import Carrier, CellSet, Metric, Relation

__all__ = [
    "MAX_BRUTEFORCE_SIZE",
    "OracleGuardError",
    "limit_relation_bruteforce",
    "reach_closure_bruteforce",
    "cyclic_cells_bruteforce",
    "pseudo_orbit_graph",
    "pseudo_orbit_reach",
    "pseudo_orbit_recurrent",
    "Counterexample",
    "HarnessReport",
    "exhaustive_harness",
    "HARNESS_CHECKS",
]

MAX_BRUTEFORCE_SIZE = 12
EXHAUSTIVE_MAX_SIZE = 3
DEFAULT_SEED = 20240617
HARNESS_CHECKS = ("limit_relation", "reach_closure", "cyclic_cells")


class OracleGuardError(ValueError):
    """Carrier too large for a brute-force oracle."""


def _guard(n: int) -> None:
    if n > MAX_BRUTEFORCE_SIZE:
        raise OracleGuardError(f"brute-force oracles are limited to {MAX_BRUTEFORCE_SIZE} cells, got {n}")


def _rows(f: Relation) -> tuple[int, ...]:
    dense = f.to_dense()
    out = []
    for r in dense:
        v = 0
        for j, bit in enumerate(r.tolist()):
            if bit:
                v |= 1 << j
        out.append(v)
    return tuple(out)


def _bool_product(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Rows of ``b o a``."""
    out = []
    for row in a:
        acc = 0
        z = 0
        while row:
            if row & 1:
                acc |= b[z]
            row >>= 1
            z += 1
        out.append(acc)
    return tuple(out)


def limit_relation_bruteforce(f: Relation) -> Relation:
    """Union of the eventual cycle of ``f, f^2, f^3, ...``."""
    n = f.size
    _guard(n)
    base = _rows(f)
    seen: dict[tuple[int, ...], int] = {}
    history: list[tuple[int, ...]] = []
    cur = base
    while cur not in seen:
        seen[cur] = len(history)
        history.append(cur)
        cur = _bool_product(cur, base)
    start = seen[cur]
    acc = [0] * n
    for m in history[start:]:
        for i in range(n):
            acc[i] |= m[i]
    return Relation.from_int_rows(f.carrier, acc)


def reach_closure_bruteforce(f: Relation) -> Relation:
    """Union of ``f^0, ..., f^size``."""
    n = f.size
    _guard(n)
    base = _rows(f)
    cur = tuple(1 << i for i in range(n))
    acc = list(cur)
    for _ in range(n):
        cur = _bool_product(cur, base)
        acc = [x | y for x, y in zip(acc, cur)]
    return Relation.from_int_rows(f.carrier, acc)


def cyclic_cells_bruteforce(f: Relation) -> CellSet:
    """Cells ``x`` with ``x`` in ``f^k(x)`` for some ``1 <= k <= size``."""
    n = f.size
    _guard(n)
    base = _rows(f)
    cur = base
    hits = set()
    for _ in range(n):
        hits.update(i for i in range(n) if (cur[i] >> i) & 1)
        cur = _bool_product(cur, base)
    return CellSet.from_indices(f.carrier, hits)


# -- pseudo-orbits -----------------------------------------------------------


def _cell_gaps(carrier: Carrier) -> np.ndarray:
    """Set distance between closed cells, from their endpoints."""
    if carrier.dim != 1:
        raise NotImplementedError("pseudo-orbit oracle handles 1D carriers only")
    c = carrier.centers[:, 0]
    r = carrier.cell_radius
    lo, hi = c - r, c + r
    shifts = [0.0]
    if carrier.metric is Metric.CIRCLE:
        shifts = [-carrier.period, 0.0, carrier.period]
    gap = np.full((c.size, c.size), np.inf)
    for s in shifts:
        g = np.maximum(lo[None, :] + s - hi[:, None], lo[:, None] - hi[None, :] - s)
        gap = np.minimum(gap, np.maximum(g, 0.0))
    return gap


def pseudo_orbit_graph(f, eps: float, carrier: Carrier | None = None) -> list[frozenset[int]]:
    """Successor sets of the one-step ``eps``-pseudo-orbit graph.

    For ``eps > 0`` the edge ``x -> y`` exists when closed cell ``y`` lies
    within ``eps`` of some closed cell in the image of ``x``.  ``eps == 0``
    allows no error at all: the graph is ``f`` itself.

    ``f`` is a :class:`Relation`, or a ``SystemSpec`` together with a grid
    ``carrier`` (the map is then outer-approximated first).
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if not isinstance(f, Relation):
        from .discretization import outer_approx

        if carrier is None:
            raise ValueError("a carrier is required when passing a system")
        f = outer_approx(f, carrier)
    car = f.carrier
    dense = f.to_dense()
    if eps == 0:
        return [frozenset(np.flatnonzero(row).tolist()) for row in dense]
    near = _cell_gaps(car) <= eps + 1e-9 * car.cell_radius
    nbhd = [frozenset(np.flatnonzero(row).tolist()) for row in near]
    succ = []
    for x in range(car.size):
        out: set[int] = set()
        for z in np.flatnonzero(dense[x]).tolist():
            out |= nbhd[z]
        succ.append(frozenset(out))
    return succ


def _as_index_set(start, n: int) -> set[int]:
    if isinstance(start, CellSet):
        return set(start.indices())
    s = {int(i) for i in start}
    if any(i < 0 or i >= n for i in s):
        raise IndexError("start cell out of range")
    return s


def pseudo_orbit_reach(
    f,
    eps: float,
    start: CellSet | Iterable[int],
    steps: int | None = None,
    *,
    cumulative: bool = False,
    carrier: Carrier | None = None,
    graph: list[frozenset[int]] | None = None,
) -> CellSet:
    """Cells reachable from ``start`` by ``eps``-pseudo-orbits.

    ``steps=n`` gives the cells at the end of pseudo-orbits with exactly
    ``n`` steps, or with at most ``n`` steps when ``cumulative`` is set.
    ``steps=None`` gives everything reachable in zero or more steps.  A
    prebuilt ``graph`` from :func:`pseudo_orbit_graph` may be passed to
    amortize repeated queries.
    """
    if steps is not None and steps < 0:
        raise ValueError("steps must be nonnegative")
    if graph is None:
        graph = pseudo_orbit_graph(f, eps, carrier)
    car = f.carrier if isinstance(f, Relation) else carrier
    n = len(graph)
    frontier = _as_index_set(start, n)
    if steps is not None and not cumulative:
        for _ in range(steps):
            frontier = set().union(*(graph[x] for x in frontier)) if frontier else set()
        return CellSet.from_indices(car, frontier)
    seen = set(frontier)
    queue = deque((x, 0) for x in frontier)
    while queue:
        x, d = queue.popleft()
        if steps is not None and d >= steps:
            continue
        for y in graph[x]:
            if y not in seen:
                seen.add(y)
                queue.append((y, d + 1))
    return CellSet.from_indices(car, seen)


def pseudo_orbit_recurrent(f, eps: float, carrier: Carrier | None = None) -> CellSet:
    """Cells with an ``eps``-pseudo-orbit of positive length back to themselves."""
    graph = pseudo_orbit_graph(f, eps, carrier)
    car = f.carrier if isinstance(f, Relation) else carrier
    hits = []
    for x in range(len(graph)):
        seen = set(graph[x])
        queue = deque(seen)
        while queue and x not in seen:
            for y in graph[queue.popleft()]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        if x in seen:
            hits.append(x)
    return CellSet.from_indices(car, hits)


# -- harness -----------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    size: int
    check: str
    pairs: tuple[tuple[int, int], ...]
    expected: tuple[tuple[int, int], ...]
    got: tuple[tuple[int, int], ...]

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "check": self.check,
            "relation": [list(p) for p in self.pairs],
            "expected": [list(p) for p in self.expected],
            "got": [list(p) for p in self.got],
        }


@dataclass
class HarnessReport:
    checked: dict[int, int] = field(default_factory=dict)
    exhaustive: dict[int, bool] = field(default_factory=dict)
    counterexample: Counterexample | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def _all_relations(carrier: Carrier):
    n = carrier.size
    for bits in itertools.product((False, True), repeat=n * n):
        yield Relation.from_dense(carrier, np.array(bits, dtype=bool).reshape(n, n))


def _random_relations(carrier: Carrier, trials: int, rng: np.random.Generator):
    n = carrier.size
    for _ in range(trials):
        p = rng.uniform(0.05, 0.6)
        yield Relation.from_dense(carrier, rng.random((n, n)) < p)


def exhaustive_harness(
    sizes: Iterable[int],
    trials: int = 10_000,
    seed: int | None = None,
    checks: Iterable[str] = ("limit_relation",),
) -> HarnessReport:
    """Compare fast operations against the brute-force oracles.

    Sizes up to 3 are enumerated exhaustively; larger sizes draw ``trials``
    random relations with edge densities spread over ``[0.05, 0.6]``.
    Stops at the first disagreement.  ``checks`` may include
    ``"limit_relation"``, ``"reach_closure"`` and ``"cyclic_cells"``.
    """
    from . import limits

    pairs = {
        "limit_relation": (limits.limit_relation, limit_relation_bruteforce),
        "reach_closure": (limits.reach_closure, reach_closure_bruteforce),
        "cyclic_cells": (limits.cyclic_cells, cyclic_cells_bruteforce),
    }
    chosen = [(name, *pairs[name]) for name in checks]
    rng = np.random.default_rng(DEFAULT_SEED if seed is None else seed)
    report = HarnessReport()
    for n in sizes:
        if n < 1:
            raise ValueError("sizes must be positive")
        _guard(n)
        carrier = Carrier.abstract(n)
        exhaustive = n <= EXHAUSTIVE_MAX_SIZE
        source = _all_relations(carrier) if exhaustive else _random_relations(carrier, trials, rng)
        count = 0
        for f in source:
            for name, fast, slow in chosen:
                want, got = slow(f), fast(f)
                if want != got:
                    as_pairs = (
                        (lambda v: tuple((i, i) for i in v.indices()))
                        if isinstance(want, CellSet)
                        else (lambda v: tuple(v.pairs()))
                    )
                    report.counterexample = Counterexample(
                        n, name, tuple(f.pairs()), as_pairs(want), as_pairs(got)
                    )
                    report.checked[n] = count
                    report.exhaustive[n] = exhaustive
                    return report
            count += 1
        report.checked[n] = count
        report.exhaustive[n] = exhaustive
    return report
