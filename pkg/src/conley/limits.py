"""Limit and omega-limit relations of a finite relation.

On a finite carrier the lim-sup of the power sequence,
``f^inf = cap_n cup_{k >= n} f^k``, is the set of pairs joined by walks of
unbounded length.  A walk through a cell lying on a directed cycle can be
pumped by whole cycle lengths, and any sufficiently long walk in a finite
graph repeats a cell, so::

    (x, y) in f^inf  <=>  x ->* c ->* y  for some cyclic cell c

where ``->*`` is reachability in zero or more steps.  Everything here is
computed from one strongly connected component pass followed by a single
sweep over the condensation in reverse topological order, with rows held
as Python ``int`` bitmasks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .relation import CellSet, Relation, compose, identity

__all__ = [
    "SccDecomposition",
    "scc_decomposition",
    "cyclic_cells",
    "reach_closure",
    "limit_relation",
    "omega_limit",
    "CLOSURE_DILATIONS",
]

CLOSURE_DILATIONS = ("none", "one-cell")


@dataclass(frozen=True)
class SccDecomposition:
    """Strongly connected components of a relation's graph.

    ``components`` is in reverse topological order of the condensation:
    every edge leaving a component points to one listed earlier.
    """

    carrier: object
    component_of: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]
    has_self_loop: tuple[bool, ...]

    @property
    def component_sizes(self) -> list[int]:
        return [len(c) for c in self.components]

    def is_cyclic_component(self, k: int) -> bool:
        members = self.components[k]
        return len(members) > 1 or self.has_self_loop[members[0]]


def _successors(f: Relation) -> list[list[int]]:
    dense = f.to_dense()
    rows, cols = np.nonzero(dense)
    counts = dense.sum(axis=1)
    split = np.split(cols, np.cumsum(counts)[:-1])
    return [s.tolist() for s in split]


def _tarjan(succ: list[list[int]]) -> list[list[int]]:
    """Iterative Tarjan; components come out sinks first."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            nbrs = succ[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                w = nbrs[i]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                comps.append(comp)
    return comps


def _decompose(f: Relation) -> tuple[list[list[int]], SccDecomposition]:
    succ = _successors(f)
    comps = _tarjan(succ)
    comp_of = [0] * f.size
    for k, members in enumerate(comps):
        for v in members:
            comp_of[v] = k
    loops = tuple(v in s for v, s in enumerate(succ))
    scc = SccDecomposition(
        carrier=f.carrier,
        component_of=tuple(comp_of),
        components=tuple(tuple(c) for c in comps),
        has_self_loop=loops,
    )
    return succ, scc


def scc_decomposition(f: Relation) -> SccDecomposition:
    return _decompose(f)[1]


def _sweep(f: Relation) -> tuple[list[int], list[int], SccDecomposition]:
    """Per-cell reach rows and limit rows, as int bitmasks."""
    succ, scc = _decompose(f)
    comp_of = scc.component_of
    k = len(scc.components)
    reach = [0] * k
    lim = [0] * k
    for c, members in enumerate(scc.components):
        r = 0
        for v in members:
            r |= 1 << v
        l = 0
        seen = {c}
        for v in members:
            for w in succ[v]:
                d = comp_of[w]
                if d not in seen:
                    seen.add(d)
                    r |= reach[d]
                    l |= lim[d]
        reach[c] = r
        lim[c] = r if scc.is_cyclic_component(c) else l
    reach_rows = [reach[comp_of[v]] for v in range(f.size)]
    lim_rows = [lim[comp_of[v]] for v in range(f.size)]
    return reach_rows, lim_rows, scc


def cyclic_cells(f: Relation) -> CellSet:
    """Cells lying on some directed cycle of ``f`` (self-loops included)."""
    scc = scc_decomposition(f)
    mask = np.zeros(f.size, dtype=bool)
    for k, members in enumerate(scc.components):
        if scc.is_cyclic_component(k):
            mask[list(members)] = True
    return CellSet.from_mask(f.carrier, mask)


def reach_closure(f: Relation) -> Relation:
    """Reflexive-transitive closure ``f*`` (reachability in zero or more steps)."""
    reach_rows, _, _ = _sweep(f)
    return Relation.from_int_rows(f.carrier, reach_rows)


def limit_relation(f: Relation) -> Relation:
    """The limit relation ``cap_n cup_{k >= n} f^k`` of a finite relation."""
    _, lim_rows, _ = _sweep(f)
    return Relation.from_int_rows(f.carrier, lim_rows)


def omega_limit(f: Relation, closure_dilation: str = "none") -> Relation:
    """Omega-limit relation.

    Closure is the identity on a discrete finite carrier, so the default
    returns :func:`limit_relation` unchanged.  ``closure_dilation="one-cell"``
    instead thickens the result by one neighbouring cell on both sides,
    ``N o f^inf o N`` with ``N`` relating cells whose centers are at most one
    cell diameter apart.
    """
    if closure_dilation not in CLOSURE_DILATIONS:
        raise ValueError(f"closure_dilation must be one of {CLOSURE_DILATIONS}")
    lim = limit_relation(f)
    if closure_dilation == "none":
        return lim
    carrier = f.carrier
    near = carrier.distances() <= carrier.cell_diameter * (1 + 1e-9)
    nbhd = Relation.from_dense(carrier, near) | identity(carrier)
    return compose(compose(nbhd, lim), nbhd)
