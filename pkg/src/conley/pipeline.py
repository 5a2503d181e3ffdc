"""Conley relation by two independent routes, and what it yields.

For each fattening ``iota`` on the ladder, with ``phi = iota o f``
(fatten after the map step):

* definition route:  ``lhs = phi^inf``
* alternative route: ``rhs = phi* o f^omega`` -- the omega-limit first,
  then any number of ``phi`` steps, which is ``cup_n phi^n o f^omega``.

Intersecting over the ladder gives ``conley_def`` and ``conley_alt``.  The
chain recurrent set is the diagonal of the Conley relation; chain
components are classes of mutual relatedness on it, and the Morse graph
orders them.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .limits import limit_relation, omega_limit, reach_closure
from .relation import (
    CellSet,
    Relation,
    _check_same,
    compose,
    fixed_points,
    intersection,
    is_subset,
)

__all__ = [
    "Rung",
    "IdentityResult",
    "MorseGraph",
    "ConleyReport",
    "MorseGraphError",
    "fattened_map",
    "conley_by_definition",
    "conley_by_alternative",
    "chain_recurrent",
    "chain_components",
    "morse_graph",
    "identity_suite",
    "analyze",
]

log = logging.getLogger(__name__)

LimitFn = Callable[[Relation], Relation]


class MorseGraphError(RuntimeError):
    """Component order has a cycle; the Conley relation was not transitive."""


@dataclass(frozen=True)
class Rung:
    eps: float
    phi: Relation
    lhs: Relation
    rhs: Relation


@dataclass(frozen=True)
class IdentityResult:
    name: str
    holds: bool
    required: bool
    counterexample: tuple[int, int] | None = None


@dataclass(frozen=True)
class MorseGraph:
    nodes: tuple[CellSet, ...]
    edges: tuple[tuple[int, int], ...]

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        for k, members in enumerate(self.nodes):
            g.add_node(k, size=len(members))
        g.add_edges_from(self.edges)
        return g


@dataclass(frozen=True)
class ConleyReport:
    rungs: tuple[Rung, ...]
    omega: Relation
    conley_def: Relation
    conley_alt: Relation
    routes_equal: bool
    chain_recurrent: CellSet
    chain_recurrent_def: CellSet
    components: tuple[CellSet, ...]
    morse: MorseGraph
    identity_results: tuple[IdentityResult, ...] = field(default=())

    @property
    def conley(self) -> Relation:
        """The reported Conley relation (alternative route)."""
        return self.conley_alt

    @property
    def required_identities_hold(self) -> bool:
        return all(r.holds for r in self.identity_results if r.required)


def fattened_map(f: Relation, iota: Relation) -> Relation:
    """``iota o f``: take the map step, then allow an ``iota`` error."""
    return compose(f, iota)


def _check_rungs(f: Relation, rungs: Sequence[tuple[float, Relation]]) -> None:
    if not rungs:
        raise ValueError("at least one rung is required")
    for _, iota in rungs:
        _check_same(f.carrier, iota.carrier)


def _intersect_all(rels: Sequence[Relation]) -> Relation:
    out = rels[0]
    for r in rels[1:]:
        out = intersection(out, r)
    return out


def _pmap(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def conley_by_definition(
    f: Relation,
    rungs: Sequence[tuple[float, Relation]],
    *,
    limit: LimitFn = limit_relation,
    workers: int = 1,
) -> tuple[list[Relation], Relation]:
    """Per-rung ``(iota o f)^inf`` and their intersection."""
    _check_rungs(f, rungs)
    lhs = _pmap(lambda r: limit(fattened_map(f, r[1])), list(rungs), workers)
    return lhs, _intersect_all(lhs)


def conley_by_alternative(
    f: Relation,
    rungs: Sequence[tuple[float, Relation]],
    *,
    omega: Relation | None = None,
    workers: int = 1,
) -> tuple[list[Relation], Relation]:
    """Per-rung ``(iota o f)* o f^omega`` and their intersection."""
    _check_rungs(f, rungs)
    if omega is None:
        omega = omega_limit(f)
    rhs = _pmap(lambda r: compose(omega, reach_closure(fattened_map(f, r[1]))), list(rungs), workers)
    return rhs, _intersect_all(rhs)


def chain_recurrent(conley: Relation) -> CellSet:
    return fixed_points(conley)


def chain_components(conley: Relation, cr: CellSet) -> list[CellSet]:
    """Classes of mutual relatedness on ``cr``, ordered by smallest member."""
    dense = conley.to_dense()
    mutual = dense & dense.T
    remaining = cr.to_mask().copy()
    comps = []
    for x in cr.indices():
        if not remaining[x]:
            continue
        members = mutual[x] & remaining
        members[x] = True
        remaining &= ~members
        comps.append(CellSet.from_mask(conley.carrier, members))
    return comps


def morse_graph(conley: Relation, components: Sequence[CellSet]) -> MorseGraph:
    """Edge ``A -> B`` whenever some cell of ``A`` relates to some cell of ``B``."""
    dense = conley.to_dense()
    masks = [c.to_mask() for c in components]
    edges = []
    for a, ma in enumerate(masks):
        reach = dense[ma].any(axis=0)
        for b, mb in enumerate(masks):
            if a != b and (reach & mb).any():
                edges.append((a, b))
    graph = MorseGraph(tuple(components), tuple(edges))
    if not nx.is_directed_acyclic_graph(graph.to_networkx()):
        raise MorseGraphError("component order has a cycle")
    return graph


# -- identity suite ----------------------------------------------------------


def _first_pair(r: Relation) -> tuple[int, int] | None:
    rows, cols = np.nonzero(r.to_dense())
    return (int(rows[0]), int(cols[0])) if rows.size else None


def _eq(name: str, a: Relation, b: Relation, required: bool) -> IdentityResult:
    diff = (a.to_dense() ^ b.to_dense())
    rows, cols = np.nonzero(diff)
    cx = (int(rows[0]), int(cols[0])) if rows.size else None
    return IdentityResult(name, cx is None, required, cx)


def _sub(name: str, a: Relation, b: Relation, required: bool) -> IdentityResult:
    """``a`` contained in ``b``; counterexample is a pair of ``a`` missing from ``b``."""
    if is_subset(a, b):
        return IdentityResult(name, True, required)
    return IdentityResult(name, False, required, _first_pair(a - b))


def _suite(
    f: Relation,
    omega: Relation,
    rungs: Sequence[Rung],
    conley_def: Relation,
    conley_alt: Relation,
) -> list[IdentityResult]:
    out: list[IdentityResult] = []
    for r in rungs:
        tag = f"eps={r.eps:g}"
        out.append(_eq(f"phi_then_limit[{tag}]", compose(r.lhs, r.phi), r.lhs, True))
        out.append(_eq(f"limit_then_phi[{tag}]", compose(r.phi, r.lhs), r.lhs, True))
        out.append(_eq(f"limit_idempotent[{tag}]", compose(r.lhs, r.lhs), r.lhs, True))
        out.append(_sub(f"alternative_within_definition[{tag}]", r.rhs, r.lhs, True))
    out.append(_sub("omega_within_conley_def", omega, conley_def, True))
    out.append(_sub("omega_within_conley_alt", omega, conley_alt, True))
    out.append(_sub("omega_within_map_after_omega", omega, compose(omega, f), True))
    out.append(_sub("omega_within_omega_after_map", omega, compose(f, omega), True))
    out.append(_sub("omega_within_omega_squared", omega, compose(omega, omega), True))
    out.append(_sub("conley_alt_within_conley_def", conley_alt, conley_def, True))
    # diagnostics: exact for the true relation, not guaranteed on a finite ladder
    for r in rungs:
        out.append(_eq(f"omega_absorbed_by_limit[eps={r.eps:g}]", compose(omega, r.lhs), r.lhs, False))
    for label, c in (("alt", conley_alt), ("def", conley_def)):
        out.append(_eq(f"conley_{label}_absorbs_omega", compose(omega, c), c, False))
        out.append(_eq(f"conley_{label}_then_map", compose(c, f), c, False))
        out.append(_eq(f"map_then_conley_{label}", compose(f, c), c, False))
        out.append(_eq(f"conley_{label}_idempotent", compose(c, c), c, False))
    return out


def _rungs(f, rungs, omega, limit, workers) -> list[Rung]:
    def one(item):
        eps, iota = item
        phi = fattened_map(f, iota)
        return Rung(float(eps), phi, limit(phi), compose(omega, reach_closure(phi)))

    return _pmap(one, list(rungs), workers)


def identity_suite(
    f: Relation,
    rungs: Sequence[tuple[float, Relation]],
    *,
    closure_dilation: str = "none",
    limit: LimitFn = limit_relation,
) -> list[IdentityResult]:
    """Evaluate the identity checks without building a full report."""
    _check_rungs(f, rungs)
    omega = _omega(f, closure_dilation, limit)
    rs = _rungs(f, rungs, omega, limit, 1)
    return _suite(
        f,
        omega,
        rs,
        _intersect_all([r.lhs for r in rs]),
        _intersect_all([r.rhs for r in rs]),
    )


def _omega(f: Relation, closure_dilation: str, limit: LimitFn) -> Relation:
    if limit is limit_relation:
        return omega_limit(f, closure_dilation)
    if closure_dilation != "none":
        raise ValueError("closure_dilation needs the default limit function")
    return limit(f)


def analyze(
    f: Relation,
    rungs: Sequence[tuple[float, Relation]],
    *,
    closure_dilation: str = "none",
    limit: LimitFn = limit_relation,
    workers: int = 1,
) -> ConleyReport:
    """Run both routes over the ladder and assemble a :class:`ConleyReport`.

    Rungs are independent and may be evaluated on ``workers`` threads.
    ``limit`` replaces the limit-relation routine (used for fault injection).
    """
    _check_rungs(f, rungs)
    omega = _omega(f, closure_dilation, limit)
    rs = _rungs(f, rungs, omega, limit, workers)
    conley_def = _intersect_all([r.lhs for r in rs])
    conley_alt = _intersect_all([r.rhs for r in rs])
    cr = chain_recurrent(conley_alt)
    comps = chain_components(conley_alt, cr)
    report = ConleyReport(
        rungs=tuple(rs),
        omega=omega,
        conley_def=conley_def,
        conley_alt=conley_alt,
        routes_equal=conley_def == conley_alt,
        chain_recurrent=cr,
        chain_recurrent_def=chain_recurrent(conley_def),
        components=tuple(comps),
        morse=morse_graph(conley_alt, comps),
        identity_results=tuple(_suite(f, omega, rs, conley_def, conley_alt)),
    )
    log.debug(
        "conley: %d rungs, routes_equal=%s, %d chain recurrent cells in %d components",
        len(rs),
        report.routes_equal,
        len(cr),
        len(comps),
    )
    return report
