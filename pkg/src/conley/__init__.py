"""Limit, omega-limit and Conley relations of finite relations.

The Conley relation is computed two ways over a ladder of fattenings
``iota_eps``: as the intersection of limit relations of ``iota_eps o f``,
and as the intersection of ``(iota_eps o f)* o f^omega``.  Both routes share
the bit-packed relation algebra in :mod:`conley.relation`.
"""

from .discretization import (
    EpsilonLadder,
    GridCarrier,
    GridSpec,
    SubResolutionError,
    SystemSpec,
    bind_ladder,
    build_grid,
    evaluate,
    fatten,
    outer_approx,
    outer_approx_tabulated,
)
from .limits import cyclic_cells, limit_relation, omega_limit, reach_closure, scc_decomposition
from .pipeline import (
    ConleyReport,
    MorseGraph,
    analyze,
    chain_components,
    chain_recurrent,
    conley_by_alternative,
    conley_by_definition,
    identity_suite,
    morse_graph,
)
from .relation import (
    Carrier,
    CellSet,
    IncompatibleCarrierError,
    Metric,
    Relation,
    compose,
    difference,
    empty,
    equals,
    fixed_points,
    full,
    identity,
    image,
    intersection,
    is_subset,
    power,
    transpose,
    union,
)

__version__ = "0.1.0"

__all__ = [
    "Carrier",
    "CellSet",
    "ConleyReport",
    "EpsilonLadder",
    "GridCarrier",
    "GridSpec",
    "IncompatibleCarrierError",
    "Metric",
    "MorseGraph",
    "Relation",
    "SubResolutionError",
    "SystemSpec",
    "analyze",
    "bind_ladder",
    "build_grid",
    "chain_components",
    "chain_recurrent",
    "compose",
    "conley_by_alternative",
    "conley_by_definition",
    "cyclic_cells",
    "difference",
    "empty",
    "equals",
    "evaluate",
    "fatten",
    "fixed_points",
    "full",
    "identity",
    "identity_suite",
    "image",
    "intersection",
    "is_subset",
    "limit_relation",
    "morse_graph",
    "omega_limit",
    "outer_approx",
    "outer_approx_tabulated",
    "power",
    "reach_closure",
    "scc_decomposition",
    "transpose",
    "union",
]
