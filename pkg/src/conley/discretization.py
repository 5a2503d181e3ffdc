"""Grids on [0, 1] and the unit circle, outer approximations, fattenings.

Cells are half-open, ``[i h, (i + 1) h)`` with ``h = 1 / n``; on the
interval the last cell also contains ``1``.  A cell's image under a
built-in map is bracketed exactly by splitting the cell at the map's
turning points and evaluating the monotone pieces at their ends, keeping
track of which ends are attained.  Circle maps are handled through a
continuous lift ``F: [0, 1] -> R`` with ``F(x + 1) = F(x) + deg``.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .relation import Carrier, Metric, Relation, identity

__all__ = [
    "DOMAINS",
    "SYSTEMS",
    "GridSpec",
    "GridCarrier",
    "SystemSpec",
    "EpsilonLadder",
    "SubResolutionError",
    "build_grid",
    "evaluate",
    "outer_approx",
    "outer_approx_tabulated",
    "fatten",
    "bind_ladder",
]

DOMAINS = ("unit_interval", "unit_circle")

# relative slack on distance comparisons; grid distances tie exactly with
# ladder bounds that are integer multiples of the cell size
_DIST_RTOL = 1e-9


@dataclass(frozen=True)
class GridSpec:
    domain: str
    cells_per_axis: int

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ValueError(f"unknown domain {self.domain!r}; expected one of {DOMAINS}")
        if int(self.cells_per_axis) != self.cells_per_axis or self.cells_per_axis < 2:
            raise ValueError("cells_per_axis must be an integer >= 2")

    @property
    def cell_size(self) -> float:
        return 1.0 / self.cells_per_axis


class GridCarrier(Carrier):
    """Carrier built from a :class:`GridSpec`; remembers its cell edges."""

    __slots__ = ("_grid", "_edges")

    def __init__(self, grid: GridSpec):
        n = grid.cells_per_axis
        metric = Metric.CIRCLE if grid.domain == "unit_circle" else Metric.INTERVAL
        super().__init__((np.arange(n) + 0.5) / n, 0.5 / n, metric, period=1.0)
        edges = np.arange(n + 1) / n
        edges.setflags(write=False)
        self._grid = grid
        self._edges = edges

    @property
    def grid(self) -> GridSpec:
        return self._grid

    @property
    def domain(self) -> str:
        return self._grid.domain

    @property
    def edges(self) -> np.ndarray:
        return self._edges

    def cell_of(self, x) -> np.ndarray:
        """Index of the cell containing each point ``x`` (circle points taken mod 1)."""
        x = np.asarray(x, dtype=float)
        n = self.size
        if self.domain == "unit_circle":
            x = np.mod(x, 1.0)
        idx = np.searchsorted(self._edges, x, side="right") - 1
        return np.clip(idx, 0, n - 1)

    def __repr__(self) -> str:
        return f"GridCarrier({self._grid.domain}, cells={self.size})"


def build_grid(spec: GridSpec) -> GridCarrier:
    return GridCarrier(spec)


# -- built-in systems ----------------------------------------------------------


@dataclass(frozen=True)
class _MapDef:
    domain: str
    params: tuple[str, ...]
    lift: Callable[[np.ndarray, Mapping[str, float]], np.ndarray]
    turning_points: Callable[[Mapping[str, float]], list[float]]
    lipschitz: Callable[[Mapping[str, float]], float]
    check: Callable[[Mapping[str, float]], None] = lambda p: None


def _logistic_check(p):
    if not 0.0 <= p["r"] <= 4.0:
        raise ValueError("logistic map needs 0 <= r <= 4 to stay in [0, 1]")


def _tent_check(p):
    if not 0.0 <= p["mu"] <= 2.0:
        raise ValueError("tent map needs 0 <= mu <= 2 to stay in [0, 1]")


def _north_south_turns(p):
    k = 2 * math.pi * abs(p["delta"])
    if k <= 1.0:
        return []
    # lift derivative 1 + 2 pi delta cos(2 pi x) changes sign here
    a = math.acos(-1.0 / (2 * math.pi * p["delta"])) / (2 * math.pi)
    return sorted({a, 1.0 - a})


SYSTEMS: dict[str, _MapDef] = {
    "logistic": _MapDef(
        "unit_interval",
        ("r",),
        lambda x, p: p["r"] * x * (1.0 - x),
        lambda p: [0.5],
        lambda p: abs(p["r"]),
        _logistic_check,
    ),
    "tent": _MapDef(
        "unit_interval",
        ("mu",),
        lambda x, p: p["mu"] * np.minimum(x, 1.0 - x),
        lambda p: [0.5],
        lambda p: abs(p["mu"]),
        _tent_check,
    ),
    "rotation": _MapDef(
        "unit_circle",
        ("alpha",),
        lambda x, p: x + p["alpha"],
        lambda p: [],
        lambda p: 1.0,
    ),
    "doubling": _MapDef(
        "unit_circle",
        (),
        lambda x, p: 2.0 * x,
        lambda p: [],
        lambda p: 2.0,
    ),
    "north_south": _MapDef(
        "unit_circle",
        ("delta",),
        lambda x, p: x + p["delta"] * np.sin(2 * np.pi * x),
        _north_south_turns,
        lambda p: 1.0 + 2 * math.pi * abs(p["delta"]),
    ),
}


@dataclass(frozen=True)
class SystemSpec:
    """A named built-in map with its parameters.

    ``lipschitz_bound`` defaults to the map's global Lipschitz constant:
    ``r`` (logistic), ``mu`` (tent), 1 (rotation), 2 (doubling),
    ``1 + 2 pi |delta|`` (north_south).
    """

    name: str
    params: Mapping[str, float] = field(default_factory=dict)
    lipschitz_bound: float | None = None

    def __post_init__(self):
        if self.name not in SYSTEMS:
            raise ValueError(f"unknown system {self.name!r}; expected one of {sorted(SYSTEMS)}")
        d = SYSTEMS[self.name]
        missing = [k for k in d.params if k not in self.params]
        if missing:
            raise ValueError(f"system {self.name!r} requires parameter(s) {missing}")
        params = {k: float(self.params[k]) for k in d.params}
        object.__setattr__(self, "params", params)
        d.check(params)
        if self.lipschitz_bound is None:
            object.__setattr__(self, "lipschitz_bound", d.lipschitz(params))
        elif not self.lipschitz_bound > 0:
            raise ValueError("lipschitz_bound must be positive")

    @property
    def domain(self) -> str:
        return SYSTEMS[self.name].domain

    def lift(self, x) -> np.ndarray:
        return SYSTEMS[self.name].lift(np.asarray(x, dtype=float), self.params)

    def turning_points(self) -> list[float]:
        return SYSTEMS[self.name].turning_points(self.params)


def evaluate(sys: SystemSpec, x) -> np.ndarray:
    """Point evaluation of the map, reduced mod 1 on the circle."""
    y = sys.lift(x)
    return np.mod(y, 1.0) if sys.domain == "unit_circle" else y


# -- interval bracketing -----------------------------------------------------


def _overlaps(lo, lo_closed, hi, hi_closed, c_lo, c_lo_closed, c_hi, c_hi_closed):
    """Vectorized test: does the interval meet each cell?"""
    low = np.maximum(lo, c_lo)
    low_closed = np.where(lo > c_lo, lo_closed, np.where(lo < c_lo, c_lo_closed, lo_closed & c_lo_closed))
    high = np.minimum(hi, c_hi)
    high_closed = np.where(hi < c_hi, hi_closed, np.where(hi > c_hi, c_hi_closed, hi_closed & c_hi_closed))
    return (low < high) | ((low == high) & low_closed & high_closed)


def _cell_bounds(carrier: GridCarrier):
    n = carrier.size
    e = carrier.edges
    right_closed = np.zeros(n, dtype=bool)
    if carrier.domain == "unit_interval":
        right_closed[-1] = True
    return e[:-1], e[1:], right_closed


def _targets(carrier: GridCarrier, lo, lo_c, hi, hi_c) -> np.ndarray:
    """Boolean mask of cells met by one image interval."""
    c_lo, c_hi, c_hi_closed = _cell_bounds(carrier)
    if carrier.domain == "unit_interval":
        if lo < 0.0 or hi > 1.0:
            raise ValueError("map image leaves the unit interval")
        return _overlaps(lo, lo_c, hi, hi_c, c_lo, True, c_hi, c_hi_closed)
    if hi - lo >= 1.0:
        return np.ones(carrier.size, dtype=bool)
    hit = np.zeros(carrier.size, dtype=bool)
    for k in range(math.floor(lo), math.floor(hi) + 1):
        hit |= _overlaps(lo - k, lo_c, hi - k, hi_c, c_lo, True, c_hi, c_hi_closed)
    return hit


def outer_approx(sys: SystemSpec, carrier: GridCarrier) -> Relation:
    """Cell-to-cell relation containing every transition of the map.

    Row ``a`` holds each cell met by the image of cell ``a``.  The image is
    the union over monotone pieces of ``[F(p), F(q))`` (increasing) or
    ``(F(q), F(p)]`` (decreasing), closed at ``q`` when ``q`` itself lies in
    the cell.
    """
    if not isinstance(carrier, GridCarrier):
        raise TypeError("outer_approx needs a carrier built by build_grid")
    if carrier.domain != sys.domain:
        raise ValueError(f"system {sys.name!r} lives on {sys.domain}, carrier on {carrier.domain}")
    n = carrier.size
    edges = carrier.edges
    turns = np.array(sorted(sys.turning_points()), dtype=float)
    dense = np.zeros((n, n), dtype=bool)
    for a in range(n):
        p, q = edges[a], edges[a + 1]
        inner = turns[(turns > p) & (turns < q)]
        cuts = np.concatenate(([p], inner, [q]))
        vals = sys.lift(cuts)
        last_closed = carrier.domain == "unit_interval" and a == n - 1
        row = np.zeros(n, dtype=bool)
        for j in range(len(cuts) - 1):
            v0, v1 = float(vals[j]), float(vals[j + 1])
            end_in = last_closed and j == len(cuts) - 2
            if v1 > v0:
                piece = (v0, True, v1, end_in)
            elif v1 < v0:
                piece = (v1, end_in, v0, True)
            else:
                piece = (v0, True, v0, True)
            row |= _targets(carrier, *piece)
        if not row.any():
            raise ValueError(f"cell {a} has an empty image under {sys.name!r}")
        dense[a] = row
    return Relation.from_dense(carrier, dense)


def outer_approx_tabulated(
    xs: Sequence[float],
    ys: Sequence[float],
    carrier: GridCarrier,
    lipschitz_bound: float,
) -> Relation:
    """Outer approximation of a tabulated map ``xs -> ys``.

    Samples must cover the domain; ``ys`` are lift values on the circle.
    Each cell's image is bracketed by the sample values within one sample
    spacing of the cell, padded by ``lipschitz_bound * spacing``.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1 or xs.size < 2:
        raise ValueError("xs and ys must be 1D arrays of equal length >= 2")
    order = np.argsort(xs)
    xs, ys = xs[order], ys[order]
    if xs[0] > 0.0 or xs[-1] < 1.0:
        raise ValueError("samples must cover [0, 1]")
    spacing = float(np.max(np.diff(xs)))
    pad = lipschitz_bound * spacing
    n = carrier.size
    dense = np.zeros((n, n), dtype=bool)
    for a in range(n):
        p, q = carrier.edges[a], carrier.edges[a + 1]
        sel = (xs >= p - spacing) & (xs <= q + spacing)
        lo, hi = float(ys[sel].min()) - pad, float(ys[sel].max()) + pad
        if carrier.domain == "unit_interval":
            lo, hi = max(lo, 0.0), min(hi, 1.0)
        dense[a] = _targets(carrier, lo, True, hi, True)
    return Relation.from_dense(carrier, dense)


# -- fattening ---------------------------------------------------------------


def fatten(carrier: Carrier, eps: float) -> Relation:
    """Relation sending each cell to every cell within ``eps`` of it.

    Cells ``a`` and ``b`` are related when their centers are at most
    ``eps + 2 * cell_radius`` apart, which over-covers every pair of points
    less than ``eps`` apart.  Symmetric and reflexive for any ``eps >= 0``.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    bound = eps + carrier.cell_diameter
    near = carrier.distances() <= bound + _DIST_RTOL * carrier.cell_radius
    return Relation.from_dense(carrier, near)


@dataclass(frozen=True)
class EpsilonLadder:
    values: tuple[float, ...]
    include_identity_floor: bool = False

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("ladder must have at least one rung")
        if any(v <= 0 for v in vals):
            raise ValueError("ladder values must be positive")
        if any(b >= a for a, b in zip(vals, vals[1:])):
            raise ValueError("ladder values must be strictly decreasing")

    @classmethod
    def in_cells(cls, multiples: Sequence[float], cell_size: float, include_identity_floor: bool = False):
        """Ladder with rungs ``m * cell_size`` for each multiple ``m``."""
        return cls(tuple(m * cell_size for m in multiples), include_identity_floor)


class SubResolutionError(ValueError):
    def __init__(self, eps: float, diameter: float):
        super().__init__(f"rung eps={eps:g} is below the cell diameter {diameter:g}")
        self.eps = eps
        self.diameter = diameter


def bind_ladder(ladder: EpsilonLadder, carrier: Carrier) -> list[tuple[float, Relation]]:
    """Fattening relation per rung; the identity floor appends ``(0.0, I)``."""
    h = carrier.cell_diameter
    if not ladder.include_identity_floor:
        for eps in ladder.values:
            if eps < h * (1 - _DIST_RTOL):
                raise SubResolutionError(eps, h)
    rungs = [(eps, fatten(carrier, eps)) for eps in ladder.values]
    if ladder.include_identity_floor:
        rungs.append((0.0, identity(carrier)))
    return rungs
