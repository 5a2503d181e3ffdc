"""Finite relations as bit-packed boolean matrices.

A :class:`Relation` over a :class:`Carrier` of ``n`` cells stores an
``n x n`` boolean matrix with one row per source cell.  Entry ``(a, b)`` set
means ``b`` is an image of ``a``.  Rows are packed little-endian into
``uint64`` words, so bit ``b`` of row ``a`` lives in word ``b >> 6`` at
position ``b & 63``.  Padding bits past ``n`` are always zero.

Composition follows the usual "g after f" reading::

    compose(f, g) == g o f == {(x, y) : exists z, (x, z) in f and (z, y) in g}

All values are immutable; every operation returns a new object.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Metric",
    "Carrier",
    "Relation",
    "CellSet",
    "IncompatibleCarrierError",
    "identity",
    "empty",
    "full",
    "compose",
    "power",
    "union",
    "intersection",
    "difference",
    "transpose",
    "is_subset",
    "equals",
    "image",
    "fixed_points",
]

_WORD_BITS = 64
# cap on the temporary (rows x n x words) buffer used by compose
_COMPOSE_BLOCK_ELEMS = 1 << 22


class IncompatibleCarrierError(ValueError):
    """Raised when two values built on different carriers are combined."""


class Metric(str, enum.Enum):
    INTERVAL = "interval-euclidean"
    CIRCLE = "circle-wraparound"


class Carrier:
    """Indexed finite set of cells with geometry.

    Parameters
    ----------
    centers : array_like, shape (n,) or (n, d)
        Cell centers, all distinct.
    cell_radius : float
        Half-width of each cell.
    metric : Metric
        ``INTERVAL`` uses the Euclidean distance, ``CIRCLE`` wraps with
        period ``period``.

    Carriers compare by identity: two carriers with the same geometry are
    still different carriers.
    """

    __slots__ = ("_centers", "_cell_radius", "_metric", "_period", "_words")

    def __init__(
        self,
        centers,
        cell_radius: float,
        metric: Metric | str = Metric.INTERVAL,
        period: float = 1.0,
    ):
        c = np.array(centers, dtype=float)
        if c.ndim == 1:
            c = c[:, None]
        if c.ndim != 2 or c.shape[0] < 1 or c.shape[1] not in (1, 2):
            raise ValueError("centers must be a nonempty list of 1D or 2D points")
        if len({tuple(row) for row in c}) != c.shape[0]:
            raise ValueError("carrier centers must be distinct")
        if not cell_radius > 0:
            raise ValueError("cell_radius must be positive")
        c.setflags(write=False)
        self._centers = c
        self._cell_radius = float(cell_radius)
        self._metric = Metric(metric)
        self._period = float(period)
        self._words = (c.shape[0] + _WORD_BITS - 1) // _WORD_BITS

    @classmethod
    def abstract(cls, size: int) -> "Carrier":
        """A carrier of ``size`` unit cells on a line; handy for pure algebra."""
        return cls(np.arange(size, dtype=float) + 0.5, 0.5)

    @property
    def size(self) -> int:
        return self._centers.shape[0]

    @property
    def centers(self) -> np.ndarray:
        return self._centers

    @property
    def dim(self) -> int:
        return self._centers.shape[1]

    @property
    def cell_radius(self) -> float:
        return self._cell_radius

    @property
    def cell_diameter(self) -> float:
        return 2.0 * self._cell_radius

    @property
    def metric(self) -> Metric:
        return self._metric

    @property
    def period(self) -> float:
        return self._period

    @property
    def n_words(self) -> int:
        return self._words

    def distances(self) -> np.ndarray:
        """Dense ``size x size`` matrix of center-to-center distances."""
        diff = np.abs(self._centers[:, None, :] - self._centers[None, :, :])
        if self._metric is Metric.CIRCLE:
            diff = np.minimum(diff, self._period - diff)
        if self.dim == 1:
            return diff[..., 0]
        return np.sqrt((diff**2).sum(axis=-1))

    def permuted(self, perm: Sequence[int]) -> "Carrier":
        """New carrier whose cell ``i`` is this carrier's cell ``perm[i]``."""
        return Carrier(self._centers[np.asarray(perm)], self._cell_radius, self._metric, self._period)

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"Carrier(size={self.size}, cell_radius={self._cell_radius:g}, metric={self._metric.value})"


def _check_same(a: Carrier, b: Carrier) -> None:
    if a is not b:
        raise IncompatibleCarrierError("values live on different carriers")


# -- packing helpers ---------------------------------------------------------


def _pack_rows(dense: np.ndarray, n_words: int) -> np.ndarray:
    """Pack a 2D boolean array by rows into little-endian uint64 words."""
    packed = np.packbits(dense, axis=-1, bitorder="little")
    nbytes = n_words * 8
    if packed.shape[-1] < nbytes:
        pad = [(0, 0)] * (packed.ndim - 1) + [(0, nbytes - packed.shape[-1])]
        packed = np.pad(packed, pad)
    return np.ascontiguousarray(packed).view("<u8")


def _unpack_rows(words: np.ndarray, n: int) -> np.ndarray:
    as_bytes = np.ascontiguousarray(words).view(np.uint8)
    return np.unpackbits(as_bytes, axis=-1, count=n, bitorder="little").astype(bool)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Relation:
    """Immutable relation on a carrier, stored as packed boolean rows."""

    __slots__ = ("_carrier", "_words")

    def __init__(self, carrier: Carrier, words: np.ndarray):
        words = np.asarray(words, dtype="<u8")
        if words.shape != (carrier.size, carrier.n_words):
            raise ValueError(
                f"word array has shape {words.shape}, expected {(carrier.size, carrier.n_words)}"
            )
        if not words.flags.writeable and words.flags.c_contiguous:
            self._words = words
        else:
            self._words = _frozen(np.array(words, dtype="<u8", order="C"))
        self._carrier = carrier

    # -- construction --------------------------------------------------------

    @classmethod
    def from_dense(cls, carrier: Carrier, dense) -> "Relation":
        m = np.asarray(dense, dtype=bool)
        if m.shape != (carrier.size, carrier.size):
            raise ValueError(f"matrix shape {m.shape} does not match carrier size {carrier.size}")
        return cls(carrier, _frozen(_pack_rows(m, carrier.n_words)))

    @classmethod
    def from_pairs(cls, carrier: Carrier, pairs: Iterable[tuple[int, int]]) -> "Relation":
        m = np.zeros((carrier.size, carrier.size), dtype=bool)
        for a, b in pairs:
            m[a, b] = True
        return cls.from_dense(carrier, m)

    @classmethod
    def from_int_rows(cls, carrier: Carrier, rows: Sequence[int]) -> "Relation":
        """Build from one Python ``int`` bitmask per row (bit ``j`` = column ``j``)."""
        nbytes = carrier.n_words * 8
        buf = b"".join(r.to_bytes(nbytes, "little") for r in rows)
        words = np.frombuffer(buf, dtype="<u8").reshape(carrier.size, carrier.n_words)
        return cls(carrier, words)

    # -- views ---------------------------------------------------------------

    @property
    def carrier(self) -> Carrier:
        return self._carrier

    @property
    def size(self) -> int:
        return self._carrier.size

    @property
    def words(self) -> np.ndarray:
        """Read-only ``(size, n_words)`` uint64 array."""
        return self._words

    def to_dense(self) -> np.ndarray:
        return _unpack_rows(self._words, self.size)

    def int_rows(self) -> list[int]:
        """Rows as Python ``int`` bitmasks; cheap bit-parallel scratch space."""
        if self._carrier.n_words == 1:
            return self._words[:, 0].tolist()
        return [int.from_bytes(row.tobytes(), "little") for row in self._words]

    def pairs(self) -> list[tuple[int, int]]:
        rows, cols = np.nonzero(self.to_dense())
        return list(zip(rows.tolist(), cols.tolist()))

    def row(self, a: int) -> "CellSet":
        return CellSet(self._carrier, self._words[a])

    def cardinality(self) -> int:
        return int(np.bitwise_count(self._words).sum())

    def __contains__(self, pair: tuple[int, int]) -> bool:
        a, b = pair
        return bool((int(self._words[a, b >> 6]) >> (b & 63)) & 1)

    def is_empty(self) -> bool:
        return not self._words.any()

    # -- operators -----------------------------------------------------------

    def __or__(self, other: "Relation") -> "Relation":
        return union(self, other)

    def __and__(self, other: "Relation") -> "Relation":
        return intersection(self, other)

    def __sub__(self, other: "Relation") -> "Relation":
        return difference(self, other)

    def __le__(self, other: "Relation") -> bool:
        return is_subset(self, other)

    def __ge__(self, other: "Relation") -> bool:
        return is_subset(other, self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return self._carrier is other._carrier and np.array_equal(self._words, other._words)

    def __hash__(self) -> int:
        return hash((id(self._carrier), self._words.tobytes()))

    @property
    def T(self) -> "Relation":
        return transpose(self)

    def __repr__(self) -> str:
        return f"Relation(size={self.size}, pairs={self.cardinality()})"


class CellSet:
    """Immutable set of cell indices of a carrier, packed into uint64 words."""

    __slots__ = ("_carrier", "_words")

    def __init__(self, carrier: Carrier, words: np.ndarray):
        words = np.asarray(words, dtype="<u8")
        if words.shape != (carrier.n_words,):
            raise ValueError("word vector does not match carrier")
        self._words = _frozen(np.array(words, order="C"))
        self._carrier = carrier

    @classmethod
    def from_indices(cls, carrier: Carrier, indices: Iterable[int]) -> "CellSet":
        mask = np.zeros(carrier.size, dtype=bool)
        idx = np.fromiter(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= carrier.size):
            raise IndexError("cell index out of range")
        mask[idx] = True
        return cls.from_mask(carrier, mask)

    @classmethod
    def from_mask(cls, carrier: Carrier, mask) -> "CellSet":
        m = np.asarray(mask, dtype=bool)
        if m.shape != (carrier.size,):
            raise ValueError("mask length does not match carrier")
        return cls(carrier, _pack_rows(m[None, :], carrier.n_words)[0])

    @classmethod
    def all(cls, carrier: Carrier) -> "CellSet":
        return cls.from_mask(carrier, np.ones(carrier.size, dtype=bool))

    @classmethod
    def none(cls, carrier: Carrier) -> "CellSet":
        return cls(carrier, np.zeros(carrier.n_words, dtype="<u8"))

    @property
    def carrier(self) -> Carrier:
        return self._carrier

    @property
    def words(self) -> np.ndarray:
        return self._words

    def to_mask(self) -> np.ndarray:
        return _unpack_rows(self._words[None, :], self._carrier.size)[0]

    def indices(self) -> list[int]:
        return np.flatnonzero(self.to_mask()).tolist()

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices())

    def __len__(self) -> int:
        return int(np.bitwise_count(self._words).sum())

    def __bool__(self) -> bool:
        return bool(self._words.any())

    def __contains__(self, i: int) -> bool:
        return 0 <= i < self._carrier.size and bool((int(self._words[i >> 6]) >> (i & 63)) & 1)

    def __or__(self, other: "CellSet") -> "CellSet":
        _check_same(self._carrier, other._carrier)
        return CellSet(self._carrier, self._words | other._words)

    def __and__(self, other: "CellSet") -> "CellSet":
        _check_same(self._carrier, other._carrier)
        return CellSet(self._carrier, self._words & other._words)

    def __sub__(self, other: "CellSet") -> "CellSet":
        _check_same(self._carrier, other._carrier)
        return CellSet(self._carrier, self._words & ~other._words)

    def __le__(self, other: "CellSet") -> bool:
        _check_same(self._carrier, other._carrier)
        return not (self._words & ~other._words).any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CellSet):
            return NotImplemented
        return self._carrier is other._carrier and np.array_equal(self._words, other._words)

    def __hash__(self) -> int:
        return hash((id(self._carrier), self._words.tobytes()))

    def __repr__(self) -> str:
        idx = self.indices()
        shown = ", ".join(map(str, idx[:8])) + (", ..." if len(idx) > 8 else "")
        return f"CellSet({{{shown}}}, n={len(idx)})"


# -- constructors ------------------------------------------------------------


def identity(carrier: Carrier) -> Relation:
    """The diagonal relation ``{(x, x)}``."""
    return Relation.from_dense(carrier, np.eye(carrier.size, dtype=bool))


def empty(carrier: Carrier) -> Relation:
    return Relation(carrier, np.zeros((carrier.size, carrier.n_words), dtype="<u8"))


def full(carrier: Carrier) -> Relation:
    return Relation.from_dense(carrier, np.ones((carrier.size, carrier.size), dtype=bool))


# -- algebra -----------------------------------------------------------------


def compose(f: Relation, g: Relation) -> Relation:
    """Return ``g o f``: first ``f``, then ``g``.

    Each output row is the OR of the rows of ``g`` selected by the
    corresponding row of ``f``, evaluated word-parallel in row blocks.
    """
    _check_same(f.carrier, g.carrier)
    n, w = f.size, f.carrier.n_words
    fd = f.to_dense()
    gw = g.words
    out = np.empty((n, w), dtype="<u8")
    block = max(1, _COMPOSE_BLOCK_ELEMS // max(1, n * w))
    zero = np.uint64(0)
    for start in range(0, n, block):
        sel = fd[start : start + block]
        picked = np.where(sel[:, :, None], gw[None, :, :], zero)
        out[start : start + block] = np.bitwise_or.reduce(picked, axis=1)
    return Relation(f.carrier, _frozen(out))


def power(f: Relation, n: int) -> Relation:
    """``f`` composed with itself ``n`` times; ``power(f, 0)`` is the identity."""
    if n < 0:
        raise ValueError("power must be nonnegative")
    result = identity(f.carrier)
    base = f
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def union(f: Relation, g: Relation) -> Relation:
    _check_same(f.carrier, g.carrier)
    return Relation(f.carrier, _frozen(f.words | g.words))


def intersection(f: Relation, g: Relation) -> Relation:
    _check_same(f.carrier, g.carrier)
    return Relation(f.carrier, _frozen(f.words & g.words))


def difference(f: Relation, g: Relation) -> Relation:
    _check_same(f.carrier, g.carrier)
    return Relation(f.carrier, _frozen(f.words & ~g.words))


def transpose(f: Relation) -> Relation:
    return Relation.from_dense(f.carrier, f.to_dense().T)


def is_subset(f: Relation, g: Relation) -> bool:
    _check_same(f.carrier, g.carrier)
    return not (f.words & ~g.words).any()


def equals(f: Relation, g: Relation) -> bool:
    _check_same(f.carrier, g.carrier)
    return bool(np.array_equal(f.words, g.words))


def image(f: Relation, s: CellSet) -> CellSet:
    """``{y : (x, y) in f for some x in s}``."""
    _check_same(f.carrier, s.carrier)
    mask = s.to_mask()
    if not mask.any():
        return CellSet.none(f.carrier)
    return CellSet(f.carrier, np.bitwise_or.reduce(f.words[mask], axis=0))


def fixed_points(f: Relation) -> CellSet:
    """Cells related to themselves, i.e. the diagonal of ``f``."""
    i = np.arange(f.size)
    diag = (f.words[i, i >> 6] >> (i & 63).astype(np.uint64)) & np.uint64(1)
    return CellSet.from_mask(f.carrier, diag.astype(bool))
