import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conley import (
    Carrier,
    CellSet,
    IncompatibleCarrierError,
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

from conftest import carrier_of, rel, random_relation, relations, sizes


def compose_by_enumeration(f, g):
    """Independent check: enumerate every (x, z, y) triple."""
    n = f.size
    fd, gd = f.to_dense(), g.to_dense()
    out = np.zeros((n, n), dtype=bool)
    for x, z, y in itertools.product(range(n), repeat=3):
        if fd[x, z] and gd[z, y]:
            out[x, y] = True
    return out


def test_identity_is_diagonal():
    assert identity(carrier_of(3)).pairs() == [(0, 0), (1, 1), (2, 2)]


def test_fixed_points_examples():
    c = carrier_of(3)
    assert fixed_points(identity(c)).indices() == [0, 1, 2]
    assert fixed_points(rel(3, [(0, 1), (1, 0)])).indices() == []
    assert fixed_points(full(c)).indices() == [0, 1, 2]


@pytest.mark.parametrize(
    "f, g, expected",
    [
        ([(0, 1)], [(1, 2)], [(0, 2)]),
        ([(0, 1), (0, 2)], [(1, 0), (2, 0)], [(0, 0)]),
        ([(0, 1)], [(0, 2)], []),
    ],
)
def test_compose_examples(f, g, expected):
    assert compose(rel(3, f), rel(3, g)).pairs() == expected


def test_compose_reads_g_after_f():
    f, g = rel(3, [(0, 1)]), rel(3, [(1, 2)])
    assert compose(g, f).is_empty()


def test_power_examples():
    swap = rel(2, [(0, 1), (1, 0)])
    assert power(swap, 0) == identity(carrier_of(2))
    assert power(swap, 1) == swap
    assert power(swap, 2).pairs() == [(0, 0), (1, 1)]
    with pytest.raises(ValueError):
        power(swap, -1)


def test_lattice_examples():
    c = carrier_of(2)
    f = rel(2, [(0, 1)])
    g = rel(2, [(0, 1), (1, 0)])
    assert union(f, empty(c)) == f
    assert intersection(f, f) == f
    assert is_subset(f, g)
    assert not is_subset(g, f)
    assert difference(g, f).pairs() == [(1, 0)]
    assert transpose(f).pairs() == [(1, 0)]
    assert equals(f | g, g) and (f & g) == f and f <= g and g >= f


def test_image_examples():
    c = carrier_of(3)
    f = rel(3, [(0, 1), (1, 2)])
    s = CellSet.from_indices(c, [0, 1])
    assert image(f, s).indices() == [1, 2]
    assert image(identity(c), s) == s
    assert not image(f, CellSet.none(c))


def test_carrier_mismatch_is_an_error():
    a, b = Carrier.abstract(3), Carrier.abstract(3)
    fa, fb = identity(a), identity(b)
    for op in (compose, union, intersection, difference, is_subset, equals):
        with pytest.raises(IncompatibleCarrierError):
            op(fa, fb)
    with pytest.raises(IncompatibleCarrierError):
        image(fa, CellSet.all(b))
    assert fa != fb


@pytest.mark.parametrize("n", [1, 7, 63, 64, 65, 130])
def test_packing_round_trips(n, rng):
    c = Carrier.abstract(n)
    dense = rng.random((n, n)) < 0.3
    f = Relation.from_dense(c, dense)
    assert np.array_equal(f.to_dense(), dense)
    assert f.cardinality() == dense.sum()
    assert Relation.from_int_rows(c, f.int_rows()) == f
    assert np.array_equal(compose(f, f).to_dense(), (dense.astype(int) @ dense.astype(int)) > 0)
    assert np.array_equal(transpose(f).to_dense(), dense.T)
    # padding bits past n stay clear
    assert np.array_equal(fixed_points(f).to_mask(), np.diag(dense))


def test_relations_are_immutable():
    f = identity(carrier_of(3))
    with pytest.raises(ValueError):
        f.words[0, 0] = 0


def test_carrier_validation():
    with pytest.raises(ValueError):
        Carrier([0.1, 0.1], 0.1)
    with pytest.raises(ValueError):
        Carrier([0.1, 0.2], 0.0)
    with pytest.raises(ValueError):
        Carrier([], 0.5)
    with pytest.raises(IndexError):
        CellSet.from_indices(carrier_of(2), [2])


def test_compose_matches_enumeration_and_associates(rng):
    # at least 1000 random triples on carriers of size <= 8
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        f, g, h = (random_relation(rng, n) for _ in range(3))
        assert np.array_equal(compose(f, g).to_dense(), compose_by_enumeration(f, g))
        assert compose(compose(f, g), h) == compose(f, compose(g, h))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_identity_laws(data):
    n = data.draw(sizes)
    f = data.draw(relations(n))
    i = identity(f.carrier)
    assert compose(f, i) == f
    assert compose(i, f) == f


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_compose_preserves_inclusion(data):
    n = data.draw(sizes)
    f, g, extra_f, extra_g = (data.draw(relations(n)) for _ in range(4))
    f2, g2 = f | extra_f, g | extra_g
    assert compose(f, g) <= compose(f2, g2)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_transpose_involution_and_image_rows(data):
    n = data.draw(sizes)
    f = data.draw(relations(n))
    assert transpose(transpose(f)) == f
    members = data.draw(st.sets(st.integers(0, n - 1)))
    s = CellSet.from_indices(f.carrier, members)
    expected = CellSet.none(f.carrier)
    for x in members:
        expected = expected | f.row(x)
    assert image(f, s) == expected


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_power_adds_exponents(data):
    n = data.draw(st.integers(1, 6))
    f = data.draw(relations(n))
    m, k = data.draw(st.integers(0, 9)), data.draw(st.integers(0, 9))
    assert power(f, m + k) == compose(power(f, m), power(f, k))


def test_cellset_operations():
    c = carrier_of(5)
    a = CellSet.from_indices(c, [0, 2, 4])
    b = CellSet.from_indices(c, [2, 3])
    assert (a | b).indices() == [0, 2, 3, 4]
    assert (a & b).indices() == [2]
    assert (a - b).indices() == [0, 4]
    assert 2 in a and 1 not in a and 9 not in a
    assert len(a) == 3 and list(a) == [0, 2, 4]
    assert (a & b) <= a
