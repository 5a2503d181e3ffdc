"""
Relations on a finite set of cells
==================================

A relation is a boolean matrix stored as packed 64-bit rows.  Composition
reads left to right: ``compose(f, g)`` is "do f, then g".
"""

from conley import Carrier, Relation, compose, identity, image, power, CellSet

cells = Carrier.abstract(5)

# a 3-cycle 0 -> 1 -> 2 -> 0 with a tail 3 -> 4 -> 0
f = Relation.from_pairs(cells, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 0)])
print("f:", sorted(f.pairs()))

# composition and powers
print("f then f:", sorted(compose(f, f).pairs()))
print("f^3 restricted to the cycle is the identity there:",
      [p for p in power(f, 3).pairs() if p[0] < 3])

# images of cell sets
start = CellSet.from_indices(cells, [3])
for n in range(4):
    print(f"image of {{3}} after {n} steps:", image(power(f, n), start).indices())

# set operations behave like the matrix entries suggest
g = f | identity(cells)
print("f within f | I:", f <= g, " cardinalities:", f.cardinality(), g.cardinality())
print(g.to_dense().astype(int))
