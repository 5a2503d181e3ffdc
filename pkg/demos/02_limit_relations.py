"""
Limit relations
===============

The limit relation keeps the pairs joined by walks of every large length.
On a finite set that means: a walk from x to y passing through a cycle.
"""

import numpy as np

from conley import Carrier, Relation, cyclic_cells, limit_relation, scc_decomposition
from conley.oracles import limit_relation_bruteforce

cells = Carrier.abstract(6)
f = Relation.from_pairs(cells, [(0, 1), (1, 2), (2, 1), (3, 3), (4, 5)])

scc = scc_decomposition(f)
print("strongly connected components:", scc.components)
print("cells on a cycle:", cyclic_cells(f).indices())

lim = limit_relation(f)
print("limit relation:", sorted(lim.pairs()))
# 4 -> 5 is a dead end, so nothing starting at 4 survives

# the same answer by running f, f^2, f^3, ... until the sequence repeats
print("matches the power-sequence oracle:", limit_relation_bruteforce(f) == lim)

# a larger random relation, checked the same way
rng = np.random.default_rng(0)
big = Carrier.abstract(12)
agree = sum(
    limit_relation(r) == limit_relation_bruteforce(r)
    for r in (Relation.from_dense(big, rng.random((12, 12)) < 0.12) for _ in range(200))
)
print(f"{agree}/200 random relations on 12 cells agree")
