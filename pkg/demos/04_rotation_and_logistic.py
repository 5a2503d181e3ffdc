"""
Rotation and logistic map
=========================

An irrational rotation is chain recurrent everywhere.  The logistic map at
r = 3.2 has fixed points 0 and 0.6875 and an attracting 2-cycle; the grid
picture keeps small neighbourhoods of each.
"""

import math

from conley import EpsilonLadder, GridSpec, SystemSpec, analyze, bind_ladder, build_grid, outer_approx

golden = (math.sqrt(5) - 1) / 2
rot = SystemSpec("rotation", {"alpha": golden})
grid = build_grid(GridSpec("unit_circle", 256))
rep = analyze(outer_approx(rot, grid), bind_ladder(EpsilonLadder.in_cells((1,), grid.cell_diameter), grid))
print(f"rotation: {len(rep.chain_recurrent)} of {grid.size} cells, {len(rep.components)} component")

logi = SystemSpec("logistic", {"r": 3.2})
grid = build_grid(GridSpec("unit_interval", 512))
rep = analyze(outer_approx(logi, grid), bind_ladder(EpsilonLadder.in_cells((2, 1), grid.cell_diameter), grid))
print("logistic chain recurrent cells:", rep.chain_recurrent.indices())


def runs(idx):
    """Contiguous stretches of cell indices, as (first, last) center pairs."""
    out, start = [], idx[0]
    for a, b in zip(idx, idx[1:] + [None]):
        if b != a + 1:
            out.append((round(float(grid.centers[start, 0]), 4), round(float(grid.centers[a, 0]), 4)))
            start = b
    return out


for comp in rep.components:
    print(f"  component of {len(comp)} cells spanning", runs(comp.indices()))
print("Morse edges:", rep.morse.edges)

r = 3.2
root = math.sqrt((r + 1) * (r - 3))
print("true 2-cycle:", round((r + 1 - root) / (2 * r), 4), round((r + 1 + root) / (2 * r), 4))
