"""
North-south map on the circle
=============================

x -> x + delta*sin(2 pi x) mod 1 pushes everything from 0 towards 1/2.
The chain recurrent set found on a grid is a neighbourhood of the two fixed
points, and the Morse graph orders the repeller above the attractor.
"""

from conley import EpsilonLadder, GridSpec, SystemSpec, analyze, bind_ladder, build_grid, outer_approx
from conley.oracles import pseudo_orbit_recurrent

system = SystemSpec("north_south", {"delta": 0.05})
grid = build_grid(GridSpec("unit_circle", 256))
f = outer_approx(system, grid)
h = grid.cell_diameter

for floor in (False, True):
    ladder = EpsilonLadder.in_cells((4, 2), h, include_identity_floor=floor)
    report = analyze(f, bind_ladder(ladder, grid))
    print(f"identity floor={floor}")
    print("  chain recurrent cells:", report.chain_recurrent.indices())
    print("  components:", [(c.indices()[0], c.indices()[-1]) for c in report.components])
    print("  Morse edges:", report.morse.edges)
    print("  both routes agree:", report.routes_equal)

# weak contraction at 1/2 (slope about 0.69) lets eps-errors hold points a few cells away
for mult in (4, 2):
    rec = pseudo_orbit_recurrent(f, mult * h).indices()
    print(f"pseudo-orbit recurrent cells at {mult}h: {len(rec)}")
