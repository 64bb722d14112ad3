"""Numerical checks: series residual, integration along a complex path,
and a rough scan for movable singularities.

Run: python demos/04_numerics.py
"""

import cmath
import math

from painleve_forge import numerics as nm
from painleve_forge.ars import build_series, find_balances, resonances
from painleve_forge.odefile import load_fixture

chazy = load_fixture("chazy").equation()
(b,) = find_balances(chazy)
series = build_series(chazy, b, resonances(chazy, b), 12, {1: 1, 2: 1})

print("residual of the truncated Left series:")
for x in (4, 5 + 2j, 10, 20):
    print(f"  x = {x!s:>6}: {nm.residual_check(chazy, series, [x]):.3e}")

for a, z in ((5, 8), (5, 6 + 3j)):
    traj = nm.integrate(chazy, nm.eval_series_jet(series, a, 2), a, z)
    ref = nm.eval_series_jet(series, z, 0)[0]
    err = abs(traj.end_state[0] - ref) / abs(ref)
    print(f"integrate {a} -> {z}: {len(traj.t)} steps, relative gap to series {err:.2e}")

print("\nblow-up scan from y = 1, y' = 0.5, y'' = 0.2 at x = 1:")
dirs = [cmath.exp(2j * math.pi * k / 12) for k in range(12)]
for d, r in nm.barrier_scan(chazy, [1, 0.5, 0.2], 1, dirs):
    angle = math.degrees(cmath.phase(d)) % 360
    print(f"  {angle:5.0f} deg: {'no blow-up within 10' if r is None else f'blow-up near radius {r:.3f}'}")
