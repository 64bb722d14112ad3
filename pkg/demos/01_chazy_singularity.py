"""Singularity analysis of the Chazy equation, in y and in w = 1/y.

Run: python demos/01_chazy_singularity.py
"""

from painleve_forge.ars import analyze
from painleve_forge.odefile import load_fixture
from painleve_forge.parsing import format_poly
from painleve_forge.transforms import invert_dependent


def describe(title, delta, dep):
    print(f"== {title}: {format_poly(delta, dep)} = 0")
    report = analyze(delta, N=8)
    for br in report.branches:
        b = br.balance
        print(f"  balance p = {b.p}, leading coefficient {b.coeff}")
        if br.resonance is not None:
            print(f"    resonances {[str(r) for r in br.resonance.rational_roots]}")
        if br.compatible:
            coeffs = ", ".join(str(c) for c in br.series.coefficient_list())
            print(f"    {br.direction.value} series, free indices {sorted(br.series.free_indices)}")
            print(f"    coefficients {coeffs}")
        else:
            print(f"    fails at stage '{br.failure_stage}': {br.diagnostic}")
    for r in report.rejected:
        print(f"  rejected p = {r.p}: {r.reason}")
    print()


chazy = load_fixture("chazy").equation()
describe("Chazy", chazy, "y")

# The same equation after y -> 1/w expands in the opposite direction.
describe("Chazy in w = 1/y", invert_dependent(chazy), "w")
