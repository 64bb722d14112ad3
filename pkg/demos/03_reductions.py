"""Reductions of the Chazy equation and the order-raising hodograph map.

Run: python demos/03_reductions.py
"""

from painleve_forge.ars import analyze
from painleve_forge.jet import JetPoly
from painleve_forge.odefile import load_fixture
from painleve_forge.parsing import format_poly
from painleve_forge.transforms import (
    InvariantPair,
    compare_equations,
    hodograph_raise,
    invert_dependent,
    reduction_residual,
)

u, x = JetPoly.u, JetPoly.x()
chazy = load_fixture("chazy").equation()
translation = load_fixture("chazy_translation")
abel = load_fixture("chazy_abel")
scaling = load_fixture("chazy_scaling")

steps = [
    ("translation invariants r = y, w = y'", chazy, InvariantPair(u(0), u(1)), translation),
    ("s = w/r^2, phi = w'/r", translation.equation(), InvariantPair.from_strings("w/r^2", "w'/r", "w", "r"), abel),
    ("scaling invariants chi = x y, psi = x^2 y'", chazy, InvariantPair(x * u(0), x * x * u(1)), scaling),
]
for label, orig, inv, target in steps:
    ok, cert = reduction_residual(orig, inv, target.equation())
    print(f"{label}:\n  {target.equation_text}\n  verified: {ok}")

raised = hodograph_raise(scaling.equation())
print("\nhodograph raise of the scaling reduction:")
print(" ", format_poly(raised, "Phi", "s"))
diff = compare_equations(raised, load_fixture("chazy_raised_alt").equation(), "Phi", "s")
print(f"  matches the alternative form: {diff.identical} ({len(diff.only_left)} + {len(diff.only_right)} unmatched monomials)")

for name, delta in (("raised", raised), ("raised, Phi -> 1/Psi", invert_dependent(raised))):
    for br in analyze(delta).branches:
        roots = [str(r) for r in br.resonance.rational_roots] if br.resonance else None
        state = br.direction.value if br.compatible else f"failed ({br.failure_stage})"
        print(f"  {name}: p = {br.balance.p}, resonances {roots}, {state}")
